// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/metrics.h"

#include <gtest/gtest.h>

#include <cmath>

#include "../support/oracles.h"
#include "tinyrel/errors.h"
#include "tinyrel/random.h"

namespace tinyrel {
namespace {

using V = std::vector<double>;

// Random dataset with deliberate ties: scores drawn from a coarse grid.
void RandomDataset(Rng& rng, std::size_t n, V& scores, V& labels) {
  scores.resize(n);
  labels.resize(n);
  const std::uint64_t grid = 2 + rng.Below(40);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = static_cast<double>(rng.Below(grid)) / static_cast<double>(grid - 1);
    labels[i] = static_cast<double>(rng.Below(2));
  }
  labels[0] = 1.0;
  labels[n - 1] = 0.0;
}

TEST(Auc, SeparatedAndAllTied) {
  EXPECT_EQ(Auc(V{0.1, 0.2, 0.8, 0.9}, V{0, 0, 1, 1}), 1.0);
  EXPECT_EQ(Auc(V{0.9, 0.8, 0.2, 0.1}, V{0, 0, 1, 1}), 0.0);
  EXPECT_EQ(Auc(V{0.5, 0.5, 0.5, 0.5, 0.5}, V{0, 1, 0, 1, 1}), 0.5);
}

TEST(Auc, SingleClassAndBadLabelsAreErrors) {
  EXPECT_THROW(Auc(V{0.1, 0.2}, V{1, 1}), Error);
  EXPECT_THROW(Auc(V{0.1, 0.2}, V{0, 0}), Error);
  EXPECT_THROW(Auc(V{0.1, 0.2}, V{0, 0.5}), Error);
  EXPECT_THROW(Auc(V{0.1}, V{0, 1}), Error);
}

TEST(AucProperty, MatchesAllPairsOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    V s, l;
    RandomDataset(rng, 200, s, l);
    EXPECT_NEAR(Auc(s, l), oracle::BruteAuc(s, l), 1e-12);
  }
}

TEST(AucProperty, MonotoneTransformAndComplement) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    V s, l;
    RandomDataset(rng, 150, s, l);
    const double auc = Auc(s, l);
    V transformed = s;
    for (double& x : transformed) x = std::exp(3 * x) - 7;
    EXPECT_EQ(Auc(transformed, l), auc);
    V flipped = l;
    for (double& y : flipped) y = 1 - y;
    EXPECT_NEAR(Auc(s, flipped), 1 - auc, 1e-12);
  }
}

TEST(ThresholdMetrics, PerfectPredictions) {
  const V labels{0, 1, 1, 0, 1};
  const auto m = ComputeThresholdMetrics(labels, labels);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1, 1.0);
}

TEST(ThresholdMetrics, NoPositivePredictionsUseZeroConvention) {
  const auto m = ComputeThresholdMetrics(V{0.1, 0.2, 0.3}, V{1, 0, 1});
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
  EXPECT_NEAR(m.accuracy, 1.0 / 3.0, 1e-15);
}

TEST(ThresholdMetrics, ThresholdIsInclusive) {
  const auto m = ComputeThresholdMetrics(V{0.5}, V{1});
  EXPECT_EQ(m.recall, 1.0);
}

TEST(ThresholdMetricsProperty, MatchesConfusionOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    V s, l;
    RandomDataset(rng, 100, s, l);
    const double threshold = rng.Uniform01();
    const auto c = oracle::CountConfusion(s, l, threshold);
    const double precision = c.tp + c.fp > 0 ? c.tp / (c.tp + c.fp) : 0.0;
    const double recall = c.tp + c.fn > 0 ? c.tp / (c.tp + c.fn) : 0.0;
    const double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    const auto m = ComputeThresholdMetrics(s, l, threshold);
    EXPECT_EQ(m.accuracy, (c.tp + c.tn) / 100.0);
    EXPECT_EQ(m.precision, precision);
    EXPECT_EQ(m.recall, recall);
    EXPECT_EQ(m.f1, f1);
  }
}

TEST(ThresholdMetricsProperty, RecallNeverRisesWithThreshold) {
  Rng rng(4);
  V s, l;
  RandomDataset(rng, 300, s, l);
  double previous = 2.0;
  for (double t = 0.0; t <= 1.0001; t += 0.05) {
    const double recall = ComputeThresholdMetrics(s, l, t).recall;
    EXPECT_LE(recall, previous);
    previous = recall;
  }
}

TEST(Pcc, PerfectAndAnti) {
  const V a{0.1, 0.5, 0.3, 0.9};
  EXPECT_NEAR(Pcc(a, a), 1.0, 1e-15);
  V b;
  for (double x : a) b.push_back(-x + 4);
  EXPECT_NEAR(Pcc(a, b), -1.0, 1e-15);
}

TEST(Pcc, ZeroVarianceAndLengthErrors) {
  EXPECT_THROW(Pcc(V{1, 1, 1}, V{1, 2, 3}), Error);
  EXPECT_THROW(Pcc(V{1, 2}, V{1, 2, 3}), Error);
  EXPECT_THROW(Pcc(V{1}, V{1}), Error);
}

TEST(PccProperty, PositiveAffineInvarianceAndOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    V a(60), b(60);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = rng.Uniform01();
      b[i] = 0.5 * a[i] + 0.5 * rng.Uniform01();
    }
    const auto [ma, va] = oracle::TwoPassMoments(a);
    const auto [mb, vb] = oracle::TwoPassMoments(b);
    double cov = 0;
    for (std::size_t i = 0; i < a.size(); ++i) cov += (a[i] - ma) * (b[i] - mb);
    cov /= static_cast<double>(a.size());
    const double r = Pcc(a, b);
    EXPECT_NEAR(r, cov / std::sqrt(va * vb), 1e-12);
    V scaled = a;
    for (double& x : scaled) x = 3.5 * x + 2;
    EXPECT_NEAR(Pcc(scaled, b), r, 1e-12);
  }
}

TEST(Moments, Examples) {
  const auto c = ComputeMoments(V{0.3, 0.3, 0.3});
  EXPECT_NEAR(c.mean, 0.3, 1e-16);
  EXPECT_EQ(c.variance, 0.0);
  const auto m = ComputeMoments(V{0, 1});
  EXPECT_EQ(m.mean, 0.5);
  EXPECT_EQ(m.variance, 0.25);
  EXPECT_THROW(ComputeMoments(V{}), Error);
}

TEST(MomentsProperty, MatchesTwoPassOracle) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    V v(50);
    for (double& x : v) x = rng.Uniform01();
    const auto [mean, variance] = oracle::TwoPassMoments(v);
    const auto m = ComputeMoments(v);
    EXPECT_NEAR(m.mean, mean, 1e-12);
    EXPECT_NEAR(m.variance, variance, 1e-12);
  }
}

TEST(Evaluate, BinarizesForClassificationAndKeepsRawForPcc) {
  const V scores{0.9, 0.2, 0.6, 0.4};
  const V labels{0.8, 0.1, 0.4, 0.6};
  const auto r = Evaluate(scores, labels);
  EXPECT_EQ(r.count, 4u);
  EXPECT_EQ(r.auc, Auc(scores, V{1, 0, 0, 1}));
  EXPECT_EQ(r.accuracy, 0.5);
  ASSERT_TRUE(r.pcc.has_value());
  EXPECT_NEAR(*r.pcc, Pcc(scores, labels), 1e-15);
  EXPECT_NEAR(r.mean, 0.525, 1e-15);
  EXPECT_NEAR(r.label_mean, 0.475, 1e-15);

  const std::string text = FormatMetricsReport(r);
  for (const char* key : {"count=4\n", "auc=", "accuracy=0.5\n", "precision=", "recall=", "f1=", "pcc=",
                          "student_mean=", "student_variance=", "teacher_mean=", "teacher_variance="}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(Evaluate, ConstantScoresLeavePccMissing) {
  const auto r = Evaluate(V{0.3, 0.3, 0.3}, V{1, 0, 1});
  EXPECT_FALSE(r.pcc.has_value());
  EXPECT_EQ(r.auc, 0.5);
  EXPECT_NE(FormatMetricsReport(r).find("pcc=NA\n"), std::string::npos);
  EXPECT_THROW(Evaluate(V{0.9, 0.2}, V{1, 1}), Error);
  EXPECT_THROW(Evaluate(V{0.9, 0.2}, V{1, 1.5}), Error);
}

}  // namespace
}  // namespace tinyrel
