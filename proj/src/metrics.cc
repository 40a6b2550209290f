// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "tinyrel/errors.h"
#include "tinyrel/tsv.h"

namespace tinyrel {
namespace {

void CheckInputs(std::span<const double> scores, std::span<const double> labels, bool binary) {
  if (scores.size() != labels.size()) throw UsageError("scores and labels differ in length");
  if (scores.empty()) throw UsageError("metrics need at least one row");
  for (double s : scores) {
    if (!std::isfinite(s)) throw NumericError("non-finite score");
  }
  if (binary) {
    for (double y : labels) {
      if (y != 0.0 && y != 1.0) throw UsageError("labels must be 0 or 1");
    }
  }
}

}  // namespace

double Auc(std::span<const double> scores, std::span<const double> labels) {
  CheckInputs(scores, labels, true);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of 1-based average ranks of the positives, kept doubled to stay integral.
  std::uint64_t positives = 0;
  std::uint64_t doubled_rank_sum = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const std::uint64_t doubled_rank = i + 1 + j;  // (i+1) + j = 2 * mean rank
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1.0) {
        ++positives;
        doubled_rank_sum += doubled_rank;
      }
    }
    i = j;
  }
  const std::uint64_t negatives = n - positives;
  if (positives == 0 || negatives == 0) throw UsageError("AUC needs both positive and negative labels");
  const double u = (static_cast<double>(doubled_rank_sum) -
                    static_cast<double>(positives) * static_cast<double>(positives + 1)) / 2.0;
  return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

ThresholdMetrics ComputeThresholdMetrics(std::span<const double> scores,
                                         std::span<const double> labels, double threshold) {
  CheckInputs(scores, labels, true);
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] == 1.0;
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  ThresholdMetrics m;
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(scores.size());
  m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

Moments ComputeMoments(std::span<const double> values) {
  if (values.empty()) throw UsageError("moments need at least one value");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, ss / n};
}

double Pcc(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("PCC inputs differ in length");
  if (a.size() < 2) throw UsageError("PCC needs at least two points");
  const double ma = ComputeMoments(a).mean;
  const double mb = ComputeMoments(b).mean;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw NumericError("PCC undefined for zero-variance input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

MetricsReport Evaluate(std::span<const double> scores, std::span<const double> labels,
                       double threshold) {
  CheckInputs(scores, labels, false);
  std::vector<double> binary(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!(labels[i] >= 0.0 && labels[i] <= 1.0)) throw UsageError("labels must lie in [0, 1]");
    binary[i] = labels[i] >= 0.5 ? 1.0 : 0.0;
  }
  MetricsReport r;
  r.count = scores.size();
  r.threshold = threshold;
  r.auc = Auc(scores, binary);
  const ThresholdMetrics t = ComputeThresholdMetrics(scores, binary, threshold);
  r.accuracy = t.accuracy;
  r.precision = t.precision;
  r.recall = t.recall;
  r.f1 = t.f1;
  const Moments s = ComputeMoments(scores);
  const Moments l = ComputeMoments(labels);
  r.mean = s.mean;
  r.variance = s.variance;
  r.label_mean = l.mean;
  r.label_variance = l.variance;
  if (scores.size() >= 2 && s.variance > 0.0 && l.variance > 0.0) r.pcc = Pcc(scores, labels);
  return r;
}

std::string FormatMetricsReport(const MetricsReport& r) {
  std::ostringstream out;
  out << "count=" << r.count << '\n'
      << "threshold=" << FormatDouble(r.threshold) << '\n'
      << "auc=" << FormatDouble(r.auc) << '\n'
      << "accuracy=" << FormatDouble(r.accuracy) << '\n'
      << "precision=" << FormatDouble(r.precision) << '\n'
      << "recall=" << FormatDouble(r.recall) << '\n'
      << "f1=" << FormatDouble(r.f1) << '\n'
      << "pcc=" << (r.pcc ? FormatDouble(*r.pcc) : std::string("NA")) << '\n'
      << "student_mean=" << FormatDouble(r.mean) << '\n'
      << "student_variance=" << FormatDouble(r.variance) << '\n'
      << "teacher_mean=" << FormatDouble(r.label_mean) << '\n'
      << "teacher_variance=" << FormatDouble(r.label_variance) << '\n';
  return out.str();
}

}  // namespace tinyrel
