// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace tinyrel {

// Rank-based (Mann-Whitney) AUC with average ranks for ties. Labels must be
// 0 or 1 with both classes present; throws Error(kUsage) otherwise.
double Auc(std::span<const double> scores, std::span<const double> labels);

struct ThresholdMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Predicts positive iff score >= threshold. Precision and recall are 0 when
// their denominator is 0; f1 is 0 when precision + recall is 0.
ThresholdMetrics ComputeThresholdMetrics(std::span<const double> scores,
                                         std::span<const double> labels, double threshold = 0.5);

// Sample Pearson correlation; Error(kNumeric) if either side is constant.
double Pcc(std::span<const double> a, std::span<const double> b);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // population form, divides by n
};

Moments ComputeMoments(std::span<const double> values);

struct MetricsReport {
  std::size_t count = 0;
  double threshold = 0.5;
  double auc = 0.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> pcc;  // scores vs raw labels, when labels vary
  double mean = 0.0;          // of scores
  double variance = 0.0;
  double label_mean = 0.0;
  double label_variance = 0.0;
};

// Labels may be real in [0, 1]: classification metrics use labels
// binarized at 0.5; PCC and label moments use the raw values.
MetricsReport Evaluate(std::span<const double> scores, std::span<const double> labels,
                       double threshold = 0.5);

// Flat "key=value" lines in a fixed key order.
std::string FormatMetricsReport(const MetricsReport& report);

}  // namespace tinyrel
