// Copyright 2026 The nlifact Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Binary-classification and correlation metrics. Labels are 0/1 with 1 =
// consistent (the positive class); a score at or above the threshold
// predicts consistent.

#pragma once

#include <span>
#include <vector>

namespace nlifact {

/// (TPR + TNR) / 2. Throws InvalidArgument on length mismatch, empty input,
/// values other than 0/1, or labels missing a class.
double balanced_accuracy(std::span<const int> predictions,
                         std::span<const int> labels);

/// 1 where score >= threshold, else 0.
std::vector<int> predict(std::span<const double> scores, double threshold);

/// Candidate thresholds in ascending order: min - eps, the midpoints of
/// consecutive distinct scores, max + eps, with eps = 1e-6 * (max - min + 1).
std::vector<double> threshold_candidates(std::span<const double> scores);

struct ThresholdChoice {
  double threshold = 0.0;
  double balanced_accuracy = 0.0;
};

/// Candidate with the best balanced accuracy; ties go to the smallest
/// threshold. Throws InvalidArgument on non-finite scores or a single-class
/// label set.
ThresholdChoice tune_threshold(std::span<const double> scores,
                               std::span<const int> labels);

struct Correlation {
  double r = 0.0;
  double p = 1.0;  // two-sided
};

/// Sample Pearson r with a two-sided p-value from the t statistic
/// r * sqrt((n - 2) / (1 - r^2)) on n - 2 degrees of freedom. Throws
/// InvalidArgument when n < 3 or lengths differ, UndefinedCorrelation when
/// either input is constant.
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Pearson on average ranks (ties share the mean of their ranks); the
/// p-value uses the same t approximation.
Correlation spearman(std::span<const double> x, std::span<const double> y);

/// 1-based average ranks.
std::vector<double> average_ranks(std::span<const double> values);

/// Two-sided p-value for correlation r over n samples.
double correlation_p_value(double r, std::size_t n);

}  // namespace nlifact
