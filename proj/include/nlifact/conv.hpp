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

// Histogram + learned linear transform aggregation.
//
// Each hypothesis column of fz values (mapped onto [0, 1]) becomes a
// normalised histogram h_n over `bins` equal bins. The unit score is
// logistic(w . h_n + b) and the summary score is the mean over units.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nlifact/aggregate.hpp"
#include "nlifact/score_matrix.hpp"

namespace nlifact {

inline constexpr int kDefaultConvBins = 50;

struct ConvParams {
  int bins = kDefaultConvBins;
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(kDefaultConvBins);
  double bias = 0.0;

  static ConvParams zeros(int bins);
  /// Throws InvalidArgument unless bins >= 2 and weights has `bins` entries.
  void validate() const;

  /// {"bins": int, "weights": [...], "bias": float}
  std::string to_json() const;
  static ConvParams from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static ConvParams load(const std::filesystem::path& path);
};

/// bins x N histogram features of a score matrix under `fn`.
Eigen::MatrixXd conv_features(const ScoreMatrix& matrix, ScoreFn fn, int bins);

/// Summary score from precomputed features.
double conv_score(const Eigen::MatrixXd& features, const ConvParams& params);

FactualityScore conv_aggregate(const ScoreMatrix& matrix, ScoreFn fn,
                               const ConvParams& params);

struct ConvTrainingOptions {
  int iterations = 3000;
  /// Initial (and maximum) gradient step; halved until the loss decreases.
  double max_step = 32.0;
  std::uint64_t seed = 20230601;
  double init_scale = 0.01;
  int checkpoint_every = 100;
};

struct ConvTrainingResult {
  ConvParams params;
  /// Loss at iteration 0, every checkpoint_every iterations, and at the end.
  std::vector<double> loss_history;
};

struct ConvExample {
  ScoreMatrix matrix;
  bool consistent = false;
};

/// Mean binary cross-entropy of conv_score against labels.
double conv_loss(const std::vector<Eigen::MatrixXd>& features,
                 const std::vector<bool>& labels, const ConvParams& params);

/// Full-batch gradient descent on conv_loss with a backtracking step, so the
/// loss never increases between iterations. Initial weights are small
/// uniform values drawn from a generator seeded with options.seed. Throws
/// InvalidArgument unless both labels occur.
ConvTrainingResult fit_conv(const std::vector<Eigen::MatrixXd>& features,
                            const std::vector<bool>& labels, int bins,
                            const ConvTrainingOptions& options = {});

ConvTrainingResult fit_conv(const std::vector<ConvExample>& examples,
                            ScoreFn fn, int bins,
                            const ConvTrainingOptions& options = {});

ConvParams train_conv(const std::vector<ConvExample>& examples, ScoreFn fn,
                      int bins, const ConvTrainingOptions& options = {});

}  // namespace nlifact
