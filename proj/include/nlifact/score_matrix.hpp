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

#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "nlifact/gateway.hpp"
#include "nlifact/nli.hpp"
#include "nlifact/score_fn.hpp"

namespace nlifact {

/// M x N grid of NLI distributions: rows are premise (document) units,
/// columns are hypothesis (summary) units. Each class probability is held in
/// its own dense matrix.
struct ScoreMatrix {
  std::vector<std::string> premise_units;
  std::vector<std::string> hypothesis_units;
  Eigen::MatrixXd entailment;
  Eigen::MatrixXd neutral;
  Eigen::MatrixXd contradiction;

  Eigen::Index rows() const { return entailment.rows(); }
  Eigen::Index cols() const { return entailment.cols(); }

  NliDistribution cell(Eigen::Index m, Eigen::Index n) const {
    return {entailment(m, n), neutral(m, n), contradiction(m, n)};
  }

  /// Assembles a matrix from row-major cells (cells[m * N + n]). Throws
  /// InvalidArgument on size mismatch, empty axes or blank unit texts.
  static ScoreMatrix from_cells(std::vector<std::string> premise_units,
                                std::vector<std::string> hypothesis_units,
                                std::span<const NliDistribution> cells);
};

/// Element-wise fz over the matrix (p_e, or p_e - p_c).
Eigen::MatrixXd fz_matrix(const ScoreMatrix& matrix, ScoreFn fn);

/// Scores every (premise, hypothesis) combination through the gateway in one
/// batch. Throws EmptyDecomposition if either axis is empty.
ScoreMatrix score_all_pairs(std::vector<std::string> premise_units,
                            std::vector<std::string> hypothesis_units,
                            NliGateway& gateway);

}  // namespace nlifact
