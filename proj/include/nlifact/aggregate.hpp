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

// Score-matrix aggregation. The generic kernels take any Eigen dense
// expression holding fz values (rows = premise units, columns = hypothesis
// units) and are templated on its scalar type.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nlifact/score_fn.hpp"
#include "nlifact/score_matrix.hpp"

namespace nlifact {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Per hypothesis unit, the best score over premise units.
template <typename Derived>
Vector<typename Derived::Scalar> column_max(const Eigen::MatrixBase<Derived>& fz) {
  return fz.colwise().maxCoeff().transpose();
}

template <typename Derived>
typename Derived::Scalar soft_aggregate(const Eigen::MatrixBase<Derived>& unit_scores) {
  return unit_scores.mean();
}

template <typename Derived>
typename Derived::Scalar hard_aggregate(const Eigen::MatrixBase<Derived>& unit_scores) {
  return unit_scores.minCoeff();
}

/// Normalised histogram of every column over `bins` equal-width bins on
/// [0, 1]; the last bin is right-closed. Values are clamped into [0, 1].
/// Returns a bins x N matrix whose columns sum to one.
template <typename Derived>
Matrix<typename Derived::Scalar> column_histograms(
    const Eigen::MatrixBase<Derived>& values01, int bins) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index rows = values01.rows();
  Matrix<Scalar> hist = Matrix<Scalar>::Zero(bins, values01.cols());
  const Scalar weight = Scalar(1) / static_cast<Scalar>(rows);
  for (Eigen::Index n = 0; n < values01.cols(); ++n) {
    for (Eigen::Index m = 0; m < rows; ++m) {
      const Scalar v = std::clamp(values01(m, n), Scalar(0), Scalar(1));
      const auto bin = std::min<Eigen::Index>(
          static_cast<Eigen::Index>(std::floor(v * static_cast<Scalar>(bins))),
          bins - 1);
      hist(bin, n) += weight;
    }
  }
  return hist;
}

template <typename Scalar>
Scalar logistic(Scalar x) {
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

enum class Aggregation { kSoft, kHard };

struct FactualityScore {
  double value = 0.0;
  /// One entry per hypothesis unit (per summary sentence for SCU methods).
  std::vector<double> per_hypothesis_unit;
  std::string method;
};

inline std::vector<double> to_std_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

/// Column max, then mean.
FactualityScore zs_aggregate(const ScoreMatrix& matrix, ScoreFn fn);

/// Column max, then mean (soft) or min (hard).
FactualityScore sentli_aggregate(const ScoreMatrix& matrix, ScoreFn fn,
                                 Aggregation mode);

}  // namespace nlifact
