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

#include "nlifact/aggregate.hpp"

namespace nlifact {

FactualityScore zs_aggregate(const ScoreMatrix& matrix, ScoreFn fn) {
  return sentli_aggregate(matrix, fn, Aggregation::kSoft);
}

FactualityScore sentli_aggregate(const ScoreMatrix& matrix, ScoreFn fn,
                                 Aggregation mode) {
  const Eigen::VectorXd units = column_max(fz_matrix(matrix, fn));
  FactualityScore out;
  out.value = mode == Aggregation::kSoft ? soft_aggregate(units)
                                         : hard_aggregate(units);
  out.per_hypothesis_unit = to_std_vector(units);
  return out;
}

}  // namespace nlifact
