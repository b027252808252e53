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

#include <string>
#include <string_view>

#include "nlifact/nli.hpp"

namespace nlifact {

/// Scalar read-out of an NLI distribution.
enum class ScoreFn {
  kEntail,             // p_e, in [0, 1]
  kEntailMinusContra,  // p_e - p_c, in [-1, 1]
};

inline double fz(const NliDistribution& dist, ScoreFn fn) noexcept {
  return fn == ScoreFn::kEntail ? dist.entailment
                                : dist.entailment - dist.contradiction;
}

/// Maps an fz value onto [0, 1]: identity for kEntail, (x + 1) / 2 for
/// kEntailMinusContra.
inline double to_unit_interval(double value, ScoreFn fn) noexcept {
  return fn == ScoreFn::kEntail ? value : (value + 1.0) / 2.0;
}

/// "p_e" or "p_e-p_c".
std::string to_string(ScoreFn fn);
/// Accepts "p_e", "e", "entail", "p_e-p_c", "e-c", "entail-minus-contra".
ScoreFn parse_score_fn(std::string_view text);

}  // namespace nlifact
