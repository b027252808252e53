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

#include "nlifact/score_matrix.hpp"

#include <algorithm>
#include <cctype>

#include "nlifact/errors.hpp"

namespace nlifact {

namespace {

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

std::string to_string(ScoreFn fn) {
  return fn == ScoreFn::kEntail ? "p_e" : "p_e-p_c";
}

ScoreFn parse_score_fn(std::string_view text) {
  if (text == "p_e" || text == "e" || text == "entail") return ScoreFn::kEntail;
  if (text == "p_e-p_c" || text == "e-c" || text == "entail-minus-contra") {
    return ScoreFn::kEntailMinusContra;
  }
  throw InvalidArgument("unknown score function '" + std::string(text) +
                        "' (expected p_e or p_e-p_c)");
}

ScoreMatrix ScoreMatrix::from_cells(std::vector<std::string> premise_units,
                                    std::vector<std::string> hypothesis_units,
                                    std::span<const NliDistribution> cells) {
  const auto m = static_cast<Eigen::Index>(premise_units.size());
  const auto n = static_cast<Eigen::Index>(hypothesis_units.size());
  if (m == 0 || n == 0) throw InvalidArgument("score matrix needs M, N >= 1");
  if (cells.size() != static_cast<std::size_t>(m * n)) {
    throw InvalidArgument("score matrix expects " + std::to_string(m * n) +
                          " cells, got " + std::to_string(cells.size()));
  }
  if (std::any_of(premise_units.begin(), premise_units.end(), blank) ||
      std::any_of(hypothesis_units.begin(), hypothesis_units.end(), blank)) {
    throw InvalidArgument("score matrix unit texts must be non-empty");
  }

  ScoreMatrix out;
  out.entailment.resize(m, n);
  out.neutral.resize(m, n);
  out.contradiction.resize(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& d = cells[static_cast<std::size_t>(i * n + j)];
      out.entailment(i, j) = d.entailment;
      out.neutral(i, j) = d.neutral;
      out.contradiction(i, j) = d.contradiction;
    }
  }
  out.premise_units = std::move(premise_units);
  out.hypothesis_units = std::move(hypothesis_units);
  return out;
}

Eigen::MatrixXd fz_matrix(const ScoreMatrix& matrix, ScoreFn fn) {
  if (fn == ScoreFn::kEntail) return matrix.entailment;
  return matrix.entailment - matrix.contradiction;
}

ScoreMatrix score_all_pairs(std::vector<std::string> premise_units,
                            std::vector<std::string> hypothesis_units,
                            NliGateway& gateway) {
  if (premise_units.empty()) {
    throw EmptyDecomposition("document decomposed into zero premise units");
  }
  if (hypothesis_units.empty()) {
    throw EmptyDecomposition("summary decomposed into zero hypothesis units");
  }
  std::vector<ScoreRequest> requests;
  requests.reserve(premise_units.size() * hypothesis_units.size());
  for (const auto& p : premise_units) {
    for (const auto& h : hypothesis_units) requests.push_back({p, h});
  }
  const auto cells = gateway.score_pairs(requests);
  return ScoreMatrix::from_cells(std::move(premise_units),
                                 std::move(hypothesis_units), cells);
}

}  // namespace nlifact
