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

#include "nlifact/nli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "nlifact/errors.hpp"
#include "nlifact/segmentation.hpp"

namespace nlifact {

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

bool is_valid(const NliDistribution& dist, double tolerance) noexcept {
  if (!in_unit_interval(dist.entailment) || !in_unit_interval(dist.neutral) ||
      !in_unit_interval(dist.contradiction)) {
    return false;
  }
  const double sum = dist.entailment + dist.neutral + dist.contradiction;
  return std::abs(sum - 1.0) <= tolerance;
}

void validate(const ScoreRequest& request) {
  if (is_blank(request.premise)) throw InvalidArgument("empty premise");
  if (is_blank(request.hypothesis)) throw InvalidArgument("empty hypothesis");
}

BackendId BackendId::mock(std::string model) {
  return {BackendKind::kMock, std::move(model), {}};
}

BackendId BackendId::remote(std::string model, std::string endpoint) {
  return {BackendKind::kRemote, std::move(model), std::move(endpoint)};
}

void validate(const BackendId& id) {
  if (id.model_identifier.empty()) {
    throw InvalidArgument("backend model identifier is empty");
  }
  if (id.kind == BackendKind::kRemote && id.endpoint.empty()) {
    throw InvalidArgument("remote backend '" + id.model_identifier +
                          "' has no endpoint");
  }
}

std::vector<std::string> overlap_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view tok : whitespace_tokens(text)) {
    std::size_t b = 0;
    std::size_t e = tok.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(tok[e - 1]))) --e;
    if (b == e) continue;
    std::string t(tok.substr(b, e - b));
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
    out.push_back(std::move(t));
  }
  return out;
}

NliDistribution mock_score(std::string_view premise,
                           std::string_view hypothesis) {
  const auto hyp_tokens = overlap_tokens(hypothesis);
  if (hyp_tokens.empty()) {
    throw InvalidArgument("mock backend: hypothesis has no tokens");
  }
  const auto prem_tokens = overlap_tokens(premise);
  const std::set<std::string> hyp(hyp_tokens.begin(), hyp_tokens.end());
  const std::set<std::string> prem(prem_tokens.begin(), prem_tokens.end());
  std::size_t shared = 0;
  for (const auto& t : hyp) shared += prem.count(t);
  const double overlap =
      static_cast<double>(shared) / static_cast<double>(hyp.size());
  const double rest = (1.0 - overlap) / 2.0;
  return {overlap, rest, rest};
}

MockBackend::MockBackend(BackendId id) : id_(std::move(id)) { validate(id_); }

std::vector<NliDistribution> MockBackend::score(
    std::span<const ScoreRequest> requests) {
  std::vector<NliDistribution> out;
  out.reserve(requests.size());
  for (const auto& r : requests) out.push_back(mock_score(r.premise, r.hypothesis));
  return out;
}

}  // namespace nlifact
