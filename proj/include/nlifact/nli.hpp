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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlifact {

/// Tolerance on |p_e + p_n + p_c - 1| for distributions produced in process.
inline constexpr double kDistributionTolerance = 1e-6;
/// Tolerance applied to distributions arriving over the sidecar wire, which
/// carries float32 softmax outputs.
inline constexpr double kWireTolerance = 1e-4;

/// Output of an NLI model for one premise/hypothesis pair.
struct NliDistribution {
  double entailment = 0.0;
  double neutral = 0.0;
  double contradiction = 0.0;

  bool operator==(const NliDistribution&) const = default;
};

/// True when every component lies in [0, 1] and the sum is within
/// `tolerance` of one.
bool is_valid(const NliDistribution& dist,
              double tolerance = kDistributionTolerance) noexcept;

struct ScoreRequest {
  std::string premise;
  std::string hypothesis;

  bool operator==(const ScoreRequest&) const = default;
};

/// Throws InvalidArgument unless premise and hypothesis are non-blank.
void validate(const ScoreRequest& request);

enum class BackendKind { kRemote, kMock };

struct BackendId {
  BackendKind kind = BackendKind::kMock;
  std::string model_identifier = "mock-overlap";
  std::string endpoint;  // remote only, e.g. "http://127.0.0.1:8080"

  static BackendId mock(std::string model = "mock-overlap");
  static BackendId remote(std::string model, std::string endpoint);
};

/// Throws InvalidArgument when a remote id lacks an endpoint or the model
/// identifier is empty.
void validate(const BackendId& id);

/// A source of NLI distributions. Implementations must return exactly one
/// distribution per request, in request order, and be safe to call from
/// several threads.
class NliBackend {
 public:
  virtual ~NliBackend() = default;
  virtual const BackendId& id() const = 0;
  virtual std::vector<NliDistribution> score(
      std::span<const ScoreRequest> requests) = 0;
};

/// Lower-cased whitespace tokens with leading/trailing ASCII punctuation
/// stripped; tokens that become empty are dropped.
std::vector<std::string> overlap_tokens(std::string_view text);

/// Deterministic token-overlap stand-in for an NLI model. With o the share of
/// unique hypothesis tokens also present in the premise, returns
/// (o, (1-o)/2, (1-o)/2). Throws InvalidArgument if the hypothesis has no
/// tokens.
NliDistribution mock_score(std::string_view premise,
                           std::string_view hypothesis);

class MockBackend final : public NliBackend {
 public:
  explicit MockBackend(BackendId id = BackendId::mock());

  const BackendId& id() const override { return id_; }
  std::vector<NliDistribution> score(
      std::span<const ScoreRequest> requests) override;

 private:
  BackendId id_;
};

}  // namespace nlifact
