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

#include "nlifact/gateway.hpp"

#include <unordered_map>

#include "nlifact/errors.hpp"

namespace nlifact {

NliGateway::NliGateway(std::shared_ptr<NliBackend> backend,
                       std::shared_ptr<ScoreCache> cache)
    : backend_(std::move(backend)), cache_(std::move(cache)) {
  if (!backend_) throw InvalidArgument("gateway needs a backend");
}

std::vector<NliDistribution> NliGateway::score_pairs(
    std::span<const ScoreRequest> requests) {
  for (const auto& r : requests) validate(r);

  const std::string& model = backend_->id().model_identifier;
  std::vector<NliDistribution> out(requests.size());

  // Unique cache misses, each remembered with every request index it serves.
  std::vector<ScoreRequest> misses;
  std::vector<std::string> miss_keys;
  std::vector<std::vector<std::size_t>> miss_targets;
  std::unordered_map<std::string, std::size_t> miss_index;

  for (std::size_t i = 0; i < requests.size(); ++i) {
    std::string key = cache_key(model, requests[i].premise, requests[i].hypothesis);
    if (cache_) {
      if (auto hit = cache_->lookup_key(key)) {
        out[i] = *hit;
        ++cache_hits_;
        continue;
      }
    }
    auto [it, inserted] = miss_index.try_emplace(key, misses.size());
    if (inserted) {
      misses.push_back(requests[i]);
      miss_keys.push_back(std::move(key));
      miss_targets.emplace_back();
    }
    miss_targets[it->second].push_back(i);
  }
  if (misses.empty()) return out;

  ++backend_calls_;
  backend_pairs_ += misses.size();
  const auto scored = backend_->score(misses);
  if (scored.size() != misses.size()) {
    throw ProtocolError("backend returned " + std::to_string(scored.size()) +
                        " distributions for " + std::to_string(misses.size()) +
                        " pairs");
  }

  std::vector<ScoreCache::Entry> fresh;
  fresh.reserve(misses.size());
  for (std::size_t m = 0; m < misses.size(); ++m) {
    if (!is_valid(scored[m], kWireTolerance)) {
      throw ProtocolError("backend '" + model + "' returned an invalid distribution");
    }
    for (std::size_t i : miss_targets[m]) out[i] = scored[m];
    fresh.push_back({miss_keys[m], model, scored[m]});
  }
  if (cache_) cache_->put_many(fresh);
  return out;
}

NliDistribution NliGateway::score_pair(const ScoreRequest& request) {
  return score_pairs(std::span<const ScoreRequest>(&request, 1)).front();
}

std::shared_ptr<NliBackend> make_backend(const BackendId& id,
                                         const RemoteOptions& options) {
  validate(id);
  switch (id.kind) {
    case BackendKind::kMock:
      return std::make_shared<MockBackend>(id);
    case BackendKind::kRemote:
      return std::make_shared<RemoteBackend>(id, options);
  }
  throw InvalidArgument("unknown backend kind");
}

}  // namespace nlifact
