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

#include <atomic>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "nlifact/nli.hpp"
#include "nlifact/score_cache.hpp"
#include "nlifact/sidecar_client.hpp"

namespace nlifact {

/// Cache-fronted access to an NLI backend.
///
/// score_pairs() validates every request, serves what it can from the cache,
/// sends the remaining unique pairs to the backend in one call and writes the
/// new results back. Every distribution that comes back from the backend is
/// checked at wire tolerance; nothing is renormalised. Thread-safe.
class NliGateway {
 public:
  explicit NliGateway(std::shared_ptr<NliBackend> backend,
                      std::shared_ptr<ScoreCache> cache = nullptr);

  std::vector<NliDistribution> score_pairs(std::span<const ScoreRequest> requests);
  NliDistribution score_pair(const ScoreRequest& request);

  const BackendId& backend_id() const { return backend_->id(); }
  ScoreCache* cache() const { return cache_.get(); }

  /// Number of backend score() calls made.
  std::size_t backend_invocations() const { return backend_calls_.load(); }
  /// Number of pairs sent to the backend.
  std::size_t backend_pairs() const { return backend_pairs_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }

 private:
  std::shared_ptr<NliBackend> backend_;
  std::shared_ptr<ScoreCache> cache_;
  std::atomic<std::size_t> backend_calls_{0};
  std::atomic<std::size_t> backend_pairs_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

/// Builds the backend named by `id`.
std::shared_ptr<NliBackend> make_backend(const BackendId& id,
                                         const RemoteOptions& options = {});

}  // namespace nlifact
