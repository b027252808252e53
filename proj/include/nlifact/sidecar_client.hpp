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

// HTTP/JSON client for the model sidecar.
//
//   POST /nli/batch    {"pairs": [{"premise", "hypothesis"}, ...]}
//                   -> {"scores": [{"p_e", "p_n", "p_c"}, ...]}
//   POST /scu/extract  {"text": str}
//                   -> {"sentences": [str, ...], "scus": [[scu, ...], ...]}
//   GET  /health    -> {"status": "ok", "model": str, "class_order": [...]}
//
// An scu is either a string or an object with a "text" member.

#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nlifact/nli.hpp"

namespace nlifact {

struct RemoteOptions {
  std::size_t max_batch_size = 32;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::size_t parallel_batches = 4;
  std::chrono::seconds timeout{120};
};

/// Parses a /nli/batch response body. Throws ProtocolError unless it holds
/// exactly `expected` distributions that each pass the wire tolerance.
std::vector<NliDistribution> parse_batch_response(const std::string& body,
                                                  std::size_t expected);

std::string make_batch_request(std::span<const ScoreRequest> requests);

class RemoteBackend final : public NliBackend {
 public:
  explicit RemoteBackend(BackendId id, RemoteOptions options = {});

  const BackendId& id() const override { return id_; }

  /// Sends the requests in batches of at most max_batch_size, up to
  /// parallel_batches at a time. Transport failures and 5xx replies are
  /// retried with exponential backoff; a batch that still fails raises
  /// BackendUnavailable naming its request range. 4xx replies and malformed
  /// bodies raise ProtocolError.
  std::vector<NliDistribution> score(
      std::span<const ScoreRequest> requests) override;

  /// HTTP requests issued so far, retries included.
  std::size_t http_requests() const { return http_requests_.load(); }

 private:
  std::vector<NliDistribution> score_batch(
      std::span<const ScoreRequest> batch, std::size_t first_index);

  BackendId id_;
  RemoteOptions options_;
  std::atomic<std::size_t> http_requests_{0};
};

struct SidecarHealth {
  std::string status;
  std::string model;
  std::vector<std::string> class_order;
  int http_status = 0;
};

SidecarHealth fetch_health(const std::string& endpoint,
                           std::chrono::seconds timeout = std::chrono::seconds{10});

struct ScuExtraction {
  std::vector<std::string> sentences;
  std::vector<std::vector<std::string>> scus;  // one list per sentence
};

/// Parses a /scu/extract response body; throws ProtocolError when malformed.
ScuExtraction parse_scu_response(const std::string& body);

ScuExtraction extract_scus(const std::string& endpoint, const std::string& text,
                           const RemoteOptions& options = {});

}  // namespace nlifact
