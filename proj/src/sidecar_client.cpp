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

#include "nlifact/sidecar_client.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "nlifact/errors.hpp"

namespace nlifact {

namespace {

using json = nlohmann::json;

httplib::Client make_client(const std::string& endpoint,
                            std::chrono::seconds timeout) {
  httplib::Client client(endpoint);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return client;
}

json parse_object(const std::string& body, const char* what) {
  json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw ProtocolError(std::string(what) + ": response is not a JSON object");
  }
  return j;
}

double probability(const json& item, const char* name, std::size_t index) {
  auto it = item.find(name);
  if (it == item.end() || !it->is_number()) {
    throw ProtocolError("score " + std::to_string(index) + ": missing numeric " +
                        name);
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) {
    throw ProtocolError("score " + std::to_string(index) + ": non-finite " + name);
  }
  return v;
}

std::string range_label(std::size_t first, std::size_t count) {
  return "[" + std::to_string(first) + ", " + std::to_string(first + count) + ")";
}

}  // namespace

std::string make_batch_request(std::span<const ScoreRequest> requests) {
  json pairs = json::array();
  for (const auto& r : requests) {
    pairs.push_back({{"premise", r.premise}, {"hypothesis", r.hypothesis}});
  }
  return json{{"pairs", std::move(pairs)}}.dump();
}

std::vector<NliDistribution> parse_batch_response(const std::string& body,
                                                  std::size_t expected) {
  const json j = parse_object(body, "/nli/batch");
  auto scores = j.find("scores");
  if (scores == j.end() || !scores->is_array()) {
    throw ProtocolError("/nli/batch: missing \"scores\" array");
  }
  if (scores->size() != expected) {
    throw ProtocolError("/nli/batch: expected " + std::to_string(expected) +
                        " scores, got " + std::to_string(scores->size()));
  }
  std::vector<NliDistribution> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < scores->size(); ++i) {
    const json& item = (*scores)[i];
    if (!item.is_object()) {
      throw ProtocolError("score " + std::to_string(i) + " is not an object");
    }
    NliDistribution d{probability(item, "p_e", i), probability(item, "p_n", i),
                      probability(item, "p_c", i)};
    if (!is_valid(d, kWireTolerance)) {
      throw ProtocolError("score " + std::to_string(i) +
                          " is not a probability distribution (sum " +
                          std::to_string(d.entailment + d.neutral +
                                         d.contradiction) +
                          ")");
    }
    out.push_back(d);
  }
  return out;
}

RemoteBackend::RemoteBackend(BackendId id, RemoteOptions options)
    : id_(std::move(id)), options_(options) {
  validate(id_);
  if (id_.kind != BackendKind::kRemote) {
    throw InvalidArgument("RemoteBackend needs a remote backend id");
  }
  if (options_.max_batch_size == 0 || options_.max_attempts < 1 ||
      options_.parallel_batches == 0) {
    throw InvalidArgument("remote options must be positive");
  }
}

std::vector<NliDistribution> RemoteBackend::score_batch(
    std::span<const ScoreRequest> batch, std::size_t first_index) {
  const std::string body = make_batch_request(batch);
  auto backoff = options_.initial_backoff;
  std::string last_failure;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    ++http_requests_;
    auto client = make_client(id_.endpoint, options_.timeout);
    auto res = client.Post("/nli/batch", body, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError("/nli/batch " + range_label(first_index, batch.size()) +
                          ": HTTP " + std::to_string(res->status) + ": " +
                          res->body);
    }
    return parse_batch_response(res->body, batch.size());
  }
  throw BackendUnavailable("batch " + range_label(first_index, batch.size()) +
                           " failed after " +
                           std::to_string(options_.max_attempts) +
                           " attempts against " + id_.endpoint + " (" +
                           last_failure + ")");
}

std::vector<NliDistribution> RemoteBackend::score(
    std::span<const ScoreRequest> requests) {
  std::vector<NliDistribution> out(requests.size());
  const std::size_t batch = options_.max_batch_size;

  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < requests.size(); i += batch) starts.push_back(i);

  // Waves of at most parallel_batches concurrent requests; results land by
  // request index so completion order never matters.
  for (std::size_t w = 0; w < starts.size(); w += options_.parallel_batches) {
    const std::size_t wave_end =
        std::min(starts.size(), w + options_.parallel_batches);
    std::vector<std::future<std::vector<NliDistribution>>> pending;
    for (std::size_t b = w; b < wave_end; ++b) {
      const std::size_t first = starts[b];
      const std::size_t count = std::min(batch, requests.size() - first);
      pending.push_back(std::async(std::launch::async, [this, requests, first,
                                                        count] {
        return score_batch(requests.subspan(first, count), first);
      }));
    }
    for (std::size_t b = w; b < wave_end; ++b) {
      auto scored = pending[b - w].get();
      std::copy(scored.begin(), scored.end(), out.begin() + starts[b]);
    }
  }
  return out;
}

SidecarHealth fetch_health(const std::string& endpoint,
                           std::chrono::seconds timeout) {
  auto client = make_client(endpoint, timeout);
  auto res = client.Get("/health");
  if (!res) {
    throw BackendUnavailable("GET /health at " + endpoint + ": " +
                             httplib::to_string(res.error()));
  }
  SidecarHealth health;
  health.http_status = res->status;
  const json j = parse_object(res->body, "/health");
  health.status = j.value("status", "");
  health.model = j.value("model", "");
  if (auto it = j.find("class_order"); it != j.end() && it->is_array()) {
    for (const auto& c : *it) {
      if (c.is_string()) health.class_order.push_back(c.get<std::string>());
    }
  }
  return health;
}

ScuExtraction parse_scu_response(const std::string& body) {
  const json j = parse_object(body, "/scu/extract");
  auto sentences = j.find("sentences");
  auto scus = j.find("scus");
  if (sentences == j.end() || !sentences->is_array() || scus == j.end() ||
      !scus->is_array()) {
    throw ProtocolError("/scu/extract: missing \"sentences\" or \"scus\" array");
  }
  ScuExtraction out;
  for (const auto& s : *sentences) {
    if (!s.is_string()) throw ProtocolError("/scu/extract: non-string sentence");
    out.sentences.push_back(s.get<std::string>());
  }
  for (const auto& group : *scus) {
    if (!group.is_array()) throw ProtocolError("/scu/extract: scus group is not a list");
    std::vector<std::string> texts;
    for (const auto& scu : group) {
      if (scu.is_string()) {
        texts.push_back(scu.get<std::string>());
      } else if (scu.is_object() && scu.contains("text") && scu["text"].is_string()) {
        texts.push_back(scu["text"].get<std::string>());
      } else {
        throw ProtocolError("/scu/extract: scu has no text");
      }
    }
    out.scus.push_back(std::move(texts));
  }
  if (out.scus.size() != out.sentences.size()) {
    throw ProtocolError("/scu/extract: " + std::to_string(out.scus.size()) +
                        " scu groups for " +
                        std::to_string(out.sentences.size()) + " sentences");
  }
  return out;
}

ScuExtraction extract_scus(const std::string& endpoint, const std::string& text,
                           const RemoteOptions& options) {
  const std::string body = json{{"text", text}}.dump();
  auto backoff = options.initial_backoff;
  std::string last_failure;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    auto client = make_client(endpoint, options.timeout);
    auto res = client.Post("/scu/extract", body, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError("/scu/extract: HTTP " + std::to_string(res->status) +
                          ": " + res->body);
    }
    return parse_scu_response(res->body);
  }
  throw BackendUnavailable("/scu/extract at " + endpoint + " failed after " +
                           std::to_string(options.max_attempts) + " attempts (" +
                           last_failure + ")");
}

}  // namespace nlifact
