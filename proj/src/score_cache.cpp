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

#include "nlifact/score_cache.hpp"

#include <openssl/evp.h>

#include <json.hpp>

#include "nlifact/errors.hpp"

namespace nlifact {

namespace {

using json = nlohmann::json;

void feed(EVP_MD_CTX* ctx, std::string_view field) {
  const std::string prefix = std::to_string(field.size()) + ":";
  EVP_DigestUpdate(ctx, prefix.data(), prefix.size());
  EVP_DigestUpdate(ctx, field.data(), field.size());
}

bool is_hex_key(const std::string& key) {
  if (key.size() != 64) return false;
  for (char c : key) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

std::string record_line(const std::string& key, const std::string& model,
                        const NliDistribution& d) {
  json j = json::object();
  j["key"] = key;
  j["model"] = model;
  j["p_e"] = d.entailment;
  j["p_n"] = d.neutral;
  j["p_c"] = d.contradiction;
  return j.dump();
}

}  // namespace

std::string cache_key(std::string_view model_identifier,
                      std::string_view premise, std::string_view hypothesis) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  feed(ctx, model_identifier);
  feed(ctx, premise);
  feed(ctx, hypothesis);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);

  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

ScoreCache::ScoreCache(std::filesystem::path path) : path_(std::move(path)) {
  load();
  bool torn_tail = false;
  if (std::ifstream in(*path_, std::ios::binary | std::ios::ate);
      in && in.tellg() > 0) {
    in.seekg(-1, std::ios::end);
    torn_tail = in.get() != '\n';
  }
  out_.open(*path_, std::ios::app | std::ios::binary);
  if (!out_) {
    throw InvalidArgument("cannot open score cache for append: " +
                          path_->string());
  }
  // A partial last line from an interrupted write must not swallow the next
  // record.
  if (torn_tail) out_ << '\n' << std::flush;
}

void ScoreCache::load() {
  std::ifstream in(*path_, std::ios::binary);
  if (!in) return;  // created on first append
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      corrupt_.push_back({lineno, "not a JSON object"});
      continue;
    }
    const auto field = [&](const char* name) { return j.find(name); };
    auto key = field("key");
    auto model = field("model");
    auto pe = field("p_e");
    auto pn = field("p_n");
    auto pc = field("p_c");
    if (key == j.end() || model == j.end() || pe == j.end() ||
        pn == j.end() || pc == j.end()) {
      corrupt_.push_back({lineno, "missing field"});
      continue;
    }
    if (!key->is_string() || !model->is_string() || !pe->is_number() ||
        !pn->is_number() || !pc->is_number()) {
      corrupt_.push_back({lineno, "field has wrong type"});
      continue;
    }
    const std::string k = key->get<std::string>();
    if (!is_hex_key(k)) {
      corrupt_.push_back({lineno, "malformed key"});
      continue;
    }
    const NliDistribution d{pe->get<double>(), pn->get<double>(),
                            pc->get<double>()};
    if (!is_valid(d, kWireTolerance)) {
      corrupt_.push_back({lineno, "invalid distribution"});
      continue;
    }
    entries_.try_emplace(k, Stored{model->get<std::string>(), d});
  }
}

std::optional<NliDistribution> ScoreCache::lookup(
    std::string_view model_identifier, std::string_view premise,
    std::string_view hypothesis) const {
  return lookup_key(cache_key(model_identifier, premise, hypothesis));
}

std::optional<NliDistribution> ScoreCache::lookup_key(
    const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.dist;
}

void ScoreCache::put(std::string_view model_identifier,
                     std::string_view premise, std::string_view hypothesis,
                     const NliDistribution& dist) {
  put_many({{cache_key(model_identifier, premise, hypothesis),
             std::string(model_identifier), dist}});
}

void ScoreCache::put_many(const std::vector<Entry>& entries) {
  std::unique_lock lock(mutex_);
  bool wrote = false;
  for (const auto& e : entries) {
    auto [it, inserted] = entries_.try_emplace(e.key, Stored{e.model, e.dist});
    if (inserted && out_.is_open()) {
      out_ << record_line(e.key, e.model, e.dist) << '\n';
      wrote = true;
    }
  }
  if (wrote) out_.flush();
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<CorruptRecord> ScoreCache::corrupt_records() const {
  std::shared_lock lock(mutex_);
  return corrupt_;
}

CacheStats ScoreCache::stats() const {
  std::shared_lock lock(mutex_);
  CacheStats s;
  s.records = entries_.size();
  s.corrupt = corrupt_.size();
  for (const auto& [key, stored] : entries_) ++s.per_model[stored.model];
  return s;
}

}  // namespace nlifact
