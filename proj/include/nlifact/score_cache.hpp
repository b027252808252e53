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

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nlifact/nli.hpp"

namespace nlifact {

/// SHA-256 (lower-case hex) over the length-prefixed model identifier,
/// premise and hypothesis.
std::string cache_key(std::string_view model_identifier,
                      std::string_view premise, std::string_view hypothesis);

struct CorruptRecord {
  std::size_t line = 0;  // 1-based line in the cache file
  std::string reason;
};

struct CacheStats {
  std::size_t records = 0;
  std::size_t corrupt = 0;
  std::map<std::string, std::size_t> per_model;
};

/// Persistent NLI score cache. Records are appended as JSONL lines
///   {"key": hex, "model": str, "p_e": f, "p_n": f, "p_c": f}
/// and replayed on open. Unparseable or invalid lines are skipped and listed
/// in corrupt_records(); they are never returned from lookup(). Safe for
/// concurrent lookup/put.
class ScoreCache {
 public:
  /// In-memory cache with no backing file.
  ScoreCache() = default;
  /// Opens (creating if needed) the JSONL file at `path`.
  explicit ScoreCache(std::filesystem::path path);

  ScoreCache(const ScoreCache&) = delete;
  ScoreCache& operator=(const ScoreCache&) = delete;

  std::optional<NliDistribution> lookup(std::string_view model_identifier,
                                        std::string_view premise,
                                        std::string_view hypothesis) const;
  std::optional<NliDistribution> lookup_key(const std::string& key) const;

  /// Stores a value; the first value stored for a key wins.
  void put(std::string_view model_identifier, std::string_view premise,
           std::string_view hypothesis, const NliDistribution& dist);

  struct Entry {
    std::string key;
    std::string model;
    NliDistribution dist;
  };
  /// Stores several values with a single flush.
  void put_many(const std::vector<Entry>& entries);

  std::size_t size() const;
  std::vector<CorruptRecord> corrupt_records() const;
  CacheStats stats() const;
  const std::optional<std::filesystem::path>& path() const { return path_; }

 private:
  struct Stored {
    std::string model;
    NliDistribution dist;
  };
  void load();

  std::optional<std::filesystem::path> path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, Stored> entries_;
  std::vector<CorruptRecord> corrupt_;
  std::ofstream out_;
};

}  // namespace nlifact
