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

// JSONL benchmark records, one object per line:
//   {"id": str, "document": str, "summary": str,
//    "label": 0|1 (optional), "human_score": float (optional),
//    "scus": [[str, ...], ...] (optional, one list per summary sentence)}
// At least one of label / human_score must be present.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nlifact/evaluation.hpp"

namespace nlifact {

struct InvalidLine {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct LoadReport {
  std::size_t lines_read = 0;
  std::vector<InvalidLine> invalid;
};

struct Dataset {
  std::vector<LabeledExample> examples;
  LoadReport report;
};

/// Parses one record; throws InvalidArgument describing the first problem.
LabeledExample parse_record(std::string_view line);

/// Reads a JSONL file. Blank lines are ignored. Any invalid line raises
/// IngestError naming the line numbers unless `lenient`, in which case they
/// are only listed in the report. An unreadable file or an empty result also
/// raises IngestError.
Dataset ingest(const std::filesystem::path& path, bool lenient = false);

/// Inverse of parse_record (single line, no trailing newline).
std::string record_to_json(const LabeledExample& example);

}  // namespace nlifact
