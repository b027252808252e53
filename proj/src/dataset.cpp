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

#include "nlifact/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "nlifact/errors.hpp"

namespace nlifact {

namespace {

using json = nlohmann::json;

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string required_text(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InvalidArgument(std::string("missing \"") + key + "\"");
  if (!it->is_string()) throw InvalidArgument(std::string("\"") + key + "\" is not a string");
  std::string value = it->get<std::string>();
  if (blank(value)) throw InvalidArgument(std::string("\"") + key + "\" is empty");
  return value;
}

}  // namespace

LabeledExample parse_record(std::string_view line) {
  const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw InvalidArgument("malformed JSON");
  if (!j.is_object()) throw InvalidArgument("record is not a JSON object");

  LabeledExample e;
  e.id = required_text(j, "id");
  e.document = required_text(j, "document");
  e.summary = required_text(j, "summary");

  if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
    if (it->is_boolean()) {
      e.label = it->get<bool>() ? 1 : 0;
    } else if (it->is_number_integer() || it->is_number_unsigned()) {
      const auto v = it->get<long long>();
      if (v != 0 && v != 1) throw InvalidArgument("\"label\" must be 0 or 1");
      e.label = static_cast<int>(v);
    } else {
      throw InvalidArgument("\"label\" must be 0 or 1");
    }
  }
  if (auto it = j.find("human_score"); it != j.end() && !it->is_null()) {
    if (!it->is_number()) throw InvalidArgument("\"human_score\" is not a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw InvalidArgument("\"human_score\" is not finite");
    e.human_score = v;
  }
  if (!e.label && !e.human_score) {
    throw InvalidArgument("record needs \"label\" or \"human_score\"");
  }
  if (auto it = j.find("scus"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw InvalidArgument("\"scus\" must be a list of lists");
    std::vector<std::vector<std::string>> groups;
    for (const auto& group : *it) {
      if (!group.is_array()) throw InvalidArgument("\"scus\" must be a list of lists");
      std::vector<std::string> texts;
      for (const auto& scu : group) {
        if (!scu.is_string()) throw InvalidArgument("\"scus\" entries must be strings");
        texts.push_back(scu.get<std::string>());
      }
      groups.push_back(std::move(texts));
    }
    e.scus = std::move(groups);
  }
  return e;
}

Dataset ingest(const std::filesystem::path& path, bool lenient) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read dataset " + path.string());

  Dataset data;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    ++data.report.lines_read;
    try {
      data.examples.push_back(parse_record(line));
    } catch (const InvalidArgument& err) {
      data.report.invalid.push_back({lineno, err.what()});
    }
  }

  if (!data.report.invalid.empty() && !lenient) {
    std::string msg = path.string() + ": invalid record(s) at line";
    for (std::size_t i = 0; i < data.report.invalid.size() && i < 10; ++i) {
      const auto& bad = data.report.invalid[i];
      msg += (i == 0 ? " " : ", ") + std::to_string(bad.line) + " (" + bad.reason + ")";
    }
    if (data.report.invalid.size() > 10) msg += ", ...";
    throw IngestError(msg);
  }
  if (data.examples.empty()) throw IngestError(path.string() + ": no valid records");
  return data;
}

std::string record_to_json(const LabeledExample& e) {
  json j = json::object();
  j["id"] = e.id;
  j["document"] = e.document;
  j["summary"] = e.summary;
  if (e.label) j["label"] = *e.label;
  if (e.human_score) j["human_score"] = *e.human_score;
  if (e.scus) j["scus"] = *e.scus;
  return j.dump();
}

}  // namespace nlifact
