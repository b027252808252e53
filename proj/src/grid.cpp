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

#include "nlifact/grid.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "nlifact/dataset.hpp"
#include "nlifact/errors.hpp"

namespace nlifact {

namespace {

using json = nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->empty()) {
    throw InvalidArgument(std::string("grid config needs a non-empty \"") + key + "\" list");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw InvalidArgument(std::string("\"") + key + "\" must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

GridConfig parse_grid_config(const std::string& json_text,
                             const std::filesystem::path& base_dir) {
  const json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw InvalidArgument("grid config is not a JSON object");
  }
  GridConfig config;

  auto ds = j.find("datasets");
  if (ds == j.end() || !ds->is_array() || ds->empty()) {
    throw InvalidArgument("grid config needs a non-empty \"datasets\" list");
  }
  for (const auto& d : *ds) {
    if (!d.is_object() || !d.contains("name") || !d.contains("test")) {
      throw InvalidArgument("each dataset needs \"name\" and \"test\"");
    }
    DatasetSpec spec;
    spec.name = d["name"].get<std::string>();
    const std::string metric = d.value("metric", "binary");
    if (metric == "binary") {
      spec.metric = MetricKind::kBinary;
    } else if (metric == "correlation") {
      spec.metric = MetricKind::kCorrelation;
    } else {
      throw InvalidArgument("dataset metric must be binary or correlation");
    }
    spec.test = resolve(base_dir, d["test"].get<std::string>());
    if (d.contains("val")) spec.val = resolve(base_dir, d["val"].get<std::string>());
    if (spec.metric == MetricKind::kBinary && !spec.val) {
      throw InvalidArgument("binary dataset '" + spec.name + "' needs \"val\"");
    }
    config.datasets.push_back(std::move(spec));
  }

  for (const auto& m : string_list(j, "methods")) config.methods.push_back(parse_method(m));
  config.token_budget = j.value("token_budget", kDefaultTokenBudget);
  for (const auto& g : string_list(j, "granularities")) {
    auto parsed = parse_granularity(g);
    parsed.token_budget = config.token_budget;
    config.granularities.push_back(parsed);
  }
  for (const auto& f : string_list(j, "fns")) config.fns.push_back(parse_score_fn(f));

  config.eval.bins = j.value("bins", kDefaultConvBins);
  config.eval.tune_on = parse_tune_split(j.value("tune_on", std::string("val")));
  config.eval.jobs = j.value("jobs", std::size_t{1});
  config.eval.conv_training.seed = j.value("seed", config.eval.conv_training.seed);
  config.eval.conv_training.iterations =
      j.value("conv_iterations", config.eval.conv_training.iterations);
  if (j.contains("conv_params")) {
    config.eval.conv = ConvParams::load(resolve(base_dir, j["conv_params"].get<std::string>()));
  }
  config.lenient = j.value("lenient", false);
  return config;
}

GridConfig load_grid_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read grid config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grid_config(buf.str(), path.parent_path());
}

std::vector<MethodSpec> expand_grid(const GridConfig& config) {
  std::vector<MethodSpec> specs;
  for (Method m : config.methods) {
    for (const auto& g : config.granularities) {
      for (ScoreFn fn : config.fns) {
        MethodSpec spec{m, fn, g};
        try {
          validate(spec);
        } catch (const InvalidArgument&) {
          continue;
        }
        specs.push_back(spec);
      }
    }
  }
  return specs;
}

GridResult run_grid(const GridConfig& config, NliGateway& gateway) {
  GridResult result;
  for (Method m : config.methods) {
    for (const auto& g : config.granularities) {
      try {
        validate(MethodSpec{m, ScoreFn::kEntail, g});
      } catch (const InvalidArgument&) {
        result.skipped.push_back(to_string(m) + " @ " + to_string(g));
      }
    }
  }

  // Each file is read once and shared by every cell.
  std::map<std::filesystem::path, Dataset> loaded;
  std::map<std::filesystem::path, std::string> load_errors;
  const auto load = [&](const std::filesystem::path& p) -> const Dataset* {
    if (loaded.count(p)) return &loaded.at(p);
    if (load_errors.count(p)) return nullptr;
    try {
      return &loaded.emplace(p, ingest(p, config.lenient)).first->second;
    } catch (const Error& err) {
      load_errors.emplace(p, err.what());
      return nullptr;
    }
  };

  for (const MethodSpec& spec : expand_grid(config)) {
    for (const auto& ds : config.datasets) {
      EvalReport report;
      report.dataset = ds.name;
      report.method = describe(spec);
      report.metric = ds.metric == MetricKind::kBinary ? "binary" : "correlation";
      try {
        const Dataset* test = load(ds.test);
        if (!test) throw IngestError(load_errors.at(ds.test));
        if (ds.metric == MetricKind::kBinary) {
          const Dataset* val = load(*ds.val);
          if (!val) throw IngestError(load_errors.at(*ds.val));
          report = evaluate_binary(ds.name, val->examples, test->examples, spec,
                                   gateway, config.eval);
        } else {
          report = evaluate_correlation(ds.name, test->examples, spec, gateway,
                                        config.eval);
        }
      } catch (const std::exception& err) {
        report.error = err.what();
      }
      result.reports.push_back(std::move(report));
    }
  }
  return result;
}

}  // namespace nlifact
