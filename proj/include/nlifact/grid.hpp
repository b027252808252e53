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

// Method x granularity x score-function evaluation grid.
//
// Grid config (JSON; relative paths resolve against the config's directory):
//   {
//     "datasets": [
//       {"name": "cgs", "metric": "binary", "val": "cgs_val.jsonl",
//        "test": "cgs_test.jsonl"},
//       {"name": "frank", "metric": "correlation", "test": "frank.jsonl"}
//     ],
//     "methods": ["zs", "topk"],
//     "granularities": ["sent/sent", "doc/sent", "topk:3/sent"],
//     "fns": ["p_e", "p_e-p_c"],
//     "token_budget": 500, "bins": 50, "tune_on": "val", "jobs": 1,
//     "seed": 20230601, "conv_iterations": 3000, "conv_params": "conv.json",
//     "lenient": false
//   }

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nlifact/evaluation.hpp"
#include "nlifact/gateway.hpp"
#include "nlifact/method.hpp"

namespace nlifact {

enum class MetricKind { kBinary, kCorrelation };

struct DatasetSpec {
  std::string name;
  MetricKind metric = MetricKind::kBinary;
  std::optional<std::filesystem::path> val;  // binary only
  std::filesystem::path test;
};

struct GridConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<Method> methods;
  std::vector<GranularityConfig> granularities;
  std::vector<ScoreFn> fns;
  int token_budget = kDefaultTokenBudget;
  EvalOptions eval;
  bool lenient = false;
};

GridConfig parse_grid_config(const std::string& json_text,
                             const std::filesystem::path& base_dir = {});
GridConfig load_grid_config(const std::filesystem::path& path);

/// Every legal (method, granularity, fn) combination in config order.
std::vector<MethodSpec> expand_grid(const GridConfig& config);

struct GridResult {
  /// One report per (method spec, dataset), method specs outermost.
  std::vector<EvalReport> reports;
  /// Combinations dropped as illegal, as "<method> @ <granularity>".
  std::vector<std::string> skipped;
};

/// Runs every cell through a shared gateway, so a pair is scored once per
/// run whatever the number of cells that need it. A failing cell yields a
/// report with `error` set and the remaining cells still run.
GridResult run_grid(const GridConfig& config, NliGateway& gateway);

}  // namespace nlifact
