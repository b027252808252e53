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

// nlifact: NLI-based summary factuality scoring and benchmark harness.
//
//   nlifact score        --input data.jsonl --method zs --premise sent ...
//   nlifact evaluate     --val val.jsonl --test test.jsonl --method zs ...
//   nlifact tune         --input val.jsonl --method zs ...
//   nlifact run-grid     --config grid.json --out reports.json --table t.csv
//   nlifact corpus-stats --input corpus.jsonl --out stats.csv
//   nlifact cache warm   --cache scores.jsonl --input data.jsonl ...
//   nlifact cache stats  --cache scores.jsonl
//   nlifact extract-scus --input data.jsonl --out with_scus.jsonl
//
// Errors exit non-zero with {"error": kind, "message": text} on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlifact/dataset.hpp"
#include "nlifact/errors.hpp"
#include "nlifact/evaluation.hpp"
#include "nlifact/gateway.hpp"
#include "nlifact/grid.hpp"
#include "nlifact/method.hpp"
#include "nlifact/metrics.hpp"
#include "nlifact/score_cache.hpp"
#include "nlifact/segmentation.hpp"
#include "nlifact/sidecar_client.hpp"

namespace {

using json = nlohmann::json;
using namespace nlifact;

constexpr const char* kEndpointEnv = "NLIFACT_SIDECAR_URL";

struct BackendFlags {
  std::string backend = "mock";
  std::string model;
  std::string endpoint = "http://127.0.0.1:8080";
  std::string cache;
  std::size_t max_batch = 32;
  int attempts = 3;
};

struct MethodFlags {
  std::string method = "zs";
  std::string premise = "sent";
  std::string hypothesis = "sent";
  std::string fn = "p_e";
  int k = kDefaultTopK;
  int budget = kDefaultTokenBudget;
  int bins = kDefaultConvBins;
  std::string conv_params;
  std::size_t jobs = 1;
  std::uint64_t seed = ConvTrainingOptions{}.seed;
  int conv_iterations = ConvTrainingOptions{}.iterations;
};

void add_backend_flags(CLI::App* cmd, BackendFlags& f) {
  cmd->add_option("--backend", f.backend, "mock or remote")
      ->check(CLI::IsMember({"mock", "remote"}));
  cmd->add_option("--model", f.model, "model identifier (cache key component)");
  cmd->add_option("--endpoint", f.endpoint,
                  std::string("sidecar URL; overridden by $") + kEndpointEnv);
  cmd->add_option("--cache", f.cache, "JSONL score cache path");
  cmd->add_option("--max-batch", f.max_batch, "pairs per /nli/batch request");
  cmd->add_option("--retries", f.attempts, "attempts per batch");
}

void add_method_flags(CLI::App* cmd, MethodFlags& f) {
  cmd->add_option("--method", f.method,
                  "zs|conv|sentli-soft|sentli-hard|topk|rr-soft|rr-hard|scu-sent|scu-topk");
  cmd->add_option("--premise", f.premise, "doc|sent|topk|topk:<k>");
  cmd->add_option("--hypothesis", f.hypothesis, "doc|sent|scu");
  cmd->add_option("--fn", f.fn, "p_e or p_e-p_c");
  cmd->add_option("--k", f.k, "k for a bare --premise topk");
  cmd->add_option("--budget", f.budget, "premise token budget");
  cmd->add_option("--bins", f.bins, "conv histogram bins");
  cmd->add_option("--conv-params", f.conv_params, "conv weights JSON");
  cmd->add_option("--jobs", f.jobs, "examples scored concurrently");
  cmd->add_option("--seed", f.seed, "conv training seed");
  cmd->add_option("--conv-iterations", f.conv_iterations, "conv training iterations");
}

BackendId backend_id(const BackendFlags& f) {
  if (f.backend == "mock") return BackendId::mock(f.model.empty() ? "mock-overlap" : f.model);
  std::string endpoint = f.endpoint;
  if (const char* env = std::getenv(kEndpointEnv); env && *env) endpoint = env;
  return BackendId::remote(f.model.empty() ? "remote" : f.model, endpoint);
}

std::unique_ptr<NliGateway> make_gateway(const BackendFlags& f) {
  RemoteOptions options;
  options.max_batch_size = f.max_batch;
  options.max_attempts = f.attempts;
  std::shared_ptr<ScoreCache> cache =
      f.cache.empty() ? std::make_shared<ScoreCache>()
                      : std::make_shared<ScoreCache>(std::filesystem::path(f.cache));
  for (const auto& bad : cache->corrupt_records()) {
    std::cerr << "warning: cache line " << bad.line << " skipped: " << bad.reason << '\n';
  }
  return std::make_unique<NliGateway>(make_backend(backend_id(f), options), cache);
}

MethodSpec method_spec(const MethodFlags& f) {
  MethodSpec spec;
  spec.method = parse_method(f.method);
  spec.fn = parse_score_fn(f.fn);
  spec.granularity.premise = f.premise == "topk" ? PremiseGranularity::top_k(f.k)
                                                 : parse_premise_granularity(f.premise);
  spec.granularity.hypothesis = parse_hypothesis_granularity(f.hypothesis);
  spec.granularity.token_budget = f.budget;
  validate(spec);
  return spec;
}

EvalOptions eval_options(const MethodFlags& f) {
  EvalOptions options;
  options.jobs = f.jobs;
  options.bins = f.bins;
  options.conv_training.seed = f.seed;
  options.conv_training.iterations = f.conv_iterations;
  if (!f.conv_params.empty()) options.conv = ConvParams::load(f.conv_params);
  return options;
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

void report_usage(const NliGateway& gateway) {
  std::cerr << "backend calls: " << gateway.backend_invocations()
            << ", pairs scored: " << gateway.backend_pairs()
            << ", cache hits: " << gateway.cache_hits() << '\n';
}

int run_score(const std::string& input, const std::string& out_path, bool lenient,
              const BackendFlags& bf, const MethodFlags& mf) {
  const auto spec = method_spec(mf);
  const auto data = ingest(input, lenient);
  auto gateway = make_gateway(bf);
  auto options = eval_options(mf);
  if (spec.method == Method::kConv && !options.conv) {
    throw InvalidArgument("conv scoring needs --conv-params");
  }
  const ConvParams* conv = options.conv ? &*options.conv : nullptr;
  std::ostringstream out;
  for (const auto& e : data.examples) {
    const auto score = score_example(e.document, e.summary_input(), spec, *gateway, conv);
    json j = {{"id", e.id}, {"method", score.method}, {"score", score.value},
              {"per_unit", score.per_hypothesis_unit}};
    out << j.dump() << '\n';
  }
  emit(out_path, out.str());
  report_usage(*gateway);
  return 0;
}

int run_evaluate(const std::string& val, const std::string& test, std::string dataset,
                 std::string metric, const std::string& tune_on,
                 const std::string& out_path, bool lenient, const BackendFlags& bf,
                 const MethodFlags& mf) {
  const auto spec = method_spec(mf);
  auto options = eval_options(mf);
  options.tune_on = parse_tune_split(tune_on);
  const auto test_data = ingest(test, lenient);
  if (dataset.empty()) dataset = std::filesystem::path(test).stem().string();
  if (metric.empty()) metric = test_data.examples.front().label ? "binary" : "correlation";
  auto gateway = make_gateway(bf);

  EvalReport report;
  if (metric == "binary") {
    if (val.empty() && options.tune_on == TuneSplit::kValidation) {
      throw InvalidArgument("binary evaluation needs --val (or --tune-on test)");
    }
    const auto val_data = val.empty() ? test_data : ingest(val, lenient);
    report = evaluate_binary(dataset, val_data.examples, test_data.examples, spec,
                             *gateway, options);
  } else if (metric == "correlation") {
    report = evaluate_correlation(dataset, test_data.examples, spec, *gateway, options);
  } else {
    throw InvalidArgument("--metric must be binary or correlation");
  }
  emit(out_path, to_json(report) + "\n");
  report_usage(*gateway);
  return 0;
}

int run_tune(const std::string& input, bool lenient, const BackendFlags& bf,
             const MethodFlags& mf) {
  const auto spec = method_spec(mf);
  auto options = eval_options(mf);
  const auto data = ingest(input, lenient);
  auto gateway = make_gateway(bf);
  if (spec.method == Method::kConv && !options.conv) {
    options.conv = fit_conv_on(data.examples, spec, *gateway, options.bins,
                               options.conv_training);
  }
  std::vector<int> labels;
  for (const auto& e : data.examples) {
    if (!e.label) throw InvalidArgument("example '" + e.id + "' has no label");
    labels.push_back(*e.label);
  }
  const auto scores = score_examples(data.examples, spec, *gateway,
                                     options.conv ? &*options.conv : nullptr, options.jobs);
  const auto choice = tune_threshold(scores, labels);
  json j = {{"method", describe(spec)},
            {"n", data.examples.size()},
            {"threshold", choice.threshold},
            {"balanced_accuracy", choice.balanced_accuracy}};
  std::cout << j.dump() << '\n';
  report_usage(*gateway);
  return 0;
}

int run_grid_cmd(const std::string& config_path, const std::string& out_path,
                 const std::string& table, const std::string& corr_table,
                 std::optional<std::size_t> jobs, const BackendFlags& bf) {
  auto config = load_grid_config(config_path);
  if (jobs) config.eval.jobs = *jobs;
  auto gateway = make_gateway(bf);
  const auto result = run_grid(config, *gateway);
  for (const auto& s : result.skipped) std::cerr << "skipped illegal combination: " << s << '\n';
  std::size_t failed = 0;
  for (const auto& r : result.reports) {
    if (r.error) {
      ++failed;
      std::cerr << "cell failed: " << r.method << " on " << r.dataset << ": " << *r.error << '\n';
    }
  }
  emit(out_path, reports_to_json(result.reports));
  if (!table.empty()) emit(table, binary_table_csv(result.reports));
  if (!corr_table.empty()) emit(corr_table, correlation_table_csv(result.reports));
  report_usage(*gateway);
  std::cerr << result.reports.size() << " reports, " << failed << " failed\n";
  return 0;
}

int run_corpus_stats(const std::string& input, const std::string& out_path) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw IngestError("cannot read " + input);
  std::vector<std::string> documents;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line, nullptr, false);
    std::string key = j.is_object() && j.contains("document") ? "document" : "text";
    if (!j.is_object() || !j.contains(key) || !j[key].is_string()) {
      throw IngestError(input + ": line " + std::to_string(lineno) +
                        " has no \"document\" or \"text\" string");
    }
    documents.push_back(j[key].get<std::string>());
  }
  const auto stats = corpus_sentence_stats(documents);
  std::ostringstream out;
  out.precision(17);
  out << "statistic,value\n"
      << "documents," << stats.documents << '\n'
      << "mean," << stats.mean << '\n'
      << "std_dev," << stats.std_dev << '\n'
      << "p25," << stats.p25 << '\n'
      << "p50," << stats.p50 << '\n'
      << "p75," << stats.p75 << '\n';
  emit(out_path, out.str());
  return 0;
}

int run_cache_warm(const std::string& input, bool lenient, const BackendFlags& bf,
                   const MethodFlags& mf) {
  if (bf.cache.empty()) throw InvalidArgument("cache warm needs --cache");
  const auto spec = method_spec(mf);
  const auto data = ingest(input, lenient);
  auto gateway = make_gateway(bf);
  for (const auto& e : data.examples) {
    const auto summary = e.summary_input();
    if (spec.method == Method::kConv) {
      build_matrix(e.document, summary, spec.granularity, *gateway);
    } else {
      score_example(e.document, summary, spec, *gateway);
    }
  }
  report_usage(*gateway);
  std::cout << json{{"records", gateway->cache()->size()}}.dump() << '\n';
  return 0;
}

int run_cache_stats(const std::string& cache_path) {
  if (cache_path.empty()) throw InvalidArgument("cache stats needs --cache");
  if (!std::filesystem::exists(cache_path)) throw InvalidArgument("no cache at " + cache_path);
  ScoreCache cache{std::filesystem::path(cache_path)};
  const auto stats = cache.stats();
  json corrupt = json::array();
  for (const auto& bad : cache.corrupt_records()) {
    corrupt.push_back({{"line", bad.line}, {"reason", bad.reason}});
  }
  json j = {{"records", stats.records}, {"corrupt", corrupt}, {"per_model", stats.per_model}};
  std::cout << j.dump() << '\n';
  return 0;
}

int run_extract_scus(const std::string& input, const std::string& out_path,
                     const BackendFlags& bf) {
  std::string endpoint = bf.endpoint;
  if (const char* env = std::getenv(kEndpointEnv); env && *env) endpoint = env;
  std::ifstream in(input, std::ios::binary);
  if (!in) throw IngestError("cannot read " + input);
  RemoteOptions options;
  options.max_attempts = bf.attempts;
  std::ostringstream out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (!j.is_object() || !j.contains("summary") || !j["summary"].is_string()) {
      throw IngestError(input + ": line " + std::to_string(lineno) + " has no \"summary\"");
    }
    const auto extraction = extract_scus(endpoint, j["summary"].get<std::string>(), options);
    j["scus"] = extraction.scus;
    out << j.dump() << '\n';
  }
  emit(out_path, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NLI-based summary factuality scoring and benchmark harness"};
  app.require_subcommand(1);

  BackendFlags bf;
  MethodFlags mf;
  std::string input, out, val, test, dataset, metric, tune_on = "val", config, table,
      corr_table;
  bool lenient = false;
  std::optional<std::size_t> grid_jobs;

  auto* score = app.add_subcommand("score", "score every example of a dataset");
  score->add_option("--input", input, "dataset JSONL")->required();
  score->add_option("--out", out, "output JSONL (default stdout)");
  score->add_flag("--lenient", lenient, "skip invalid records");
  add_backend_flags(score, bf);
  add_method_flags(score, mf);

  auto* evaluate = app.add_subcommand("evaluate", "tune on val, report on test");
  evaluate->add_option("--val", val, "validation JSONL");
  evaluate->add_option("--test", test, "test JSONL")->required();
  evaluate->add_option("--dataset", dataset, "dataset name for the report");
  evaluate->add_option("--metric", metric, "binary or correlation (default: from labels)");
  evaluate->add_option("--tune-on", tune_on, "val (default) or test");
  evaluate->add_option("--out", out, "report JSON (default stdout)");
  evaluate->add_flag("--lenient", lenient, "skip invalid records");
  add_backend_flags(evaluate, bf);
  add_method_flags(evaluate, mf);

  auto* tune = app.add_subcommand("tune", "tune a threshold on one labelled split");
  tune->add_option("--input", input, "labelled JSONL")->required();
  tune->add_flag("--lenient", lenient, "skip invalid records");
  add_backend_flags(tune, bf);
  add_method_flags(tune, mf);

  auto* grid = app.add_subcommand("run-grid", "evaluate a method x granularity x fn grid");
  grid->add_option("--config", config, "grid config JSON")->required();
  grid->add_option("--out", out, "reports JSON (default stdout)");
  grid->add_option("--table", table, "binary results CSV");
  grid->add_option("--corr-table", corr_table, "correlation results CSV");
  grid->add_option("--jobs", grid_jobs, "examples scored concurrently");
  add_backend_flags(grid, bf);

  auto* stats = app.add_subcommand("corpus-stats", "sentence count statistics");
  stats->add_option("--input", input, "JSONL with document or text fields")->required();
  stats->add_option("--out", out, "CSV (default stdout)");

  auto* cache = app.add_subcommand("cache", "manage the score cache");
  cache->require_subcommand(1);
  auto* warm = cache->add_subcommand("warm", "score a dataset into the cache");
  warm->add_option("--input", input, "dataset JSONL")->required();
  warm->add_flag("--lenient", lenient, "skip invalid records");
  add_backend_flags(warm, bf);
  add_method_flags(warm, mf);
  auto* cache_stats = cache->add_subcommand("stats", "summarise a cache file");
  cache_stats->add_option("--cache", bf.cache, "cache JSONL")->required();

  auto* extract = app.add_subcommand("extract-scus", "fill in scus via the sidecar");
  extract->add_option("--input", input, "dataset JSONL")->required();
  extract->add_option("--out", out, "output JSONL (default stdout)");
  extract->add_option("--endpoint", bf.endpoint,
                      std::string("sidecar URL; overridden by $") + kEndpointEnv);
  extract->add_option("--retries", bf.attempts, "attempts per request");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return 64;
  }

  try {
    if (*score) return run_score(input, out, lenient, bf, mf);
    if (*evaluate) {
      return run_evaluate(val, test, dataset, metric, tune_on, out, lenient, bf, mf);
    }
    if (*tune) return run_tune(input, lenient, bf, mf);
    if (*grid) return run_grid_cmd(config, out, table, corr_table, grid_jobs, bf);
    if (*stats) return run_corpus_stats(input, out);
    if (*warm) return run_cache_warm(input, lenient, bf, mf);
    if (*cache_stats) return run_cache_stats(bf.cache);
    if (*extract) return run_extract_scus(input, out, bf);
  } catch (const Error& e) {
    std::cerr << json{{"error", e.kind()}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
  return 0;
}
