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

#include "nlifact/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nlifact/errors.hpp"
#include "nlifact/metrics.hpp"

namespace nlifact {

namespace {

using json = nlohmann::json;

std::vector<int> labels_of(std::span<const LabeledExample> examples,
                           const char* split) {
  std::vector<int> labels;
  labels.reserve(examples.size());
  for (const auto& e : examples) {
    if (!e.label) {
      throw InvalidArgument(std::string(split) + " example '" + e.id +
                            "' has no binary label");
    }
    labels.push_back(*e.label);
  }
  return labels;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// "zs/p_e/sent/sent" -> "zs,p_e,sent,sent"
std::string method_columns(const std::string& descriptor) {
  std::string out = descriptor;
  std::replace(out.begin(), out.end(), '/', ',');
  return out;
}

}  // namespace

std::string to_string(TuneSplit split) {
  return split == TuneSplit::kValidation ? "val" : "test";
}

TuneSplit parse_tune_split(std::string_view text) {
  if (text == "val" || text == "validation") return TuneSplit::kValidation;
  if (text == "test") return TuneSplit::kTest;
  throw InvalidArgument("--tune-on must be val or test, got '" + std::string(text) + "'");
}

std::vector<double> score_examples(std::span<const LabeledExample> examples,
                                   const MethodSpec& spec, NliGateway& gateway,
                                   const ConvParams* conv, std::size_t jobs) {
  std::vector<double> scores(examples.size());
  std::vector<std::exception_ptr> errors(examples.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < examples.size();) {
      try {
        const auto& e = examples[i];
        scores[i] = score_example(e.document, e.summary_input(), spec, gateway, conv).value;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(examples.size(), 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return scores;
}

ConvParams fit_conv_on(std::span<const LabeledExample> examples,
                       const MethodSpec& spec, NliGateway& gateway, int bins,
                       const ConvTrainingOptions& options) {
  const auto labels = labels_of(examples, "conv training");
  std::vector<ConvExample> train;
  train.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& e = examples[i];
    train.push_back({build_matrix(e.document, e.summary_input(), spec.granularity, gateway),
                     labels[i] == 1});
  }
  return train_conv(train, spec.fn, bins, options);
}

EvalReport evaluate_binary(const std::string& dataset,
                           std::span<const LabeledExample> val,
                           std::span<const LabeledExample> test,
                           const MethodSpec& spec, NliGateway& gateway,
                           const EvalOptions& options) {
  validate(spec);
  const auto tune_set = options.tune_on == TuneSplit::kValidation ? val : test;
  const auto tune_labels = labels_of(tune_set, "tuning");
  const auto test_labels = labels_of(test, "test");

  std::optional<ConvParams> conv = options.conv;
  if (spec.method == Method::kConv && !conv) {
    conv = fit_conv_on(tune_set, spec, gateway, options.bins, options.conv_training);
  }
  const ConvParams* conv_ptr = conv ? &*conv : nullptr;

  const auto tune_scores = score_examples(tune_set, spec, gateway, conv_ptr, options.jobs);
  const auto choice = tune_threshold(tune_scores, tune_labels);
  const auto test_scores = score_examples(test, spec, gateway, conv_ptr, options.jobs);

  EvalReport report;
  report.dataset = dataset;
  report.method = describe(spec);
  report.metric = "binary";
  report.n = test.size();
  report.threshold = choice.threshold;
  report.tuned_on = to_string(options.tune_on);
  report.tuning_balanced_accuracy = choice.balanced_accuracy;
  report.balanced_accuracy =
      balanced_accuracy(predict(test_scores, choice.threshold), test_labels);
  return report;
}

EvalReport evaluate_correlation(const std::string& dataset,
                                std::span<const LabeledExample> data,
                                const MethodSpec& spec, NliGateway& gateway,
                                const EvalOptions& options) {
  validate(spec);
  std::vector<double> human;
  human.reserve(data.size());
  for (const auto& e : data) {
    if (!e.human_score) {
      throw InvalidArgument("example '" + e.id + "' has no human score");
    }
    human.push_back(*e.human_score);
  }
  if (spec.method == Method::kConv && !options.conv) {
    throw InvalidArgument("conv correlation runs need --conv-params");
  }
  const ConvParams* conv_ptr = options.conv ? &*options.conv : nullptr;
  const auto scores = score_examples(data, spec, gateway, conv_ptr, options.jobs);
  const auto p = pearson(scores, human);
  const auto s = spearman(scores, human);

  EvalReport report;
  report.dataset = dataset;
  report.method = describe(spec);
  report.metric = "correlation";
  report.n = data.size();
  report.pearson_r = p.r;
  report.pearson_p = p.p;
  report.spearman_r = s.r;
  report.spearman_p = s.p;
  return report;
}

std::string to_json(const EvalReport& report) {
  json j = json::object();
  j["dataset"] = report.dataset;
  j["method"] = report.method;
  j["metric"] = report.metric;
  j["n"] = report.n;
  const auto put = [&](const char* key, const auto& value) {
    if (value) j[key] = *value;
  };
  put("threshold", report.threshold);
  put("tuned_on", report.tuned_on);
  put("tuning_balanced_accuracy", report.tuning_balanced_accuracy);
  put("balanced_accuracy", report.balanced_accuracy);
  put("pearson_r", report.pearson_r);
  put("pearson_p", report.pearson_p);
  put("spearman_r", report.spearman_r);
  put("spearman_p", report.spearman_p);
  put("error", report.error);
  return j.dump();
}

std::string reports_to_json(std::span<const EvalReport> reports) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out += "  " + to_json(reports[i]);
    out += i + 1 < reports.size() ? ",\n" : "\n";
  }
  out += "]\n";
  return out;
}

std::string binary_table_csv(std::span<const EvalReport> reports) {
  std::vector<std::string> methods;
  std::vector<std::string> datasets;
  std::map<std::pair<std::string, std::string>, double> cells;
  for (const auto& r : reports) {
    if (r.metric != "binary") continue;
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) {
      datasets.push_back(r.dataset);
    }
    if (r.balanced_accuracy) cells[{r.method, r.dataset}] = *r.balanced_accuracy;
  }

  std::ostringstream out;
  out << "method,fn,premise,hypothesis";
  for (const auto& d : datasets) out << ',' << csv_field(d);
  out << ",overall\n";
  for (const auto& m : methods) {
    out << method_columns(m);
    double sum = 0.0;
    bool complete = true;
    for (const auto& d : datasets) {
      out << ',';
      auto it = cells.find({m, d});
      if (it == cells.end()) {
        complete = false;
        continue;
      }
      sum += it->second;
      out << fixed(100.0 * it->second, 2);
    }
    out << ',';
    if (complete && !datasets.empty()) {
      out << fixed(100.0 * sum / static_cast<double>(datasets.size()), 2);
    }
    out << '\n';
  }
  return out.str();
}

std::string correlation_table_csv(std::span<const EvalReport> reports) {
  std::ostringstream out;
  out << "method,fn,premise,hypothesis,dataset,pearson_r,pearson_p,spearman_r,"
         "spearman_p\n";
  for (const auto& r : reports) {
    if (r.metric != "correlation") continue;
    out << method_columns(r.method) << ',' << csv_field(r.dataset);
    for (const auto& v : {r.pearson_r, r.pearson_p, r.spearman_r, r.spearman_p}) {
      out << ',';
      if (v) out << fixed(*v, 4);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace nlifact
