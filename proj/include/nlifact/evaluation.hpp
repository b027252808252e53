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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlifact/conv.hpp"
#include "nlifact/gateway.hpp"
#include "nlifact/method.hpp"

namespace nlifact {

struct LabeledExample {
  std::string id;
  std::string document;
  std::string summary;
  std::optional<int> label;  // 1 = consistent, 0 = inconsistent
  std::optional<double> human_score;
  std::optional<std::vector<std::vector<std::string>>> scus;

  SummaryInput summary_input() const { return {summary, scus}; }
};

enum class TuneSplit { kValidation, kTest };

std::string to_string(TuneSplit split);
TuneSplit parse_tune_split(std::string_view text);

struct EvalReport {
  std::string dataset;
  std::string method;  // describe(MethodSpec)
  std::string metric;  // "binary" or "correlation"
  std::size_t n = 0;   // scored test examples
  // Binary tasks.
  std::optional<double> threshold;
  std::optional<std::string> tuned_on;
  std::optional<double> tuning_balanced_accuracy;
  std::optional<double> balanced_accuracy;
  // Correlation tasks.
  std::optional<double> pearson_r;
  std::optional<double> pearson_p;
  std::optional<double> spearman_r;
  std::optional<double> spearman_p;
  /// Set instead of the metrics when the cell failed.
  std::optional<std::string> error;
};

struct EvalOptions {
  TuneSplit tune_on = TuneSplit::kValidation;
  /// Examples scored concurrently.
  std::size_t jobs = 1;
  /// Conv parameters; when absent, conv methods are fitted on the tuning
  /// split.
  std::optional<ConvParams> conv;
  int bins = kDefaultConvBins;
  ConvTrainingOptions conv_training;
};

/// Scores each example; result[i] belongs to examples[i] whatever the
/// completion order. The first failing example (lowest index) is rethrown.
std::vector<double> score_examples(std::span<const LabeledExample> examples,
                                   const MethodSpec& spec, NliGateway& gateway,
                                   const ConvParams* conv, std::size_t jobs = 1);

/// Fits conv parameters on labelled examples.
ConvParams fit_conv_on(std::span<const LabeledExample> examples,
                       const MethodSpec& spec, NliGateway& gateway,
                       int bins, const ConvTrainingOptions& options = {});

/// Tunes a threshold on the validation split (or the test split when
/// options.tune_on says so) and reports test balanced accuracy.
EvalReport evaluate_binary(const std::string& dataset,
                           std::span<const LabeledExample> val,
                           std::span<const LabeledExample> test,
                           const MethodSpec& spec, NliGateway& gateway,
                           const EvalOptions& options = {});

/// Pearson and Spearman correlation between method scores and human scores.
EvalReport evaluate_correlation(const std::string& dataset,
                                std::span<const LabeledExample> data,
                                const MethodSpec& spec, NliGateway& gateway,
                                const EvalOptions& options = {});

/// Single-line JSON object; absent optionals are omitted.
std::string to_json(const EvalReport& report);
/// JSON array, one report per line.
std::string reports_to_json(std::span<const EvalReport> reports);

/// Table layout for binary reports: one row per method, one column per
/// dataset (balanced accuracy in percent) and an "overall" column holding the
/// mean over datasets.
std::string binary_table_csv(std::span<const EvalReport> reports);
/// One row per (method, dataset): pearson_r, pearson_p, spearman_r,
/// spearman_p.
std::string correlation_table_csv(std::span<const EvalReport> reports);

}  // namespace nlifact
