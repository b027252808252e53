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

// Method and granularity descriptors, plus the dispatcher that scores one
// (document, summary) pair under a MethodSpec.
//
// Legal combinations (premise granularity x hypothesis granularity):
//   zs, conv, sentli-soft, sentli-hard   doc|sent      x doc|sent|scu
//   topk, rr-soft, rr-hard               topk:<k>      x doc|sent|scu
//   scu-sent                             sent          x scu
//   scu-topk                             topk:<k>      x scu

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlifact/aggregate.hpp"
#include "nlifact/conv.hpp"
#include "nlifact/gateway.hpp"
#include "nlifact/rescoring.hpp"
#include "nlifact/score_fn.hpp"
#include "nlifact/score_matrix.hpp"

namespace nlifact {

enum class Method {
  kZs,
  kConv,
  kSentliSoft,
  kSentliHard,
  kTopK,
  kRrSoft,
  kRrHard,
  kScuSent,
  kScuTopK,
};

std::string to_string(Method method);
Method parse_method(std::string_view text);

struct PremiseGranularity {
  enum class Kind { kFullDoc, kSentence, kTopK };
  Kind kind = Kind::kSentence;
  int k = 0;  // kTopK only

  static PremiseGranularity full_doc() { return {Kind::kFullDoc, 0}; }
  static PremiseGranularity sentence() { return {Kind::kSentence, 0}; }
  static PremiseGranularity top_k(int k) { return {Kind::kTopK, k}; }
  bool operator==(const PremiseGranularity&) const = default;
};

enum class HypothesisGranularity { kFullDoc, kSentence, kScu };

struct GranularityConfig {
  PremiseGranularity premise;
  HypothesisGranularity hypothesis = HypothesisGranularity::kSentence;
  /// Token cap for full-document and concatenated premises.
  int token_budget = kDefaultTokenBudget;
};

/// "doc", "sent" or "topk:<k>".
std::string to_string(const PremiseGranularity& g);
PremiseGranularity parse_premise_granularity(std::string_view text);
/// "doc", "sent" or "scu".
std::string to_string(HypothesisGranularity g);
HypothesisGranularity parse_hypothesis_granularity(std::string_view text);
/// "<premise>/<hypothesis>", e.g. "topk:3/sent".
std::string to_string(const GranularityConfig& g);
GranularityConfig parse_granularity(std::string_view text);

struct MethodSpec {
  Method method = Method::kZs;
  ScoreFn fn = ScoreFn::kEntail;
  GranularityConfig granularity;
};

/// "<method>/<fn>/<premise>/<hypothesis>", e.g. "zs/p_e/sent/sent".
std::string describe(const MethodSpec& spec);

/// Throws InvalidArgument for an illegal method/granularity combination,
/// k < 1 or a non-positive token budget.
void validate(const MethodSpec& spec);

/// A summary plus optional pre-extracted SCUs (one list per summary
/// sentence).
struct SummaryInput {
  std::string text;
  std::optional<std::vector<std::vector<std::string>>> scus;
};

/// Pairs summary sentences with SCU lists. When the SCU groups line up with
/// split_sentences(text) they are paired index by index; otherwise the groups
/// are taken as the sentences, with empty groups dropped. Without SCUs every
/// sentence is its own single unit.
std::vector<SentenceScus> summary_scus(const SummaryInput& summary);

std::vector<std::string> premise_units(std::string_view document,
                                       const GranularityConfig& config);
std::vector<std::string> hypothesis_units(const SummaryInput& summary,
                                          HypothesisGranularity granularity);

/// Score matrix at a doc|sent premise granularity. Throws
/// EmptyDecomposition when either side yields no units.
ScoreMatrix build_matrix(std::string_view document, const SummaryInput& summary,
                         const GranularityConfig& config, NliGateway& gateway);

/// Scores one pair. Conv methods require `conv`.
FactualityScore score_example(std::string_view document,
                              const SummaryInput& summary, const MethodSpec& spec,
                              NliGateway& gateway,
                              const ConvParams* conv = nullptr);

}  // namespace nlifact
