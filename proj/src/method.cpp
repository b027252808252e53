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

#include "nlifact/method.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <utility>

#include "nlifact/errors.hpp"
#include "nlifact/segmentation.hpp"

namespace nlifact {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 9> kMethodNames{{
    {Method::kZs, "zs"},
    {Method::kConv, "conv"},
    {Method::kSentliSoft, "sentli-soft"},
    {Method::kSentliHard, "sentli-hard"},
    {Method::kTopK, "topk"},
    {Method::kRrSoft, "rr-soft"},
    {Method::kRrHard, "rr-hard"},
    {Method::kScuSent, "scu-sent"},
    {Method::kScuTopK, "scu-topk"},
}};

std::string trimmed(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_matrix_method(Method m) {
  return m == Method::kZs || m == Method::kConv || m == Method::kSentliSoft ||
         m == Method::kSentliHard;
}

bool is_rescoring_method(Method m) {
  return m == Method::kTopK || m == Method::kRrSoft || m == Method::kRrHard ||
         m == Method::kScuTopK;
}

}  // namespace

std::string to_string(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return std::string(name);
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  for (const auto& [m, name] : kMethodNames) {
    if (name == text) return m;
  }
  throw InvalidArgument("unknown method '" + std::string(text) + "'");
}

std::string to_string(const PremiseGranularity& g) {
  switch (g.kind) {
    case PremiseGranularity::Kind::kFullDoc:
      return "doc";
    case PremiseGranularity::Kind::kSentence:
      return "sent";
    case PremiseGranularity::Kind::kTopK:
      return "topk:" + std::to_string(g.k);
  }
  return "unknown";
}

PremiseGranularity parse_premise_granularity(std::string_view text) {
  if (text == "doc") return PremiseGranularity::full_doc();
  if (text == "sent") return PremiseGranularity::sentence();
  if (text.starts_with("topk:")) {
    const std::string_view digits = text.substr(5);
    int k = 0;
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || k < 1) {
      throw InvalidArgument("bad TopK granularity '" + std::string(text) +
                            "' (expected topk:<k> with k >= 1)");
    }
    return PremiseGranularity::top_k(k);
  }
  throw InvalidArgument("unknown premise granularity '" + std::string(text) +
                        "' (expected doc, sent or topk:<k>)");
}

std::string to_string(HypothesisGranularity g) {
  switch (g) {
    case HypothesisGranularity::kFullDoc:
      return "doc";
    case HypothesisGranularity::kSentence:
      return "sent";
    case HypothesisGranularity::kScu:
      return "scu";
  }
  return "unknown";
}

HypothesisGranularity parse_hypothesis_granularity(std::string_view text) {
  if (text == "doc") return HypothesisGranularity::kFullDoc;
  if (text == "sent") return HypothesisGranularity::kSentence;
  if (text == "scu") return HypothesisGranularity::kScu;
  throw InvalidArgument("unknown hypothesis granularity '" + std::string(text) +
                        "' (expected doc, sent or scu)");
}

std::string to_string(const GranularityConfig& g) {
  return to_string(g.premise) + "/" + to_string(g.hypothesis);
}

GranularityConfig parse_granularity(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw InvalidArgument("granularity '" + std::string(text) +
                          "' must look like <premise>/<hypothesis>");
  }
  GranularityConfig g;
  g.premise = parse_premise_granularity(text.substr(0, slash));
  g.hypothesis = parse_hypothesis_granularity(text.substr(slash + 1));
  return g;
}

std::string describe(const MethodSpec& spec) {
  return to_string(spec.method) + "/" + to_string(spec.fn) + "/" +
         to_string(spec.granularity);
}

void validate(const MethodSpec& spec) {
  const auto& g = spec.granularity;
  if (g.token_budget <= 0) throw InvalidArgument("token budget must be positive");
  const bool topk_premise = g.premise.kind == PremiseGranularity::Kind::kTopK;
  if (topk_premise && g.premise.k < 1) throw InvalidArgument("k must be >= 1");

  const auto illegal = [&] {
    return InvalidArgument("method " + to_string(spec.method) +
                           " does not support granularity " + to_string(g));
  };
  if (is_matrix_method(spec.method) && topk_premise) throw illegal();
  if (is_rescoring_method(spec.method) && !topk_premise) throw illegal();
  if (spec.method == Method::kScuSent &&
      (g.premise.kind != PremiseGranularity::Kind::kSentence ||
       g.hypothesis != HypothesisGranularity::kScu)) {
    throw illegal();
  }
  if (spec.method == Method::kScuTopK && g.hypothesis != HypothesisGranularity::kScu) {
    throw illegal();
  }
}

std::vector<SentenceScus> summary_scus(const SummaryInput& summary) {
  auto sentences = sentence_texts(summary.text);
  std::vector<SentenceScus> out;
  if (!summary.scus) {
    for (auto& s : sentences) out.push_back({s, {s}});
    return out;
  }
  const auto& groups = *summary.scus;
  if (groups.size() == sentences.size()) {
    for (std::size_t i = 0; i < groups.size(); ++i) {
      out.push_back({std::move(sentences[i]), groups[i]});
    }
    return out;
  }
  for (const auto& group : groups) {
    SentenceScus s;
    for (const auto& scu : group) {
      if (!trimmed(scu).empty()) s.scus.push_back(scu);
    }
    if (s.scus.empty()) continue;
    s.sentence = join_sentences(s.scus);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> premise_units(std::string_view document,
                                       const GranularityConfig& config) {
  if (config.premise.kind == PremiseGranularity::Kind::kFullDoc) {
    std::string unit = trimmed(truncate_to_token_budget(document, config.token_budget));
    if (unit.empty()) return {};
    return {std::move(unit)};
  }
  return sentence_texts(document);
}

std::vector<std::string> hypothesis_units(const SummaryInput& summary,
                                          HypothesisGranularity granularity) {
  switch (granularity) {
    case HypothesisGranularity::kFullDoc: {
      std::string unit = trimmed(summary.text);
      if (unit.empty()) return {};
      return {std::move(unit)};
    }
    case HypothesisGranularity::kSentence:
      return sentence_texts(summary.text);
    case HypothesisGranularity::kScu: {
      std::vector<std::string> units;
      for (const auto& s : with_fallback(summary_scus(summary))) {
        units.insert(units.end(), s.scus.begin(), s.scus.end());
      }
      return units;
    }
  }
  return {};
}

ScoreMatrix build_matrix(std::string_view document, const SummaryInput& summary,
                         const GranularityConfig& config, NliGateway& gateway) {
  auto premises = premise_units(document, config);
  if (premises.empty()) throw EmptyDecomposition("document yields no premise units");
  auto hypotheses = hypothesis_units(summary, config.hypothesis);
  if (hypotheses.empty()) {
    throw EmptyDecomposition("summary yields no hypothesis units");
  }
  return score_all_pairs(std::move(premises), std::move(hypotheses), gateway);
}

FactualityScore score_example(std::string_view document,
                              const SummaryInput& summary, const MethodSpec& spec,
                              NliGateway& gateway, const ConvParams* conv) {
  validate(spec);
  const auto& g = spec.granularity;
  FactualityScore out;
  switch (spec.method) {
    case Method::kZs:
      out = zs_aggregate(build_matrix(document, summary, g, gateway), spec.fn);
      break;
    case Method::kSentliSoft:
      out = sentli_aggregate(build_matrix(document, summary, g, gateway), spec.fn,
                             Aggregation::kSoft);
      break;
    case Method::kSentliHard:
      out = sentli_aggregate(build_matrix(document, summary, g, gateway), spec.fn,
                             Aggregation::kHard);
      break;
    case Method::kConv:
      if (conv == nullptr) throw InvalidArgument("conv method needs ConvParams");
      out = conv_aggregate(build_matrix(document, summary, g, gateway), spec.fn, *conv);
      break;
    case Method::kTopK: {
      const auto units = hypothesis_units(summary, g.hypothesis);
      if (units.empty()) throw EmptyDecomposition("summary yields no hypothesis units");
      out = topk_rescore(document, units, g.premise.k, spec.fn, gateway, g.token_budget);
      break;
    }
    case Method::kRrSoft:
    case Method::kRrHard: {
      const auto units = hypothesis_units(summary, g.hypothesis);
      if (units.empty()) throw EmptyDecomposition("summary yields no hypothesis units");
      out = rr_rescore(document, units, g.premise.k, spec.fn, gateway,
                       spec.method == Method::kRrSoft ? Aggregation::kSoft
                                                      : Aggregation::kHard,
                       g.token_budget);
      break;
    }
    case Method::kScuSent:
      out = scu_sent_score(document, summary_scus(summary), spec.fn, gateway);
      break;
    case Method::kScuTopK:
      out = scu_topk_score(document, summary_scus(summary), g.premise.k, spec.fn,
                           gateway, g.token_budget);
      break;
  }
  out.method = describe(spec);
  return out;
}

}  // namespace nlifact
