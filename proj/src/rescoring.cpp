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

#include "nlifact/rescoring.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "nlifact/errors.hpp"
#include "nlifact/segmentation.hpp"

namespace nlifact {

namespace {

enum class Selection { kEntail, kRerank };

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::vector<std::string> document_sentences(std::string_view document) {
  auto sentences = sentence_texts(document);
  if (sentences.empty()) {
    throw EmptyDecomposition("document has no sentences");
  }
  return sentences;
}

void check_k(int k) {
  if (k < 1) throw InvalidArgument("k must be >= 1, got " + std::to_string(k));
}

Eigen::VectorXd rescore_units(const std::vector<std::string>& sentences,
                              std::span<const std::string> units, int k,
                              Selection selection, ScoreFn fn,
                              NliGateway& gateway, int token_budget) {
  const ScoreMatrix stage_one = score_all_pairs(
      sentences, std::vector<std::string>(units.begin(), units.end()), gateway);

  std::vector<ScoreRequest> rescored;
  rescored.reserve(units.size());
  for (Eigen::Index n = 0; n < stage_one.cols(); ++n) {
    const auto chosen =
        selection == Selection::kEntail
            ? top_k_indices(stage_one.entailment.col(n), k)
            : rerank_selection(stage_one.entailment.col(n),
                               stage_one.contradiction.col(n), k);
    rescored.push_back({build_premise(sentences, chosen, token_budget),
                        units[static_cast<std::size_t>(n)]});
  }
  const auto dists = gateway.score_pairs(rescored);

  Eigen::VectorXd scores(static_cast<Eigen::Index>(dists.size()));
  for (std::size_t n = 0; n < dists.size(); ++n) {
    scores(static_cast<Eigen::Index>(n)) = fz(dists[n], fn);
  }
  return scores;
}

std::vector<std::string> flatten(std::span<const SentenceScus> summary) {
  std::vector<std::string> units;
  for (const auto& s : summary) units.insert(units.end(), s.scus.begin(), s.scus.end());
  return units;
}

}  // namespace

std::vector<std::size_t> top_k_indices(const Eigen::Ref<const Eigen::VectorXd>& scores,
                                       int k) {
  check_k(k);
  std::vector<std::size_t> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores(static_cast<Eigen::Index>(a)) > scores(static_cast<Eigen::Index>(b));
  });
  order.resize(std::min(order.size(), static_cast<std::size_t>(k)));
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<std::size_t> rerank_selection(
    const Eigen::Ref<const Eigen::VectorXd>& entailment,
    const Eigen::Ref<const Eigen::VectorXd>& contradiction, int k) {
  auto chosen = top_k_indices(entailment, k);
  const auto contra = top_k_indices(contradiction, k);
  chosen.insert(chosen.end(), contra.begin(), contra.end());
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  return chosen;
}

std::string build_premise(std::span<const std::string> sentences,
                          std::span<const std::size_t> selection,
                          int token_budget) {
  std::vector<std::string> picked;
  picked.reserve(selection.size());
  for (std::size_t i : selection) picked.push_back(sentences[i]);
  return truncate_to_token_budget(join_sentences(picked), token_budget);
}

FactualityScore topk_rescore(std::string_view document,
                             std::span<const std::string> summary_units, int k,
                             ScoreFn fn, NliGateway& gateway, int token_budget) {
  check_k(k);
  const Eigen::VectorXd units =
      rescore_units(document_sentences(document), summary_units, k,
                    Selection::kEntail, fn, gateway, token_budget);
  FactualityScore out;
  out.value = soft_aggregate(units);
  out.per_hypothesis_unit = to_std_vector(units);
  return out;
}

FactualityScore rr_rescore(std::string_view document,
                           std::span<const std::string> summary_units, int k,
                           ScoreFn fn, NliGateway& gateway, Aggregation mode,
                           int token_budget) {
  check_k(k);
  const Eigen::VectorXd units =
      rescore_units(document_sentences(document), summary_units, k,
                    Selection::kRerank, fn, gateway, token_budget);
  FactualityScore out;
  out.value = mode == Aggregation::kSoft ? soft_aggregate(units)
                                         : hard_aggregate(units);
  out.per_hypothesis_unit = to_std_vector(units);
  return out;
}

std::vector<SentenceScus> with_fallback(std::span<const SentenceScus> summary) {
  std::vector<SentenceScus> out;
  out.reserve(summary.size());
  for (const auto& s : summary) {
    SentenceScus group{s.sentence, {}};
    for (const auto& scu : s.scus) {
      if (!blank(scu)) group.scus.push_back(scu);
    }
    if (group.scus.empty()) {
      if (blank(s.sentence)) {
        throw EmptyDecomposition("summary sentence has neither text nor SCUs");
      }
      group.scus.push_back(s.sentence);
    }
    out.push_back(std::move(group));
  }
  if (out.empty()) throw EmptyDecomposition("summary has no sentences");
  return out;
}

FactualityScore nested_mean(std::span<const SentenceScus> summary,
                            std::span<const double> unit_scores) {
  FactualityScore out;
  std::size_t offset = 0;
  for (const auto& s : summary) {
    const auto slice = Eigen::Map<const Eigen::VectorXd>(
        unit_scores.data() + offset, static_cast<Eigen::Index>(s.scus.size()));
    out.per_hypothesis_unit.push_back(soft_aggregate(slice));
    offset += s.scus.size();
  }
  if (offset != unit_scores.size()) {
    throw InvalidArgument("nested_mean: unit scores do not match SCU layout");
  }
  out.value = soft_aggregate(Eigen::Map<const Eigen::VectorXd>(
      out.per_hypothesis_unit.data(),
      static_cast<Eigen::Index>(out.per_hypothesis_unit.size())));
  return out;
}

FactualityScore scu_sent_score(std::string_view document,
                               std::span<const SentenceScus> summary, ScoreFn fn,
                               NliGateway& gateway) {
  const auto groups = with_fallback(summary);
  const ScoreMatrix matrix =
      score_all_pairs(document_sentences(document), flatten(groups), gateway);
  const Eigen::VectorXd scu_scores = column_max(fz_matrix(matrix, fn));
  return nested_mean(groups, std::span<const double>(
                                 scu_scores.data(),
                                 static_cast<std::size_t>(scu_scores.size())));
}

FactualityScore scu_topk_score(std::string_view document,
                               std::span<const SentenceScus> summary, int k,
                               ScoreFn fn, NliGateway& gateway, int token_budget) {
  check_k(k);
  const auto groups = with_fallback(summary);
  const auto units = flatten(groups);
  const Eigen::VectorXd scu_scores =
      rescore_units(document_sentences(document), units, k, Selection::kEntail,
                    fn, gateway, token_budget);
  return nested_mean(groups, std::span<const double>(
                                 scu_scores.data(),
                                 static_cast<std::size_t>(scu_scores.size())));
}

}  // namespace nlifact
