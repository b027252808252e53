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

// Two-stage scoring with retrieved premise contexts.
//
// Stage one scores every (document sentence, hypothesis unit) pair. For each
// unit a subset of document sentences is selected, joined in document order
// with single spaces, cut to the premise token budget and scored again
// against that unit. SCU variants average unit scores per summary sentence
// before averaging over sentences.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nlifact/aggregate.hpp"
#include "nlifact/gateway.hpp"
#include "nlifact/score_fn.hpp"

namespace nlifact {

inline constexpr int kDefaultTopK = 3;
inline constexpr int kDefaultTokenBudget = 500;

/// Indices of the k largest entries (ties go to the smaller index), returned
/// in ascending index order. k larger than the vector selects everything.
std::vector<std::size_t> top_k_indices(const Eigen::Ref<const Eigen::VectorXd>& scores,
                                       int k);

/// Union of the top-k by entailment and the top-k by contradiction, in
/// ascending index order.
std::vector<std::size_t> rerank_selection(
    const Eigen::Ref<const Eigen::VectorXd>& entailment,
    const Eigen::Ref<const Eigen::VectorXd>& contradiction, int k);

/// Selected sentences joined with single spaces and cut to `token_budget`.
std::string build_premise(std::span<const std::string> sentences,
                          std::span<const std::size_t> selection,
                          int token_budget);

/// A summary sentence with its content units.
struct SentenceScus {
  std::string sentence;
  std::vector<std::string> scus;
};

FactualityScore topk_rescore(std::string_view document,
                             std::span<const std::string> summary_units, int k,
                             ScoreFn fn, NliGateway& gateway,
                             int token_budget = kDefaultTokenBudget);

FactualityScore rr_rescore(std::string_view document,
                           std::span<const std::string> summary_units, int k,
                           ScoreFn fn, NliGateway& gateway, Aggregation mode,
                           int token_budget = kDefaultTokenBudget);

/// Per SCU the best fz over document sentences; mean of SCUs per sentence;
/// mean over sentences. Sentences without SCUs stand in for themselves.
FactualityScore scu_sent_score(std::string_view document,
                               std::span<const SentenceScus> summary, ScoreFn fn,
                               NliGateway& gateway);

/// As scu_sent_score, but each SCU is rescored against its top-k document
/// sentences.
FactualityScore scu_topk_score(std::string_view document,
                               std::span<const SentenceScus> summary, int k,
                               ScoreFn fn, NliGateway& gateway,
                               int token_budget = kDefaultTokenBudget);

/// Mean over sentences of the mean over each sentence's SCU scores.
/// `unit_scores` is the flattened SCU order of `summary` (after fallback).
FactualityScore nested_mean(std::span<const SentenceScus> summary,
                            std::span<const double> unit_scores);

/// SCUs of each sentence with the sentence itself substituted for an empty
/// list.
std::vector<SentenceScus> with_fallback(std::span<const SentenceScus> summary);

}  // namespace nlifact
