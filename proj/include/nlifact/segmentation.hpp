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

// Deterministic text decomposition: sentence splitting, whitespace token
// budgets and per-corpus sentence count statistics.

#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlifact {

/// A sentence as a byte span [char_start, char_end) of its source text.
struct Sentence {
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const Sentence&) const = default;
};

struct SplitterOptions {
  /// Words (without the trailing period) after which a period never ends a
  /// sentence. Matched case-sensitively.
  std::set<std::string, std::less<>> abbreviations;
  /// Treat "X." with X a single uppercase letter as an abbreviation
  /// ("J. Smith", "U.S.A.").
  bool single_capital_abbreviations = true;
  /// A blank line always ends a sentence, punctuation or not.
  bool split_on_blank_lines = true;

  static SplitterOptions defaults();
};

/// Splits at [.!?] runs (plus closing quotes/brackets) followed either by
/// whitespace and an uppercase letter, or directly by an uppercase letter with
/// no space in between ("Cenotaph.Anzac"). Offsets are byte offsets; only
/// ASCII letters count as uppercase.
std::vector<Sentence> split_sentences(std::string_view text,
                                      const SplitterOptions& options);
std::vector<Sentence> split_sentences(std::string_view text);

/// Texts of split_sentences(text), in order.
std::vector<std::string> sentence_texts(std::string_view text);

/// Whitespace-delimited tokens.
std::vector<std::string_view> whitespace_tokens(std::string_view text);
std::size_t count_tokens(std::string_view text);

/// Prefix of `text` holding at most `budget` whitespace tokens. Text already
/// within budget is returned unchanged. Throws InvalidArgument if budget <= 0.
std::string truncate_to_token_budget(std::string_view text, int budget);

/// Sentences joined with single spaces.
std::string join_sentences(std::span<const std::string> sentences);

struct CorpusStats {
  std::size_t documents = 0;
  double mean = 0.0;
  double std_dev = 0.0;  // sample, ddof = 1
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
};

/// Linear interpolation between closest ranks; `q` in [0, 1]. `sorted` must
/// be non-empty and ascending.
double percentile_linear(std::span<const double> sorted, double q);

CorpusStats stats_from_counts(std::span<const double> counts);

/// Statistics of per-document sentence counts. Throws InvalidArgument on an
/// empty corpus.
CorpusStats corpus_sentence_stats(std::span<const std::string> documents,
                                  const SplitterOptions& options =
                                      SplitterOptions::defaults());

}  // namespace nlifact
