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

#include "nlifact/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlifact/errors.hpp"

namespace nlifact {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || is_upper(c); }
bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_ascii_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']';
}
bool is_ascii_opener(char c) {
  return c == '"' || c == '\'' || c == '(' || c == '[';
}

// Length of a closing quote at `i` (ASCII or UTF-8 right single/double
// quotation mark), 0 if none.
std::size_t closer_length(std::string_view text, std::size_t i) {
  if (i >= text.size()) return 0;
  if (is_ascii_closer(text[i])) return 1;
  if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
      static_cast<unsigned char>(text[i + 1]) == 0x80) {
    const auto third = static_cast<unsigned char>(text[i + 2]);
    if (third == 0x99 || third == 0x9D) return 3;
  }
  return 0;
}

std::size_t opener_length(std::string_view text, std::size_t i) {
  if (i >= text.size()) return 0;
  if (is_ascii_opener(text[i])) return 1;
  if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
      static_cast<unsigned char>(text[i + 1]) == 0x80) {
    const auto third = static_cast<unsigned char>(text[i + 2]);
    if (third == 0x98 || third == 0x9C) return 3;
  }
  return 0;
}

bool starts_sentence(std::string_view text, std::size_t k) {
  if (k >= text.size()) return false;
  if (is_upper(text[k])) return true;
  const std::size_t open = opener_length(text, k);
  return open > 0 && k + open < text.size() && is_upper(text[k + open]);
}

// Alphabetic word ending right before position `end`.
std::string_view word_before(std::string_view text, std::size_t end) {
  std::size_t begin = end;
  while (begin > 0 && is_alpha(text[begin - 1])) --begin;
  return text.substr(begin, end - begin);
}

bool suppressed_by_abbreviation(std::string_view text, std::size_t period,
                                const SplitterOptions& options) {
  const std::string_view word = word_before(text, period);
  if (word.empty()) return false;
  if (options.single_capital_abbreviations && word.size() == 1 &&
      is_upper(word.front())) {
    return true;
  }
  return options.abbreviations.find(word) != options.abbreviations.end();
}

void emit(std::string_view text, std::size_t begin, std::size_t end,
          std::vector<Sentence>& out) {
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  if (begin < end) {
    out.push_back({std::string(text.substr(begin, end - begin)), begin, end});
  }
}

}  // namespace

SplitterOptions SplitterOptions::defaults() {
  SplitterOptions options;
  options.abbreviations = {"Mr",   "Mrs",  "Ms",  "Dr",   "Prof", "Sr",
                           "Jr",   "St",   "Mt",  "Gen",  "Col",  "Lt",
                           "Sgt",  "Capt", "Gov", "Sen",  "Rep",  "Rev",
                           "Hon",  "Inc",  "Ltd", "Co",   "Corp", "vs",
                           "No",   "Fig",  "Vol", "approx"};
  return options;
}

std::vector<Sentence> split_sentences(std::string_view text,
                                      const SplitterOptions& options) {
  std::vector<Sentence> out;
  const std::size_t n = text.size();
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (options.split_on_blank_lines && c == '\n') {
      std::size_t j = i + 1;
      while (j < n && is_space(text[j]) && text[j] != '\n') ++j;
      if (j < n && text[j] == '\n') {
        emit(text, start, i, out);
        start = j + 1;
        i = j + 1;
        continue;
      }
      ++i;
      continue;
    }
    if (!is_terminal(c)) {
      ++i;
      continue;
    }

    std::size_t run_end = i;
    bool only_period = true;
    while (run_end < n && is_terminal(text[run_end])) {
      only_period = only_period && text[run_end] == '.';
      ++run_end;
    }
    for (std::size_t len; (len = closer_length(text, run_end)) > 0;) {
      run_end += len;
    }

    bool split = false;
    if (run_end >= n) {
      split = true;
    } else if (is_space(text[run_end])) {
      std::size_t k = run_end;
      while (k < n && is_space(text[k])) ++k;
      split = k >= n || starts_sentence(text, k);
    } else {
      split = is_upper(text[run_end]);
    }
    if (split && run_end < n && only_period && run_end - i == 1 &&
        suppressed_by_abbreviation(text, i, options)) {
      split = false;
    }

    if (split) {
      emit(text, start, run_end, out);
      start = run_end;
    }
    i = run_end;
  }
  emit(text, start, n, out);
  return out;
}

std::vector<Sentence> split_sentences(std::string_view text) {
  static const SplitterOptions options = SplitterOptions::defaults();
  return split_sentences(text, options);
}

std::vector<std::string> sentence_texts(std::string_view text) {
  std::vector<std::string> texts;
  for (auto& s : split_sentences(text)) texts.push_back(std::move(s.text));
  return texts;
}

std::vector<std::string_view> whitespace_tokens(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > begin) tokens.push_back(text.substr(begin, i - begin));
  }
  return tokens;
}

std::size_t count_tokens(std::string_view text) {
  return whitespace_tokens(text).size();
}

std::string truncate_to_token_budget(std::string_view text, int budget) {
  if (budget <= 0) {
    throw InvalidArgument("token budget must be positive, got " +
                          std::to_string(budget));
  }
  std::size_t seen = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size()) break;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (++seen == static_cast<std::size_t>(budget)) {
      // Anything left beyond whitespace means the budget cuts here.
      std::size_t rest = i;
      while (rest < text.size() && is_space(text[rest])) ++rest;
      return rest < text.size() ? std::string(text.substr(0, i))
                                : std::string(text);
    }
  }
  return std::string(text);
}

std::string join_sentences(std::span<const std::string> sentences) {
  std::string joined;
  for (const auto& s : sentences) {
    if (!joined.empty()) joined.push_back(' ');
    joined += s;
  }
  return joined;
}

double percentile_linear(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

CorpusStats stats_from_counts(std::span<const double> counts) {
  if (counts.empty()) throw InvalidArgument("corpus is empty");
  std::vector<double> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());

  CorpusStats stats;
  stats.documents = sorted.size();
  const double n = static_cast<double>(sorted.size());
  stats.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  if (sorted.size() > 1) {
    double ss = 0.0;
    for (double c : sorted) ss += (c - stats.mean) * (c - stats.mean);
    stats.std_dev = std::sqrt(ss / (n - 1.0));
  }
  stats.p25 = percentile_linear(sorted, 0.25);
  stats.p50 = percentile_linear(sorted, 0.50);
  stats.p75 = percentile_linear(sorted, 0.75);
  return stats;
}

CorpusStats corpus_sentence_stats(std::span<const std::string> documents,
                                  const SplitterOptions& options) {
  if (documents.empty()) throw InvalidArgument("corpus is empty");
  std::vector<double> counts;
  counts.reserve(documents.size());
  for (const auto& doc : documents) {
    counts.push_back(static_cast<double>(split_sentences(doc, options).size()));
  }
  return stats_from_counts(counts);
}

}  // namespace nlifact
