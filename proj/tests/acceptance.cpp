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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
//   acceptance [fixture_dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlifact/aggregate.hpp"
#include "nlifact/conv.hpp"
#include "nlifact/dataset.hpp"
#include "nlifact/errors.hpp"
#include "nlifact/evaluation.hpp"
#include "nlifact/gateway.hpp"
#include "nlifact/grid.hpp"
#include "nlifact/method.hpp"
#include "nlifact/metrics.hpp"
#include "nlifact/rescoring.hpp"
#include "nlifact/segmentation.hpp"
#include "oracles.hpp"

#ifndef NLIFACT_FIXTURE_DIR
#define NLIFACT_FIXTURE_DIR "tests/fixtures"
#endif

using namespace nlifact;

namespace {

/// Collects the first few failures of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++failed_;
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": got " << got << ", want " << want;
    expect(std::fabs(got - want) <= tol, msg.str());
  }
  bool ok() const { return failed_ == 0; }
  long checks() const { return checks_; }
  long failed() const { return failed_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  long checks_ = 0;
  long failed_ = 0;
  std::vector<std::string> failures_;
};

int g_failed = 0;

void report(const std::string& name, const Check& c, double seconds, double limit,
            const std::string& detail) {
  const bool in_time = limit <= 0 || seconds < limit;
  const bool pass = c.ok() && in_time;
  if (!pass) ++g_failed;
  std::printf("%s  %-32s %ld checks, %.2fs%s  %s\n", pass ? "PASS" : "FAIL", name.c_str(),
              c.checks(), seconds,
              limit > 0 ? (" (limit " + std::to_string(static_cast<int>(limit)) + "s)").c_str()
                        : "",
              detail.c_str());
  if (!in_time) std::printf("      over the time limit\n");
  for (const auto& f : c.failures()) std::printf("      %s\n", f.c_str());
  if (c.failed() > static_cast<long>(c.failures().size())) {
    std::printf("      ... %ld failures in total\n", c.failed());
  }
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

NliGateway mock_gateway() {
  return NliGateway(std::make_shared<MockBackend>(), std::make_shared<ScoreCache>());
}

std::vector<std::string> unit_labels(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

bool minus_contra(ScoreFn fn) { return fn == ScoreFn::kEntailMinusContra; }

constexpr double kGrid[5] = {0.0, 0.25, 0.5, 0.75, 1.0};

/// Checks zs and both sentli modes on every M x N matrix over the grid.
/// Cells are (v, 1 - v, 0), so fz is v under either score function.
void exhaustive_shape(int m, int n, Check& c, long& matrices) {
  const int cells = m * n;
  const auto premises = unit_labels("d", m);
  const auto hypotheses = unit_labels("s", n);
  std::vector<int> digit(cells, 0);
  std::vector<NliDistribution> flat(cells, {0.0, 1.0, 0.0});
  oracle::Grid g(m, std::vector<double>(n, 0.0));
  while (true) {
    const auto matrix = ScoreMatrix::from_cells(premises, hypotheses, flat);
    const auto per = oracle::column_maxes(g);
    for (ScoreFn fn : {ScoreFn::kEntail, ScoreFn::kEntailMinusContra}) {
      const auto zs = zs_aggregate(matrix, fn);
      const auto hard = sentli_aggregate(matrix, fn, Aggregation::kHard);
      c.near(zs.value, oracle::mean(per), 1e-12, "exhaustive zs");
      c.near(hard.value, oracle::minimum(per), 1e-12, "exhaustive sentli-hard");
      c.expect(sentli_aggregate(matrix, fn, Aggregation::kSoft).value == zs.value,
               "exhaustive sentli-soft");
    }
    ++matrices;
    int i = 0;
    while (i < cells && digit[i] == 4) {
      digit[i] = 0;
      flat[i] = {0.0, 1.0, 0.0};
      g[i / n][i % n] = 0.0;
      ++i;
    }
    if (i == cells) break;
    ++digit[i];
    const double v = kGrid[digit[i]];
    flat[i] = {v, 1.0 - v, 0.0};
    g[i / n][i % n] = v;
  }
}

// ---------------------------------------------------------------------------

void aggregation_oracle_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  auto gw = mock_gateway();
  std::mt19937_64 rng(20230601);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_int_distribution<int> kdist(1, 9);

  constexpr int kInstances = 1200;
  for (int round = 0; round < kInstances; ++round) {
    const auto doc_sentences = oracle::random_sentences(rng, size(rng));
    const auto summary = oracle::random_sentences(rng, size(rng));
    const std::string doc = oracle::join_all(doc_sentences);
    oracle::Groups groups;
    std::vector<SentenceScus> with_scus;
    for (const auto& s : summary) {
      groups.push_back(oracle::random_scus(rng, s));
      with_scus.push_back({s, groups.back()});
    }
    const int k = kdist(rng);
    const int budget = round % 4 == 0 ? 6 : kDefaultTokenBudget;

    for (ScoreFn fn : {ScoreFn::kEntail, ScoreFn::kEntailMinusContra}) {
      const bool mc = minus_contra(fn);
      const auto matrix = score_all_pairs(doc_sentences, summary, gw);
      const auto want_zs = oracle::zs(doc_sentences, summary, mc);

      const auto zs = zs_aggregate(matrix, fn);
      c.near(zs.value, want_zs.value, 1e-12, "zs");
      for (std::size_t n = 0; n < summary.size(); ++n) {
        c.near(zs.per_hypothesis_unit[n], want_zs.per_unit[n], 1e-12, "zs per unit");
      }
      c.near(sentli_aggregate(matrix, fn, Aggregation::kSoft).value, want_zs.value, 1e-12,
             "sentli-soft");
      c.near(sentli_aggregate(matrix, fn, Aggregation::kHard).value,
             oracle::minimum(want_zs.per_unit), 1e-12, "sentli-hard");

      const auto topk = topk_rescore(doc, summary, k, fn, gw, budget);
      const auto want_topk = oracle::topk(doc_sentences, summary, k, mc, budget);
      c.near(topk.value, want_topk.value, 1e-12, "topk");
      for (std::size_t n = 0; n < summary.size(); ++n) {
        c.near(topk.per_hypothesis_unit[n], want_topk.per_unit[n], 1e-12, "topk per unit");
      }

      for (Aggregation mode : {Aggregation::kSoft, Aggregation::kHard}) {
        const bool hard = mode == Aggregation::kHard;
        c.near(rr_rescore(doc, summary, k, fn, gw, mode, budget).value,
               oracle::topk(doc_sentences, summary, k, mc, budget, true, hard).value, 1e-12,
               hard ? "rr-hard" : "rr-soft");
      }

      c.near(scu_sent_score(doc, with_scus, fn, gw).value,
             oracle::scu(doc_sentences, summary, groups, 0, mc, budget).value, 1e-12,
             "scu-sent");
      c.near(scu_topk_score(doc, with_scus, k, fn, gw, budget).value,
             oracle::scu(doc_sentences, summary, groups, k, mc, budget).value, 1e-12,
             "scu-topk");
    }
  }

  // Exhaustive over the 5-value grid. Every shape up to 3 x 3 is enumerated
  // matrix by matrix. For 3 x 4, 4 x 3 and 4 x 4 the 5^12 to 5^16 matrices
  // are covered column-wise: every column a 4 x 4 matrix can contain and
  // every row of column maxima it can produce are enumerated through the
  // same entry points, and a random sample of whole matrices is checked
  // literally.
  long matrices = 0;
  for (int m = 1; m <= 4; ++m) {
    for (int n = 1; n <= 4; ++n) {
      if (m * n <= 9) exhaustive_shape(m, n, c, matrices);
    }
  }
  long columns = 0;
  for (int m = 3; m <= 4; ++m) {
    exhaustive_shape(m, 1, c, columns);
    exhaustive_shape(1, m, c, columns);
  }
  std::uniform_int_distribution<int> cell(0, 4);
  long sampled = 0;
  for (int round = 0; round < 100000; ++round) {
    const int m = 3 + round % 2, n = 3 + (round / 2) % 2;
    if (m * n <= 9) continue;
    std::vector<NliDistribution> flat;
    oracle::Grid g(m, std::vector<double>(n));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const double v = kGrid[cell(rng)];
        g[i][j] = v;
        flat.push_back({v, 1.0 - v, 0.0});
      }
    }
    const auto matrix = ScoreMatrix::from_cells(unit_labels("d", m), unit_labels("s", n), flat);
    const auto per = oracle::column_maxes(g);
    c.near(zs_aggregate(matrix, ScoreFn::kEntail).value, oracle::mean(per), 1e-12,
           "sampled 4x4 zs");
    c.near(sentli_aggregate(matrix, ScoreFn::kEntail, Aggregation::kHard).value,
           oracle::minimum(per), 1e-12, "sampled 4x4 sentli-hard");
    ++sampled;
  }

  char detail[256];
  std::snprintf(detail, sizeof detail,
                "%d random instances x 2 fns; %ld grid matrices up to 3x3 exhaustive; "
                "4x4 via %ld columns/max-rows + %ld sampled",
                kInstances, matrices, columns, sampled);
  report("aggregation oracle suite", c, seconds_since(t0), 60, detail);
}

void identity_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  auto gw = mock_gateway();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  for (int round = 0; round < 1000; ++round) {
    const auto doc_sentences = oracle::random_sentences(rng, size(rng));
    const auto summary = oracle::random_sentences(rng, size(rng));
    const std::string doc = oracle::join_all(doc_sentences);
    const int m = static_cast<int>(doc_sentences.size());
    const SummaryInput input{oracle::join_all(summary), std::nullopt};

    for (ScoreFn fn : {ScoreFn::kEntail, ScoreFn::kEntailMinusContra}) {
      const auto spec = [&](Method method, const char* g) {
        return MethodSpec{method, fn, parse_granularity(g)};
      };
      const auto zs = score_example(doc, input, spec(Method::kZs, "sent/sent"), gw);
      const auto soft = score_example(doc, input, spec(Method::kSentliSoft, "sent/sent"), gw);
      const auto hard = score_example(doc, input, spec(Method::kSentliHard, "sent/sent"), gw);
      c.expect(zs.value == soft.value && zs.per_hypothesis_unit == soft.per_hypothesis_unit,
               "zs == sentli-soft");
      c.expect(hard.value <= soft.value, "sentli hard <= soft");

      // Fallback SCUs (each sentence its own unit) collapse to sentence zs.
      const auto scu = score_example(doc, input, spec(Method::kScuSent, "sent/scu"), gw);
      c.expect(scu.value == zs.value, "scu-sent degenerate == zs");
      std::vector<std::vector<std::string>> self;
      for (const auto& s : summary) self.push_back({s});
      const SummaryInput explicit_self{input.text, self};
      c.expect(score_example(doc, explicit_self, spec(Method::kScuSent, "sent/scu"), gw).value ==
                   zs.value,
               "scu-sent with [sentence] SCUs == zs");

      // k >= M reproduces the full-document premise exactly.
      const std::string g = "topk:" + std::to_string(m + round % 3) + "/sent";
      const auto topk = score_example(doc, input, spec(Method::kTopK, g.c_str()), gw);
      const auto full = score_example(doc, input, spec(Method::kZs, "doc/sent"), gw);
      c.expect(topk.value == full.value && topk.per_hypothesis_unit == full.per_hypothesis_unit,
               "topk k>=M == full-doc premise");

      const double lo = fn == ScoreFn::kEntail ? 0.0 : -1.0;
      for (const auto* s : {&zs, &hard, &scu, &topk, &full}) {
        c.expect(s->value >= lo && s->value <= 1.0, "output range");
      }
    }

    // fz(p_e - p_c) <= fz(p_e) for arbitrary distributions.
    const double e = u(rng), r = u(rng) * (1.0 - e);
    const NliDistribution d{e, r, 1.0 - e - r};
    c.expect(fz(d, ScoreFn::kEntailMinusContra) <= fz(d, ScoreFn::kEntail), "fz order");
  }
  report("identity suite", c, seconds_since(t0), 0, "1000 random documents x 2 fns");
}

void metrics_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> len(3, 200);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  for (int round = 0; round < 1000; ++round) {
    const std::size_t n = len(rng);
    std::vector<int> labels(n), pred(n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = coin(rng);
      pred[i] = coin(rng);
      scores[i] = round % 2 ? u(rng) : std::floor(u(rng) * 6) / 6;
    }
    labels[0] = 1;
    labels[1] = 0;
    c.near(balanced_accuracy(pred, labels), oracle::balanced_accuracy(pred, labels), 1e-9,
           "balanced accuracy");
    const auto tuned = tune_threshold(scores, labels);
    const auto best = oracle::tune(scores, labels);
    c.near(tuned.balanced_accuracy, best.ba, 1e-9, "tuned BA");
    c.near(tuned.threshold, best.threshold, 1e-9, "tuned threshold");
    for (double t : oracle::candidates(scores)) {
      c.expect(tuned.balanced_accuracy >=
                   oracle::balanced_accuracy(oracle::predict(scores, t), labels) - 1e-12,
               "tuned BA >= BA at every candidate");
    }

    std::vector<double> x(n), y(n);
    const double rho = u(rng) * 2 - 1;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = noise(rng);
      y[i] = rho * x[i] + 0.5 * noise(rng);
      if (round % 3 == 0) {
        x[i] = std::round(x[i]);
        y[i] = std::round(y[i]);
      }
    }
    try {
      const auto p = pearson(x, y);
      const double r = oracle::pearson_r(x, y);
      c.near(p.r, r, 1e-9, "pearson r");
      c.near(p.p, oracle::correlation_p(r, n), 1e-9, "pearson p");
      const auto s = spearman(x, y);
      const double rs = oracle::pearson_r(oracle::ranks(x), oracle::ranks(y));
      c.near(s.r, rs, 1e-9, "spearman r");
      c.near(s.p, oracle::correlation_p(rs, n), 1e-9, "spearman p");
    } catch (const UndefinedCorrelation&) {
      c.expect(oracle::sample_std(x) == 0.0 || oracle::sample_std(y) == 0.0,
               "undefined correlation only for constant input");
    }
  }

  const std::vector<double> a = {1, 2, 3}, b = {2, 4, 6}, d = {6, 4, 2}, e = {10, 20, 30};
  c.expect(pearson(a, b).r == 1.0, "pearson [1,2,3] vs [2,4,6] == 1");
  c.expect(pearson(a, d).r == -1.0, "pearson [1,2,3] vs [6,4,2] == -1");
  c.expect(spearman(a, e).r == 1.0, "spearman [1,2,3] vs [10,20,30] == 1");
  report("metrics suite", c, seconds_since(t0), 0,
         "1000 random inputs, n in [3, 200], tol 1e-9");
}

void segmentation_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  const std::string anzac =
      "Thousands attended the early morning service at Hyde Park Corner and up to 400 "
      "people took part in a parade before the wreath-laying at the Cenotaph.Anzac Day "
      "commemorates the first major battle involving Australian and New Zealand forces "
      "during World War One.A service was also held at Westminster Abbey.The national "
      "anthems of New Zealand and Australia were sung as the service ended.";
  c.expect(split_sentences(anzac).size() == 4, "Anzac passage yields 4 sentences");
  c.expect(sentence_texts("He went home. She stayed.") ==
               std::vector<std::string>{"He went home.", "She stayed."},
           "two-sentence case");
  c.expect(sentence_texts("She saw the Cenotaph.Anzac Day began.") ==
               std::vector<std::string>{"She saw the Cenotaph.", "Anzac Day began."},
           "no-space split");
  c.expect(sentence_texts("Really?!Yes. Fine!Go.").size() == 4, "no-space split after ?! and !");
  c.expect(sentence_texts("Dr. Who met J. Smith.Then left.").size() == 2,
           "abbreviations suppress, no-space split still fires");

  std::mt19937_64 rng(13);
  const std::vector<std::string> pieces = {"a", "Bc", " ", "  ", "\n", "\t", ".", "xyz",
                                           "Q.", "é", "!", "\n\n"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> length(0, 60), budget(1, 15);
  for (int i = 0; i < 1000; ++i) {
    std::string text;
    const int n = length(rng);
    for (int j = 0; j < n; ++j) text += pieces[pick(rng)];
    const int b = budget(rng);
    const std::string cut = truncate_to_token_budget(text, b);
    const auto all = whitespace_tokens(text);
    const auto kept = whitespace_tokens(cut);
    c.expect(kept.size() == std::min<std::size_t>(b, all.size()), "budget token count");
    c.expect(text.compare(0, cut.size(), cut) == 0, "budget output is a prefix");
    bool same = true;
    for (std::size_t j = 0; j < kept.size(); ++j) same = same && kept[j] == all[j];
    c.expect(same, "budget keeps the leading tokens");
  }
  bool threw = false;
  try {
    truncate_to_token_budget("a b", 0);
  } catch (const InvalidArgument&) {
    threw = true;
  }
  c.expect(threw, "budget 0 rejected");
  report("segmentation suite", c, seconds_since(t0), 0,
         "Anzac passage, no-space cases, 1000 random budget strings");
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void end_to_end_determinism(const std::filesystem::path& fixtures) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  std::string detail;
  try {
    const auto config = load_grid_config(fixtures / "grid.json");
    const std::string golden = read_file(fixtures / "golden_reports.json");
    c.expect(!golden.empty(), "golden reports present");

    std::size_t examples = 0;
    bool pos = false, neg = false;
    for (const auto& ds : config.datasets) {
      for (const auto& p : {ds.val, std::optional<std::filesystem::path>(ds.test)}) {
        if (!p) continue;
        for (const auto& e : ingest(*p).examples) {
          ++examples;
          pos = pos || (e.label && *e.label == 1);
          neg = neg || (e.label && *e.label == 0);
        }
      }
    }
    c.expect(examples >= 40 && pos && neg, "fixture has >= 40 examples and both labels");

    const auto cache_path =
        std::filesystem::temp_directory_path() / "nlifact_acceptance_cache.jsonl";
    std::filesystem::remove(cache_path);

    NliGateway first(std::make_shared<MockBackend>(), std::make_shared<ScoreCache>(cache_path));
    const auto run1 = reports_to_json(run_grid(config, first).reports);
    c.expect(run1 == golden, "first run matches golden byte-for-byte");
    c.expect(first.backend_invocations() > 0, "first run scores through the backend");

    // A fresh gateway over the same cache file, as a second process would see it.
    NliGateway second(std::make_shared<MockBackend>(), std::make_shared<ScoreCache>(cache_path));
    const auto run2 = reports_to_json(run_grid(config, second).reports);
    c.expect(run2 == golden, "second run matches golden byte-for-byte");
    c.expect(second.backend_invocations() == 0, "second run makes zero backend calls");
    std::filesystem::remove(cache_path);

    detail = std::to_string(examples) + " examples, " + std::to_string(golden.size()) +
             " golden bytes, backend calls " + std::to_string(first.backend_invocations()) +
             " then " + std::to_string(second.backend_invocations());
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  report("end-to-end determinism", c, seconds_since(t0), 30, detail);
}

void conv_trainability() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  // Consistent examples put their column mass in the upper half of [0, 1],
  // inconsistent ones in the lower half, so the histograms are separable.
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_real_distribution<double> high(0.55, 1.0), low(0.0, 0.45);
  std::vector<ConvExample> examples;
  for (int i = 0; i < 40; ++i) {
    const bool consistent = i % 2 == 0;
    const int m = size(rng), n = size(rng);
    std::vector<NliDistribution> cells;
    for (int j = 0; j < m * n; ++j) {
      const double v = consistent ? high(rng) : low(rng);
      cells.push_back({v, 1.0 - v, 0.0});
    }
    examples.push_back({ScoreMatrix::from_cells(unit_labels("d", m), unit_labels("s", n), cells),
                        consistent});
  }
  const ConvTrainingOptions options;  // fixed budget and seed
  const auto fit = fit_conv(examples, ScoreFn::kEntail, kDefaultConvBins, options);

  std::vector<int> pred, labels;
  for (const auto& e : examples) {
    pred.push_back(conv_aggregate(e.matrix, ScoreFn::kEntail, fit.params).value >= 0.5 ? 1 : 0);
    labels.push_back(e.consistent ? 1 : 0);
  }
  const double ba = balanced_accuracy(pred, labels);
  c.expect(ba == 1.0, "training balanced accuracy " + std::to_string(ba));
  for (std::size_t i = 1; i < fit.loss_history.size(); ++i) {
    c.expect(fit.loss_history[i] <= fit.loss_history[i - 1],
             "loss increased at checkpoint " + std::to_string(i));
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "%zu examples, %d iterations, loss %.4f -> %.6f over %zu checkpoints",
                examples.size(), options.iterations, fit.loss_history.front(),
                fit.loss_history.back(), fit.loss_history.size());
  report("conv trainability", c, seconds_since(t0), 0, detail);
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path fixtures = argc > 1 ? argv[1] : NLIFACT_FIXTURE_DIR;
  const std::vector<std::pair<const char*, std::function<void()>>> criteria = {
      {"aggregation oracle suite", aggregation_oracle_suite},
      {"identity suite", identity_suite},
      {"metrics suite", metrics_suite},
      {"segmentation suite", segmentation_suite},
      {"end-to-end determinism", [&] { end_to_end_determinism(fixtures); }},
      {"conv trainability", conv_trainability},
  };
  for (const auto& [name, run] : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      ++g_failed;
      std::printf("FAIL  %-32s exception: %s\n", name, e.what());
    }
  }
  std::printf("%s: %d of %zu criteria failed\n", g_failed ? "FAILED" : "OK", g_failed,
              criteria.size());
  return g_failed == 0 ? 0 : 1;
}
