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

#include "nlifact/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "nlifact/errors.hpp"

namespace nlifact {

namespace {

struct Counts {
  std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
};

double ba_from_counts(const Counts& c) {
  const double tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  const double tnr = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  return 0.5 * (tpr + tnr);
}

void check_labels(std::span<const int> labels) {
  if (labels.empty()) throw InvalidArgument("no labels");
  std::size_t positives = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw InvalidArgument("labels must be 0 or 1");
    positives += static_cast<std::size_t>(l);
  }
  if (positives == 0 || positives == labels.size()) {
    throw InvalidArgument("balanced accuracy needs both classes in the labels");
  }
}

void check_correlation_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("correlation inputs differ in length");
  if (x.size() < 3) throw InvalidArgument("correlation needs at least 3 points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InvalidArgument("correlation inputs must be finite");
    }
  }
}

}  // namespace

double balanced_accuracy(std::span<const int> predictions,
                         std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw InvalidArgument("predictions and labels differ in length");
  }
  check_labels(labels);
  Counts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int p = predictions[i];
    if (p != 0 && p != 1) throw InvalidArgument("predictions must be 0 or 1");
    if (labels[i] == 1) {
      (p == 1 ? c.tp : c.fn) += 1;
    } else {
      (p == 0 ? c.tn : c.fp) += 1;
    }
  }
  return ba_from_counts(c);
}

std::vector<int> predict(std::span<const double> scores, double threshold) {
  std::vector<int> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(s >= threshold ? 1 : 0);
  return out;
}

std::vector<double> threshold_candidates(std::span<const double> scores) {
  if (scores.empty()) throw InvalidArgument("no scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const double eps = 1e-6 * (sorted.back() - sorted.front() + 1.0);
  std::vector<double> out;
  out.reserve(sorted.size() + 1);
  out.push_back(sorted.front() - eps);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    out.push_back((sorted[i - 1] + sorted[i]) / 2.0);
  }
  out.push_back(sorted.back() + eps);
  return out;
}

ThresholdChoice tune_threshold(std::span<const double> scores,
                               std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw InvalidArgument("scores and labels differ in length");
  }
  check_labels(labels);
  for (double s : scores) {
    if (!std::isfinite(s)) throw InvalidArgument("scores must be finite");
  }

  // Sort scores once; for each candidate, everything from lower_bound onward
  // is predicted positive.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> sorted(scores.size());
  std::vector<std::size_t> positives_before(scores.size() + 1, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted[i] = scores[order[i]];
    positives_before[i + 1] =
        positives_before[i] + static_cast<std::size_t>(labels[order[i]]);
  }
  const std::size_t total_pos = positives_before.back();
  const std::size_t total_neg = scores.size() - total_pos;

  ThresholdChoice best{0.0, -1.0};
  for (double t : threshold_candidates(scores)) {
    const auto cut = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
    Counts c;
    c.fn = positives_before[cut];
    c.tp = total_pos - c.fn;
    c.tn = cut - positives_before[cut];
    c.fp = total_neg - c.tn;
    const double ba = ba_from_counts(c);
    if (ba > best.balanced_accuracy) best = {t, ba};
  }
  return best;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share ranks i+1..j+1.
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

double correlation_p_value(double r, std::size_t n) {
  if (n < 3) throw InvalidArgument("p-value needs at least 3 points");
  if (std::abs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df / (1.0 - r * r));
  const boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return std::clamp(p, 0.0, 1.0);
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  check_correlation_inputs(x, y);
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) {
    throw UndefinedCorrelation("correlation undefined for a constant input");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelation("correlation undefined for a constant input");
  }
  Correlation c;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  c.p = correlation_p_value(c.r, x.size());
  return c;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  check_correlation_inputs(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

}  // namespace nlifact
