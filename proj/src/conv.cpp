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

#include "nlifact/conv.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "nlifact/errors.hpp"

namespace nlifact {

namespace {

using json = nlohmann::json;

constexpr double kProbabilityFloor = 1e-12;

double clamp_probability(double s) {
  return std::clamp(s, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

// Uniform in [-scale, scale] from the top 53 bits; identical on every
// standard library, unlike std::uniform_real_distribution.
double uniform_symmetric(std::mt19937_64& rng, double scale) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return (2.0 * u - 1.0) * scale;
}

struct Gradient {
  Eigen::VectorXd weights;
  double bias = 0.0;
};

Gradient loss_gradient(const std::vector<Eigen::MatrixXd>& features,
                       const std::vector<bool>& labels,
                       const ConvParams& params) {
  Gradient g{Eigen::VectorXd::Zero(params.bins), 0.0};
  const double inv_examples = 1.0 / static_cast<double>(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const Eigen::MatrixXd& h = features[i];
    const Eigen::VectorXd z =
        (h.transpose() * params.weights).array() + params.bias;
    const Eigen::ArrayXd sig = z.unaryExpr([](double x) { return logistic(x); }).array();
    const Eigen::VectorXd slope = (sig * (1.0 - sig)).matrix();
    const double units = static_cast<double>(h.cols());
    const double s = clamp_probability(sig.mean());
    const double y = labels[i] ? 1.0 : 0.0;
    const double dloss_ds = inv_examples * (s - y) / (s * (1.0 - s));
    g.weights += dloss_ds * (h * slope) / units;
    g.bias += dloss_ds * slope.sum() / units;
  }
  return g;
}

}  // namespace

ConvParams ConvParams::zeros(int bins) {
  if (bins < 2) throw InvalidArgument("conv needs at least 2 bins");
  ConvParams p;
  p.bins = bins;
  p.weights = Eigen::VectorXd::Zero(bins);
  p.bias = 0.0;
  return p;
}

void ConvParams::validate() const {
  if (bins < 2) throw InvalidArgument("conv needs at least 2 bins");
  if (weights.size() != bins) {
    throw InvalidArgument("conv weights have " + std::to_string(weights.size()) +
                          " entries for " + std::to_string(bins) + " bins");
  }
}

std::string ConvParams::to_json() const {
  json j = json::object();
  j["bins"] = bins;
  j["weights"] = std::vector<double>(weights.data(), weights.data() + weights.size());
  j["bias"] = bias;
  return j.dump();
}

ConvParams ConvParams::from_json(const std::string& text) {
  const json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || !j.contains("bins") ||
      !j.contains("weights") || !j.contains("bias") ||
      !j["bins"].is_number_integer() || !j["weights"].is_array() ||
      !j["bias"].is_number()) {
    throw InvalidArgument("conv params must be {\"bins\": int, \"weights\": [...], \"bias\": float}");
  }
  ConvParams p;
  p.bins = j["bins"].get<int>();
  const auto w = j["weights"].get<std::vector<double>>();
  p.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  p.bias = j["bias"].get<double>();
  p.validate();
  return p;
}

void ConvParams::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write conv params: " + path.string());
  out << to_json() << '\n';
}

ConvParams ConvParams::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read conv params: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

Eigen::MatrixXd conv_features(const ScoreMatrix& matrix, ScoreFn fn, int bins) {
  if (bins < 2) throw InvalidArgument("conv needs at least 2 bins");
  const Eigen::MatrixXd values =
      fz_matrix(matrix, fn).unaryExpr([fn](double v) { return to_unit_interval(v, fn); });
  return column_histograms(values, bins);
}

double conv_score(const Eigen::MatrixXd& features, const ConvParams& params) {
  const Eigen::VectorXd z =
      (features.transpose() * params.weights).array() + params.bias;
  return z.unaryExpr([](double x) { return logistic(x); }).mean();
}

FactualityScore conv_aggregate(const ScoreMatrix& matrix, ScoreFn fn,
                               const ConvParams& params) {
  params.validate();
  const Eigen::MatrixXd h = conv_features(matrix, fn, params.bins);
  const Eigen::VectorXd units =
      ((h.transpose() * params.weights).array() + params.bias)
          .matrix()
          .unaryExpr([](double x) { return logistic(x); });
  FactualityScore out;
  out.value = soft_aggregate(units);
  out.per_hypothesis_unit = to_std_vector(units);
  return out;
}

double conv_loss(const std::vector<Eigen::MatrixXd>& features,
                 const std::vector<bool>& labels, const ConvParams& params) {
  double total = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const double s = clamp_probability(conv_score(features[i], params));
    total -= labels[i] ? std::log(s) : std::log(1.0 - s);
  }
  return total / static_cast<double>(features.size());
}

ConvTrainingResult fit_conv(const std::vector<Eigen::MatrixXd>& features,
                            const std::vector<bool>& labels, int bins,
                            const ConvTrainingOptions& options) {
  if (features.size() != labels.size()) {
    throw InvalidArgument("conv training: features and labels differ in length");
  }
  if (features.size() < 2) {
    throw InvalidArgument("conv training needs at least 2 examples");
  }
  const auto positives = std::count(labels.begin(), labels.end(), true);
  if (positives == 0 || positives == static_cast<long>(labels.size())) {
    throw InvalidArgument("conv training needs both labels present");
  }
  for (const auto& h : features) {
    if (h.rows() != bins) {
      throw InvalidArgument("conv training: feature rows do not match bins");
    }
  }

  ConvTrainingResult result;
  ConvParams& params = result.params;
  params = ConvParams::zeros(bins);
  std::mt19937_64 rng(options.seed);
  for (Eigen::Index b = 0; b < bins; ++b) {
    params.weights(b) = uniform_symmetric(rng, options.init_scale);
  }
  params.bias = uniform_symmetric(rng, options.init_scale);

  double loss = conv_loss(features, labels, params);
  result.loss_history.push_back(loss);
  double step = options.max_step;
  int it = 0;
  for (; it < options.iterations; ++it) {
    const Gradient g = loss_gradient(features, labels, params);
    bool moved = false;
    while (step > 1e-12) {
      ConvParams candidate = params;
      candidate.weights -= step * g.weights;
      candidate.bias -= step * g.bias;
      const double candidate_loss = conv_loss(features, labels, candidate);
      if (candidate_loss < loss) {
        params = std::move(candidate);
        loss = candidate_loss;
        step = std::min(2.0 * step, options.max_step);
        moved = true;
        break;
      }
      step /= 2.0;
    }
    if (!moved) break;  // no descent direction left at machine precision
    if (options.checkpoint_every > 0 && (it + 1) % options.checkpoint_every == 0) {
      result.loss_history.push_back(loss);
    }
  }
  if (options.checkpoint_every <= 0 || it % options.checkpoint_every != 0 || it == 0) {
    result.loss_history.push_back(loss);
  }
  return result;
}

ConvTrainingResult fit_conv(const std::vector<ConvExample>& examples,
                            ScoreFn fn, int bins,
                            const ConvTrainingOptions& options) {
  std::vector<Eigen::MatrixXd> features;
  std::vector<bool> labels;
  features.reserve(examples.size());
  for (const auto& e : examples) {
    features.push_back(conv_features(e.matrix, fn, bins));
    labels.push_back(e.consistent);
  }
  return fit_conv(features, labels, bins, options);
}

ConvParams train_conv(const std::vector<ConvExample>& examples, ScoreFn fn,
                      int bins, const ConvTrainingOptions& options) {
  return fit_conv(examples, fn, bins, options).params;
}

}  // namespace nlifact
