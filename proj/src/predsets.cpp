#include "relay/predsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace relay {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PredictionSet hms(const Categorical& dist, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha=" + std::to_string(alpha));
  }
  const int k = dist.size();
  std::vector<Label> members;
  if (alpha == 0.0) {
    // Mass >= 1 means the full support; summing floats here would make the
    // boundary depend on accumulation order.
    for (Label y = 0; y < k; ++y) {
      if (dist[y] > 0.0) members.push_back(y);
    }
    return PredictionSet(std::move(members));
  }
  std::vector<Label> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Label a, Label b) {
    return dist[a] > dist[b];
  });
  const double target = 1.0 - alpha;
  double mass = 0.0;
  for (Label y : order) {
    members.push_back(y);
    mass += dist[y];
    if (mass >= target) break;
  }
  return PredictionSet(std::move(members));
}

double nll_score(const Categorical& edge_dist, Label label) {
  if (label < 0 || label >= edge_dist.size()) {
    throw Error(ErrorCode::LabelOutOfRange,
                "label " + std::to_string(label) + " with K=" +
                    std::to_string(edge_dist.size()));
  }
  const double p = edge_dist[label];
  if (p <= 0.0) return kInf;
  return -std::log(p);
}

double weighted_quantile(std::vector<WeightedPoint> points, double level) {
  double total = 0.0;
  for (const WeightedPoint& pt : points) {
    if (std::isnan(pt.value) || !(pt.weight >= 0.0)) {
      throw Error(ErrorCode::Internal, "NaN value or negative weight");
    }
    total += pt.weight;
  }
  if (points.empty() || total <= 0.0) {
    throw Error(ErrorCode::EmptyInput, "no weighted points");
  }
  std::sort(points.begin(), points.end(),
            [](const WeightedPoint& a, const WeightedPoint& b) {
              return a.value < b.value;
            });
  double cum = 0.0;
  for (const WeightedPoint& pt : points) {
    cum += pt.weight;
    if (cum / total >= level) return pt.value;
  }
  return points.back().value;
}

double cp_threshold(const std::vector<double>& cal_scores, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha=" + std::to_string(alpha));
  }
  // Unit weights: weighted_quantile normalizes them to the 1/(n+1) atoms,
  // and the constant-kernel localized path reproduces them bit for bit.
  std::vector<WeightedPoint> points;
  points.reserve(cal_scores.size() + 1);
  for (double s : cal_scores) points.push_back({s, 1.0});
  points.push_back({kInf, 1.0});
  return weighted_quantile(std::move(points), 1.0 - alpha);
}

PredictionSet threshold_set(const Categorical& edge_dist, double threshold) {
  std::vector<Label> members;
  for (Label y = 0; y < edge_dist.size(); ++y) {
    if (nll_score(edge_dist, y) <= threshold) members.push_back(y);
  }
  return PredictionSet(std::move(members));
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x1,
                   std::span<const double> x2) {
  if (x1.size() != x2.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "feature dims " + std::to_string(x1.size()) + " vs " +
                    std::to_string(x2.size()));
  }
  if (spec.kind == KernelSpec::Kind::constant) return 1.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double d = x1[i] - x2[i];
    sq += d * d;
  }
  return std::exp(-sq / (2.0 * spec.bandwidth * spec.bandwidth));
}

double lcp_threshold(std::span<const double> test_features,
                     const std::vector<std::span<const double>>& cal_features,
                     const std::vector<double>& cal_scores, double alpha,
                     const KernelSpec& kernel, Rng& rng) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha=" + std::to_string(alpha));
  }
  if (cal_features.size() != cal_scores.size()) {
    throw Error(ErrorCode::LengthMismatch, "calibration features vs scores");
  }
  if (kernel.kind == KernelSpec::Kind::gaussian) {
    if (!(kernel.bandwidth > 0.0)) {
      throw Error(ErrorCode::InvalidConfig,
                  "bandwidth=" + std::to_string(kernel.bandwidth));
    }
    if (test_features.empty()) {
      throw Error(ErrorCode::EmptyFeatureSpace,
                  "gaussian kernel requires features");
    }
  }

  // Perturbation drawn from the density proportional to H(x, .): for the
  // gaussian kernel that density is exactly N(x, h^2 I).
  std::vector<double> perturbed(test_features.begin(), test_features.end());
  if (kernel.kind == KernelSpec::Kind::gaussian) {
    for (double& coord : perturbed) coord += kernel.bandwidth * rng.normal();
  }

  std::vector<WeightedPoint> points;
  points.reserve(cal_scores.size() + 1);
  for (std::size_t i = 0; i < cal_scores.size(); ++i) {
    points.push_back({cal_scores[i], kernel_eval(kernel, cal_features[i], perturbed)});
  }
  points.push_back({std::numeric_limits<double>::infinity(),
                    kernel_eval(kernel, test_features, perturbed)});
  return weighted_quantile(std::move(points), 1.0 - alpha);
}

}  // namespace relay
