#include "relay/alignment.hpp"

#include <algorithm>
#include <cmath>

namespace relay {

namespace {

double coverage_sum(const Categorical& dist, const PredictionSet& set) {
  double sum = 0.0;
  for (Label y : set.members()) {
    if (y < 0 || y >= dist.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "set member " + std::to_string(y) + " with K=" +
                      std::to_string(dist.size()));
    }
    sum += dist[y];
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

double true_alignment(const Categorical& cloud_dist, const PredictionSet& edge_set) {
  return coverage_sum(cloud_dist, edge_set);
}

double edge_coverage_feature(const Categorical& edge_dist, const PredictionSet& edge_set) {
  return coverage_sum(edge_dist, edge_set);
}

AlignmentPredictor AlignmentPredictor::fit(const std::vector<AlignmentSample>& train) {
  if (train.empty()) {
    throw Error(ErrorCode::EmptyTrainingSet, "no alignment samples");
  }
  std::vector<AlignmentSample> sorted = train;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const AlignmentSample& a, const AlignmentSample& b) {
                     return a.feature < b.feature;
                   });

  // Collapse duplicate features to their mean target, then run
  // pool-adjacent-violators over the distinct features.
  struct Block {
    double feature;
    double sum;
    double count;
  };
  std::vector<Block> blocks;
  for (const AlignmentSample& s : sorted) {
    if (!blocks.empty() && blocks.back().feature == s.feature) {
      blocks.back().sum += s.target;
      blocks.back().count += 1.0;
    } else {
      blocks.push_back({s.feature, s.target, 1.0});
    }
  }

  struct Pool {
    double sum;
    double count;
    std::size_t last;  // index of the last block merged into this pool
  };
  std::vector<Pool> pools;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    pools.push_back({blocks[i].sum, blocks[i].count, i});
    while (pools.size() > 1) {
      const Pool& cur = pools[pools.size() - 1];
      const Pool& prev = pools[pools.size() - 2];
      if (prev.sum / prev.count <= cur.sum / cur.count) break;
      Pool merged{prev.sum + cur.sum, prev.count + cur.count, cur.last};
      pools.pop_back();
      pools.back() = merged;
    }
  }

  AlignmentPredictor out;
  std::size_t first = 0;
  for (const Pool& pool : pools) {
    const double value = std::clamp(pool.sum / pool.count, 0.0, 1.0);
    for (std::size_t i = first; i <= pool.last; ++i) {
      out.knots_.push_back({blocks[i].feature, value});
    }
    first = pool.last + 1;
  }
  return out;
}

AlignmentPredictor AlignmentPredictor::constant(double value) {
  AlignmentPredictor out;
  out.knots_.push_back({0.0, std::clamp(value, 0.0, 1.0)});
  return out;
}

double AlignmentPredictor::predict(double feature) const {
  if (!(feature >= 0.0 && feature <= 1.0)) {
    throw Error(ErrorCode::FeatureOutOfRange, "feature=" + std::to_string(feature));
  }
  if (knots_.empty()) {
    throw Error(ErrorCode::Internal, "predictor has no knots");
  }
  // First knot whose feature exceeds the query; step value is the one before.
  auto it = std::upper_bound(knots_.begin(), knots_.end(), feature,
                             [](double f, const Knot& k) { return f < k.feature; });
  if (it == knots_.begin()) return knots_.front().value;
  return (it - 1)->value;
}

nlohmann::json AlignmentPredictor::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Knot& k : knots_) {
    arr.push_back({{"feature", k.feature}, {"value", k.value}});
  }
  return {{"knots", arr}};
}

AlignmentPredictor AlignmentPredictor::from_json(const nlohmann::json& j) {
  AlignmentPredictor out;
  if (!j.contains("knots") || !j["knots"].is_array()) {
    throw Error(ErrorCode::ParseError, "predictor json missing knots array");
  }
  for (const auto& item : j["knots"]) {
    out.knots_.push_back({item.at("feature").get<double>(),
                          item.at("value").get<double>()});
  }
  if (out.knots_.empty()) {
    throw Error(ErrorCode::ParseError, "predictor json has no knots");
  }
  for (std::size_t i = 1; i < out.knots_.size(); ++i) {
    if (out.knots_[i].feature < out.knots_[i - 1].feature ||
        out.knots_[i].value < out.knots_[i - 1].value) {
      throw Error(ErrorCode::ParseError, "predictor knots not monotone");
    }
  }
  return out;
}

}  // namespace relay
