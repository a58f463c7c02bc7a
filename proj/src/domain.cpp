#include "relay/domain.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace relay {

void validate_label_space(const LabelSpace& space) {
  if (space.num_labels < 2) {
    throw Error(ErrorCode::DimensionMismatch,
                "label space needs K >= 2, got " +
                    std::to_string(space.num_labels));
  }
}

Categorical make_categorical(std::vector<double> probs, bool* renormalized) {
  if (renormalized) *renormalized = false;
  if (probs.empty()) {
    throw Error(ErrorCode::NotADistribution, "empty probability vector");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) {  // also rejects NaN
      throw Error(ErrorCode::NotADistribution, "negative or NaN entry");
    }
    sum += p;
  }
  const double gap = std::abs(sum - 1.0);
  if (gap > kRenormTolerance) {
    throw Error(ErrorCode::NotADistribution,
                "mass sums to " + std::to_string(sum));
  }
  if (gap > kSumTolerance) {
    for (double& p : probs) p /= sum;
    if (renormalized) *renormalized = true;
  }
  return Categorical{std::move(probs)};
}

void validate_categorical(const Categorical& dist) {
  if (dist.probs.empty()) {
    throw Error(ErrorCode::NotADistribution, "empty probability vector");
  }
  double sum = 0.0;
  for (double p : dist.probs) {
    if (!(p >= 0.0)) {
      throw Error(ErrorCode::NotADistribution, "negative or NaN entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw Error(ErrorCode::NotADistribution,
                "mass sums to " + std::to_string(sum));
  }
}

void validate_example(const Example& example) {
  validate_categorical(example.cloud_dist);
  validate_categorical(example.edge_dist);
  if (example.cloud_dist.size() != example.edge_dist.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cloud K=" + std::to_string(example.cloud_dist.size()) +
                    " vs edge K=" + std::to_string(example.edge_dist.size()));
  }
  if (example.label) {
    const Label y = *example.label;
    if (y < 0 || y >= example.cloud_dist.size()) {
      throw Error(ErrorCode::LabelOutOfRange,
                  "label " + std::to_string(y) + " with K=" +
                      std::to_string(example.cloud_dist.size()));
    }
  }
}

void validate_risk(const RiskSpec& spec) {
  if (!(spec.alpha >= 0.0 && spec.alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha=" + std::to_string(spec.alpha));
  }
  if (!(spec.delta > 0.0 && spec.delta < 1.0)) {
    throw Error(ErrorCode::InvalidDelta, "delta=" + std::to_string(spec.delta));
  }
}

PredictionSet::PredictionSet(std::vector<Label> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty() && members_.front() < 0) {
    throw Error(ErrorCode::LabelOutOfRange, "negative label index");
  }
}

bool PredictionSet::contains(Label y) const {
  return std::binary_search(members_.begin(), members_.end(), y);
}

void validate_partition(const DataPartition& partition, std::size_t pool_size) {
  std::unordered_set<std::size_t> seen;
  auto check = [&](const std::vector<std::size_t>& part, const char* name) {
    for (std::size_t idx : part) {
      if (idx >= pool_size) {
        throw Error(ErrorCode::PartitionOverlap,
                    std::string(name) + " index " + std::to_string(idx) +
                        " outside pool of " + std::to_string(pool_size));
      }
      if (!seen.insert(idx).second) {
        throw Error(ErrorCode::PartitionOverlap,
                    std::string(name) + " reuses pool index " + std::to_string(idx));
      }
    }
  };
  check(partition.cal, "cal");
  check(partition.tr, "tr");
  check(partition.val, "val");
  check(partition.te, "te");
}

}  // namespace relay
