#ifndef RELAY_DOMAIN_HPP
#define RELAY_DOMAIN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relay/error.hpp"

namespace relay {

using Label = std::int32_t;

// Mass-sum tolerances: within kSumTolerance a vector is accepted as-is,
// within kRenormTolerance it is renormalized, beyond that it is rejected.
inline constexpr double kSumTolerance = 1e-9;
inline constexpr double kRenormTolerance = 1e-6;

struct LabelSpace {
  int num_labels = 0;  // K >= 2
};

void validate_label_space(const LabelSpace& space);

// Probability vector over a finite label space.
struct Categorical {
  std::vector<double> probs;

  int size() const { return static_cast<int>(probs.size()); }
  double operator[](Label y) const { return probs[static_cast<std::size_t>(y)]; }
};

// Validates and, inside the renormalization band, rescales to unit mass.
// `renormalized`, when non-null, is set to whether rescaling happened.
Categorical make_categorical(std::vector<double> probs, bool* renormalized = nullptr);

void validate_categorical(const Categorical& dist);

struct Example {
  std::string id;
  std::vector<double> features;  // may be empty; required only by LCP
  Categorical cloud_dist;
  Categorical edge_dist;
  std::optional<Label> label;
};

void validate_example(const Example& example);

struct RiskSpec {
  double alpha = 0.2;  // miscoverage rate, in [0, 1)
  double delta = 0.2;  // tolerated violation level, in (0, 1)
};

void validate_risk(const RiskSpec& spec);

// Sorted, duplicate-free subset of the label space.
class PredictionSet {
 public:
  PredictionSet() = default;
  explicit PredictionSet(std::vector<Label> members);
  PredictionSet(std::initializer_list<Label> members)
      : PredictionSet(std::vector<Label>(members)) {}

  const std::vector<Label>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Label y) const;

  bool operator==(const PredictionSet& other) const = default;

 private:
  std::vector<Label> members_;
};

// Index lists into one example pool; pairwise disjoint.
struct DataPartition {
  std::vector<std::size_t> cal;
  std::vector<std::size_t> tr;
  std::vector<std::size_t> val;
  std::vector<std::size_t> te;
};

void validate_partition(const DataPartition& partition, std::size_t pool_size);

}  // namespace relay

#endif  // RELAY_DOMAIN_HPP
