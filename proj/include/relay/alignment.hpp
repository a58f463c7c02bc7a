#ifndef RELAY_ALIGNMENT_HPP
#define RELAY_ALIGNMENT_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "relay/domain.hpp"

namespace relay {

// Coverage probability of the edge set measured under the cloud distribution.
double true_alignment(const Categorical& cloud_dist, const PredictionSet& edge_set);

// Coverage probability of the edge set as estimated by the edge model itself;
// the single input feature of the alignment predictor.
double edge_coverage_feature(const Categorical& edge_dist, const PredictionSet& edge_set);

struct AlignmentSample {
  std::string example_id;
  double feature = 0.0;  // in [0, 1]
  double target = 0.0;   // in [0, 1]
};

// Monotone nondecreasing step function fitted by pool-adjacent-violators
// least squares. Prediction takes the value of the nearest knot at or below
// the query; queries below the first knot take the first knot's value.
class AlignmentPredictor {
 public:
  struct Knot {
    double feature = 0.0;
    double value = 0.0;
  };

  static AlignmentPredictor fit(const std::vector<AlignmentSample>& train);
  static AlignmentPredictor constant(double value);

  double predict(double feature) const;

  const std::vector<Knot>& knots() const { return knots_; }

  nlohmann::json to_json() const;
  static AlignmentPredictor from_json(const nlohmann::json& j);

 private:
  std::vector<Knot> knots_;
};

}  // namespace relay

#endif  // RELAY_ALIGNMENT_HPP
