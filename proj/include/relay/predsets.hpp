#ifndef RELAY_PREDSETS_HPP
#define RELAY_PREDSETS_HPP

#include <span>
#include <vector>

#include "relay/domain.hpp"
#include "relay/rng.hpp"

namespace relay {

// Point mass for the weighted empirical quantile; +infinity is a legal value.
struct WeightedPoint {
  double value = 0.0;
  double weight = 0.0;
};

struct KernelSpec {
  enum class Kind { gaussian, constant };
  Kind kind = Kind::gaussian;
  double bandwidth = 1.0;  // > 0, gaussian only
};

// Smallest-cardinality set with mass >= 1-alpha, built greedily by descending
// probability; ties broken by ascending label index.
PredictionSet hms(const Categorical& dist, double alpha);

// Negative log-loss nonconformity score; zero-probability labels score +inf.
double nll_score(const Categorical& edge_dist, Label label);

// Smallest value whose cumulative normalized weight reaches `level`.
// Never interpolates: the result is always one of the input values.
double weighted_quantile(std::vector<WeightedPoint> points, double level);

// Split-conformal threshold: quantile at level 1-alpha of the calibration
// scores plus a point mass at +inf, every atom carrying weight 1/(n+1).
double cp_threshold(const std::vector<double>& cal_scores, double alpha);

// All labels whose score does not exceed the threshold.
PredictionSet threshold_set(const Categorical& edge_dist, double threshold);

double kernel_eval(const KernelSpec& spec, std::span<const double> x1,
                   std::span<const double> x2);

// Localized conformal threshold: draws one perturbation of the test features
// from the kernel density, reweights calibration scores (and the +inf mass)
// by kernel proximity to the perturbed point, then takes the 1-alpha quantile.
// With a constant kernel this is identical to cp_threshold, bit for bit.
double lcp_threshold(std::span<const double> test_features,
                     const std::vector<std::span<const double>>& cal_features,
                     const std::vector<double>& cal_scores, double alpha,
                     const KernelSpec& kernel, Rng& rng);

}  // namespace relay

#endif  // RELAY_PREDSETS_HPP
