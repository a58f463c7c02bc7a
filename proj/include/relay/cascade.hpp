#ifndef RELAY_CASCADE_HPP
#define RELAY_CASCADE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relay/domain.hpp"

namespace relay {

enum class Route { edge, cloud };

// Confidence-based deferral: keep at the edge iff top-1 edge probability
// reaches gamma.
Route cbd_route(const Categorical& edge_dist, double gamma);

struct PoolItem {
  enum class Origin { validation, test };

  std::string example_id;
  Origin origin = Origin::test;
  double predicted_score = 0.0;
  std::optional<double> true_score;  // present iff origin == validation
  double tiebreak = 0.0;             // uniform jitter, origin-blind
};

// Ascending predicted score; equal scores fall back to the jitter so that
// neither origin is systematically screened first.
std::vector<PoolItem> screen_order(std::vector<PoolItem> pool);

// Estimated false discovery proportion of the unscreened test inputs, from
// the unscreened validation misses, with the test/validation size correction.
// Zero once no test input remains unscreened.
double fdp_estimate(std::size_t unscreened_val_miss, std::size_t unscreened_te,
                    std::size_t n_te, std::size_t n_val);

struct ValEntry {
  std::string id;
  double true_score = 0.0;
  double predicted_score = 0.0;
};

struct TestEntry {
  std::string id;
  double predicted_score = 0.0;
};

struct SelectionResult {
  std::vector<std::string> selected_ids;  // test ids kept at the edge, sorted
  std::size_t stop_step = 0;              // number of screened items
  std::vector<double> fdp_trajectory;     // estimate at each step 0..stop_step
  double threshold_score = 0.0;           // predicted score of the last screened
                                          // item; -inf when nothing was screened
  std::vector<PoolItem> order;            // full screening order, diagnostics
};

// Sequential screening: orders the merged validation/test pool by predicted
// alignment, screens items until the estimated FDP of the remaining test
// inputs drops to delta, and returns the unscreened test inputs.
SelectionResult cab_select(const std::vector<ValEntry>& val,
                           const std::vector<TestEntry>& te,
                           const RiskSpec& spec, std::uint64_t seed);

// Final routed set: the edge set when selected, the cloud HMS otherwise.
PredictionSet assemble_prediction(const Example& example, bool selected,
                                  const PredictionSet& edge_set, double alpha);

}  // namespace relay

#endif  // RELAY_CASCADE_HPP
