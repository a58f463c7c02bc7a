#ifndef RELAY_METRICS_HPP
#define RELAY_METRICS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "relay/domain.hpp"

namespace relay {

struct TrialMetrics {
  double satisfaction_rate = 0.0;
  double deferral_rate = 0.0;
  double normalized_inefficiency = 0.0;
  double fdp = 0.0;
  std::optional<double> marginal_coverage;
  std::size_t n_selected = 0;
  bool empty_selection = false;
};

// Fraction of selected inputs whose true alignment misses 1-alpha; zero for
// an empty selection.
double fdp(const std::vector<double>& selected_true_alignments, double alpha);

// Complement of fdp on a non-empty selection; zero for an empty one.
double satisfaction_rate(const std::vector<double>& selected_true_alignments,
                         double alpha);

double deferral_rate(std::size_t n_selected, std::size_t n_test);

// Mean ratio of final set size to the cloud oracle set size.
double normalized_inefficiency(const std::vector<PredictionSet>& final_sets,
                               const std::vector<PredictionSet>& oracle_sets);

double marginal_coverage(const std::vector<PredictionSet>& sets,
                         const std::vector<Label>& labels);

struct ReliabilityDiagram {
  struct Bin {
    double confidence_mean = 0.0;
    double accuracy = 0.0;
    std::size_t count = 0;
  };
  std::vector<double> bin_edges;  // n_bins + 1 edges over [0, 1]
  std::vector<Bin> bins;
};

// Equal-width bins with right-closed edges; confidence 0 lands in bin 0.
ReliabilityDiagram reliability_diagram(const std::vector<double>& confidences,
                                       const std::vector<bool>& correct,
                                       std::size_t n_bins);

// Screening-order entry for the martingale diagnostic; test items must carry
// their held-out true alignment here.
struct MartingaleItem {
  bool is_test = false;
  std::optional<double> true_score;
};

// M value at each step 0..n: unscreened-test misses over one plus
// unscreened-validation misses.
std::vector<double> martingale_trajectory(const std::vector<MartingaleItem>& order,
                                          double alpha);

}  // namespace relay

#endif  // RELAY_METRICS_HPP
