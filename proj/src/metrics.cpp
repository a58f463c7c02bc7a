#include "relay/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace relay {

double fdp(const std::vector<double>& selected_true_alignments, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha=" + std::to_string(alpha));
  }
  if (selected_true_alignments.empty()) return 0.0;
  const double target = 1.0 - alpha;
  std::size_t miss = 0;
  for (double c : selected_true_alignments) {
    if (c < target) ++miss;
  }
  return static_cast<double>(miss) /
         static_cast<double>(selected_true_alignments.size());
}

double satisfaction_rate(const std::vector<double>& selected_true_alignments,
                         double alpha) {
  if (selected_true_alignments.empty()) return 0.0;
  return 1.0 - fdp(selected_true_alignments, alpha);
}

double deferral_rate(std::size_t n_selected, std::size_t n_test) {
  if (n_test == 0 || n_selected > n_test) {
    throw Error(ErrorCode::Internal, "deferral_rate counts out of range");
  }
  return 1.0 - static_cast<double>(n_selected) / static_cast<double>(n_test);
}

double normalized_inefficiency(const std::vector<PredictionSet>& final_sets,
                               const std::vector<PredictionSet>& oracle_sets) {
  if (final_sets.size() != oracle_sets.size()) {
    throw Error(ErrorCode::LengthMismatch, "final vs oracle set lists");
  }
  if (final_sets.empty()) {
    throw Error(ErrorCode::LengthMismatch, "no prediction sets");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < final_sets.size(); ++i) {
    if (oracle_sets[i].empty()) {
      throw Error(ErrorCode::EmptyOracleSet, "oracle set " + std::to_string(i));
    }
    sum += static_cast<double>(final_sets[i].size()) /
           static_cast<double>(oracle_sets[i].size());
  }
  return sum / static_cast<double>(final_sets.size());
}

double marginal_coverage(const std::vector<PredictionSet>& sets,
                         const std::vector<Label>& labels) {
  if (sets.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "sets vs labels");
  }
  if (sets.empty()) {
    throw Error(ErrorCode::LengthMismatch, "no prediction sets");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].contains(labels[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(sets.size());
}

ReliabilityDiagram reliability_diagram(const std::vector<double>& confidences,
                                       const std::vector<bool>& correct,
                                       std::size_t n_bins) {
  if (confidences.size() != correct.size()) {
    throw Error(ErrorCode::LengthMismatch, "confidences vs outcomes");
  }
  if (n_bins == 0) {
    throw Error(ErrorCode::InvalidConfig, "n_bins must be >= 1");
  }
  ReliabilityDiagram out;
  out.bin_edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i) {
    out.bin_edges[i] = static_cast<double>(i) / static_cast<double>(n_bins);
  }
  out.bins.resize(n_bins);
  std::vector<double> conf_sum(n_bins, 0.0);
  std::vector<std::size_t> hit(n_bins, 0);
  for (std::size_t i = 0; i < confidences.size(); ++i) {
    const double c = confidences[i];
    // Right-closed bins ((k-1)/n, k/n]; c == 0 goes to bin 0.
    std::size_t bin = 0;
    if (c > 0.0) {
      bin = static_cast<std::size_t>(
          std::ceil(c * static_cast<double>(n_bins))) - 1;
      bin = std::min(bin, n_bins - 1);
    }
    out.bins[bin].count += 1;
    conf_sum[bin] += c;
    if (correct[i]) hit[bin] += 1;
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (out.bins[b].count > 0) {
      out.bins[b].confidence_mean =
          conf_sum[b] / static_cast<double>(out.bins[b].count);
      out.bins[b].accuracy =
          static_cast<double>(hit[b]) / static_cast<double>(out.bins[b].count);
    }
  }
  return out;
}

std::vector<double> martingale_trajectory(const std::vector<MartingaleItem>& order,
                                          double alpha) {
  const double target = 1.0 - alpha;
  std::size_t te_miss = 0;
  std::size_t val_miss = 0;
  for (const MartingaleItem& item : order) {
    if (!item.true_score) {
      throw Error(ErrorCode::MissingTrueAlignment,
                  "martingale diagnostic requires every true score");
    }
    const bool miss = *item.true_score < target;
    if (item.is_test) {
      if (miss) ++te_miss;
    } else if (miss) {
      ++val_miss;
    }
  }
  std::vector<double> trajectory;
  trajectory.reserve(order.size() + 1);
  for (std::size_t step = 0;; ++step) {
    trajectory.push_back(static_cast<double>(te_miss) /
                         (1.0 + static_cast<double>(val_miss)));
    if (step == order.size()) break;
    const MartingaleItem& item = order[step];
    const bool miss = *item.true_score < target;
    if (item.is_test) {
      if (miss) --te_miss;
    } else if (miss) {
      --val_miss;
    }
  }
  return trajectory;
}

}  // namespace relay
