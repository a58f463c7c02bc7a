#ifndef RELAY_HARNESS_HPP
#define RELAY_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relay/cascade.hpp"
#include "relay/domain.hpp"
#include "relay/ingest.hpp"
#include "relay/metrics.hpp"
#include "relay/predsets.hpp"
#include "relay/synth.hpp"

namespace relay {

enum class EdgeSetMethod { hms, cp, lcp };
enum class CascadeMethod { cloud_only, edge_only, cbd, cab };
enum class PredictorKind { isotonic, constant };

const char* edge_set_name(EdgeSetMethod method);
const char* cascade_name(CascadeMethod method);

struct PartitionSizes {
  std::size_t cal = 500;
  std::size_t tr = 200;
  std::size_t val = 500;
  std::size_t te = 100;

  std::size_t total() const { return cal + tr + val + te; }
};

struct ExperimentConfig {
  // Data source: synthetic unless a file is named.
  bool use_file = false;
  SynthConfig synth;
  std::optional<std::uint64_t> synth_seed;  // pool seed; derived from base_seed
                                            // when not set explicitly
  std::string file_path;
  PoolFormat file_format = PoolFormat::jsonl;

  EdgeSetMethod edge_set = EdgeSetMethod::cp;
  std::vector<EdgeSetMethod> sweep_edge_sets;  // used by the sweep verb
  KernelSpec lcp_kernel{KernelSpec::Kind::gaussian, 0.0};  // bandwidth 0 = auto

  CascadeMethod cascade = CascadeMethod::cab;
  PredictorKind predictor = PredictorKind::isotonic;
  double predictor_constant = 0.5;
  std::optional<double> cbd_gamma;  // defaults to 1 - delta

  std::vector<double> alphas{0.2};
  std::vector<double> deltas{0.2};

  PartitionSizes partition;
  std::size_t trials = 200;
  std::uint64_t base_seed = 1;
  std::size_t workers = 1;

  std::string out_path;  // verbs fill in a format-appropriate default
  ResultFormat out_format = ResultFormat::csv;
  std::size_t diag_bins = 10;
};

// Parses the flat key = value / [section] config format (see README).
ExperimentConfig parse_config_file(const std::string& path);
// Applies a single "section.key" (or bare key) entry; shared by the file
// parser and CLI overrides.
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

// Pool seed for synthetic data under this configuration.
std::uint64_t pool_seed(const ExperimentConfig& config);

// Generates or loads the example pool named by the config.
std::vector<Example> load_pool(const ExperimentConfig& config);

struct TrialOutput {
  TrialMetrics metrics;
  std::vector<std::string> selected_ids;
  DataPartition partition;
  std::vector<std::string> te_ids;             // in partition order
  std::vector<double> te_true_alignments;      // held out; metrics stage only
  // Populated for the cab cascade only; used by diagnostics.
  std::optional<SelectionResult> selection;
};

// One deterministic trial: resplit the pool, build edge sets, fit the
// predictor offline, route, assemble, and score. Everything is a pure
// function of (config, pool, method, alpha, delta, trial_index).
TrialOutput run_trial_detailed(const ExperimentConfig& config,
                               const std::vector<Example>& pool,
                               EdgeSetMethod method, double alpha, double delta,
                               std::size_t trial_index);

TrialMetrics run_trial(const ExperimentConfig& config,
                       const std::vector<Example>& pool, double alpha,
                       double delta, std::size_t trial_index);

struct ExperimentResult {
  std::vector<TrialRecord> trials;
  std::vector<AggregateCell> aggregates;
};

// Full grid (edge-set methods x alphas x deltas) x trials, parallel across
// trials, deterministic for any worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct Diagnostics {
  ReliabilityDiagram edge_reliability;     // over the whole pool
  std::vector<double> martingale;          // trial-0 trajectory, all steps
  std::vector<double> fdp_trajectory;      // trial-0 estimates up to the stop
  std::size_t stop_step = 0;
};

Diagnostics run_diagnostics(const ExperimentConfig& config);

void write_reliability_csv(const ReliabilityDiagram& diagram,
                           const std::string& path);
void write_martingale_csv(const Diagnostics& diagnostics, const std::string& path);

}  // namespace relay

#endif  // RELAY_HARNESS_HPP
