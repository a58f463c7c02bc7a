#ifndef RELAY_INGEST_HPP
#define RELAY_INGEST_HPP

#include <optional>
#include <string>
#include <vector>

#include "relay/domain.hpp"
#include "relay/metrics.hpp"

namespace relay {

enum class PoolFormat { jsonl, csv };
enum class ResultFormat { csv, json };

struct LoadResult {
  std::vector<Example> examples;
  // First-seen order of string labels; empty when labels were numeric.
  std::vector<std::string> label_names;
  std::size_t renormalized = 0;  // records rescaled inside the tolerance band
};

// Reads externally computed predictive distributions. K is inferred from the
// first record and enforced on the rest; ids must be unique.
LoadResult load_examples(const std::string& path, PoolFormat format);

// Writes one JSON object per line, the same schema load_examples reads.
void write_pool_jsonl(const std::vector<Example>& pool, const std::string& path);

struct TrialRecord {
  std::string edge_set;  // hms | cp | lcp
  std::string cascade;   // cloud_only | edge_only | cbd | cab
  double alpha = 0.0;
  double delta = 0.0;
  std::size_t trial = 0;
  TrialMetrics metrics;
};

struct MetricSummary {
  double mean = 0.0;
  double se = 0.0;
};

MetricSummary summarize(const std::vector<double>& values);

struct AggregateCell {
  std::string edge_set;
  std::string cascade;
  double alpha = 0.0;
  double delta = 0.0;
  std::size_t n_trials = 0;
  std::size_t n_empty_selection = 0;
  MetricSummary satisfaction_rate;
  MetricSummary deferral_rate;
  MetricSummary normalized_inefficiency;
  MetricSummary fdp;
  std::optional<MetricSummary> marginal_coverage;
  // Satisfaction over non-empty selections only, the companion convention.
  std::optional<MetricSummary> satisfaction_rate_nonempty;
};

AggregateCell aggregate_trials(const std::vector<TrialRecord>& trials);

// Per-trial rows plus aggregate rows; CSV columns are fixed (see README),
// JSON carries schema_version = 1. Zero trials produce a header-only CSV or
// an empty-trials JSON without aggregates.
void write_results(const std::vector<TrialRecord>& trials,
                   const std::vector<AggregateCell>& aggregates,
                   const std::string& path, ResultFormat format);

// Long-format table keyed by method/delta/metric, for plotting trade-offs.
void write_tradeoff_table(const std::vector<AggregateCell>& aggregates,
                          const std::string& path);

}  // namespace relay

#endif  // RELAY_INGEST_HPP
