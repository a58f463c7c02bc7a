#include "relay/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "relay/alignment.hpp"
#include "relay/rng.hpp"

namespace relay {

namespace {

constexpr std::uint64_t kTagPool = 0x706f6f6cULL;
constexpr std::uint64_t kTagShuffle = 0x73687566ULL;
constexpr std::uint64_t kTagTiebreak = 0x74696562ULL;
constexpr std::uint64_t kTagLcp = 0x6c637020ULL;

std::uint64_t subseed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix_u64(mix_u64(mix_u64(base) ^ mix_u64(a)) ^ mix_u64(b));
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const char* edge_set_name(EdgeSetMethod method) {
  switch (method) {
    case EdgeSetMethod::hms: return "hms";
    case EdgeSetMethod::cp: return "cp";
    case EdgeSetMethod::lcp: return "lcp";
  }
  return "?";
}

const char* cascade_name(CascadeMethod method) {
  switch (method) {
    case CascadeMethod::cloud_only: return "cloud_only";
    case CascadeMethod::edge_only: return "edge_only";
    case CascadeMethod::cbd: return "cbd";
    case CascadeMethod::cab: return "cab";
  }
  return "?";
}

namespace {

EdgeSetMethod parse_edge_set(const std::string& value) {
  if (value == "hms") return EdgeSetMethod::hms;
  if (value == "cp") return EdgeSetMethod::cp;
  if (value == "lcp") return EdgeSetMethod::lcp;
  throw Error(ErrorCode::ConfigError, "unknown edge set '" + value + "'");
}

CascadeMethod parse_cascade(const std::string& value) {
  if (value == "cloud_only") return CascadeMethod::cloud_only;
  if (value == "edge_only") return CascadeMethod::edge_only;
  if (value == "cbd") return CascadeMethod::cbd;
  if (value == "cab") return CascadeMethod::cab;
  throw Error(ErrorCode::ConfigError, "unknown cascade '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, key + ": bad number '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, key + ": bad integer '" + value + "'");
  }
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto begin = item.find_first_not_of(" \t");
    const auto end = item.find_last_not_of(" \t");
    if (begin == std::string::npos) continue;
    out.push_back(parse_double(key, item.substr(begin, end - begin + 1)));
  }
  if (out.empty()) {
    throw Error(ErrorCode::ConfigError, key + ": empty list");
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "data") {
    if (value == "synthetic") config.use_file = false;
    else if (value == "file") config.use_file = true;
    else throw Error(ErrorCode::ConfigError, "data must be synthetic or file");
  } else if (key == "edge_set") {
    config.edge_set = parse_edge_set(value);
  } else if (key == "edge_sets") {
    config.sweep_edge_sets.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      config.sweep_edge_sets.push_back(parse_edge_set(trim(item)));
    }
    if (config.sweep_edge_sets.empty()) {
      throw Error(ErrorCode::ConfigError, "edge_sets: empty list");
    }
  } else if (key == "cascade") {
    config.cascade = parse_cascade(value);
  } else if (key == "predictor") {
    if (value == "isotonic") config.predictor = PredictorKind::isotonic;
    else if (value == "constant") config.predictor = PredictorKind::constant;
    else throw Error(ErrorCode::ConfigError, "predictor must be isotonic or constant");
  } else if (key == "predictor_constant") {
    config.predictor_constant = parse_double(key, value);
  } else if (key == "gamma") {
    config.cbd_gamma = parse_double(key, value);
  } else if (key == "alpha") {
    config.alphas = parse_double_list(key, value);
  } else if (key == "delta") {
    config.deltas = parse_double_list(key, value);
  } else if (key == "trials") {
    config.trials = static_cast<std::size_t>(parse_u64(key, value));
  } else if (key == "seed") {
    config.base_seed = parse_u64(key, value);
  } else if (key == "workers") {
    config.workers = static_cast<std::size_t>(parse_u64(key, value));
    if (config.workers == 0) config.workers = 1;
  } else if (key == "diag_bins") {
    config.diag_bins = static_cast<std::size_t>(parse_u64(key, value));
  } else if (key == "synth.num_labels") {
    config.synth.num_labels = static_cast<int>(parse_u64(key, value));
  } else if (key == "synth.feature_dim") {
    config.synth.feature_dim = static_cast<int>(parse_u64(key, value));
  } else if (key == "synth.dirichlet_concentration") {
    config.synth.dirichlet_concentration = parse_double(key, value);
  } else if (key == "synth.edge_temperature") {
    config.synth.edge_temperature = parse_double(key, value);
  } else if (key == "synth.edge_noise") {
    config.synth.edge_noise = parse_double(key, value);
  } else if (key == "synth.pool_size") {
    config.synth.pool_size = static_cast<std::size_t>(parse_u64(key, value));
  } else if (key == "synth.seed") {
    config.synth_seed = parse_u64(key, value);
  } else if (key == "file.path") {
    config.file_path = value;
    config.use_file = true;
  } else if (key == "file.format") {
    if (value == "jsonl") config.file_format = PoolFormat::jsonl;
    else if (value == "csv") config.file_format = PoolFormat::csv;
    else throw Error(ErrorCode::ConfigError, "file.format must be jsonl or csv");
  } else if (key == "lcp.kernel") {
    if (value == "gaussian") config.lcp_kernel.kind = KernelSpec::Kind::gaussian;
    else if (value == "constant") config.lcp_kernel.kind = KernelSpec::Kind::constant;
    else throw Error(ErrorCode::ConfigError, "lcp.kernel must be gaussian or constant");
  } else if (key == "lcp.bandwidth") {
    if (value == "auto") config.lcp_kernel.bandwidth = 0.0;
    else {
      config.lcp_kernel.bandwidth = parse_double(key, value);
      if (!(config.lcp_kernel.bandwidth > 0.0)) {
        throw Error(ErrorCode::ConfigError, "lcp.bandwidth must be > 0 or auto");
      }
    }
  } else if (key == "partition.cal") {
    config.partition.cal = static_cast<std::size_t>(parse_u64(key, value));
  } else if (key == "partition.tr") {
    config.partition.tr = static_cast<std::size_t>(parse_u64(key, value));
  } else if (key == "partition.val") {
    config.partition.val = static_cast<std::size_t>(parse_u64(key, value));
  } else if (key == "partition.te") {
    config.partition.te = static_cast<std::size_t>(parse_u64(key, value));
  } else if (key == "output.path") {
    config.out_path = value;
  } else if (key == "output.format") {
    if (value == "csv") config.out_format = ResultFormat::csv;
    else if (value == "json") config.out_format = ResultFormat::json;
    else throw Error(ErrorCode::ConfigError, "output.format must be csv or json");
  } else {
    throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ConfigError, "cannot open config " + path);
  }
  ExperimentConfig config;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorCode::ConfigError,
                    path + ":" + std::to_string(line_no) + ": bad section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError,
                  path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full_key = section.empty() ? key : section + "." + key;
    try {
      apply_config_entry(config, full_key, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError,
                  path + ":" + std::to_string(line_no) + ": " + e.message());
    }
  }
  return config;
}

std::uint64_t pool_seed(const ExperimentConfig& config) {
  if (config.synth_seed) return *config.synth_seed;
  return subseed(config.base_seed, kTagPool, 0);
}

std::vector<Example> load_pool(const ExperimentConfig& config) {
  if (config.use_file) {
    if (config.file_path.empty()) {
      throw Error(ErrorCode::ConfigError, "file data source needs file.path");
    }
    return load_examples(config.file_path, config.file_format).examples;
  }
  SynthConfig synth = config.synth;
  synth.seed = pool_seed(config);
  return gen_pool(synth);
}

namespace {

// Bandwidth for the auto setting: sized so that the median ratio between the
// nearest and farthest calibration kernel weights is about 10.
double auto_bandwidth(const std::vector<std::span<const double>>& cal_features) {
  constexpr double kLogRatio = 2.302585092994046;  // ln 10
  const std::size_t n = cal_features.size();
  const std::size_t probes = std::min<std::size_t>(n, 50);
  std::vector<double> candidates;
  for (std::size_t i = 0; i < probes; ++i) {
    double min_sq = std::numeric_limits<double>::infinity();
    double max_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double sq = 0.0;
      for (std::size_t k = 0; k < cal_features[i].size(); ++k) {
        const double d = cal_features[i][k] - cal_features[j][k];
        sq += d * d;
      }
      min_sq = std::min(min_sq, sq);
      max_sq = std::max(max_sq, sq);
    }
    const double gap = max_sq - min_sq;
    if (gap > 0.0) candidates.push_back(std::sqrt(gap / (2.0 * kLogRatio)));
  }
  if (candidates.empty()) return 1.0;
  std::sort(candidates.begin(), candidates.end());
  return candidates[candidates.size() / 2];
}

struct EdgeSetBuilder {
  const ExperimentConfig& config;
  const std::vector<Example>& pool;
  EdgeSetMethod method;
  double alpha;
  std::size_t trial_index;

  double cp_q = 0.0;
  std::vector<double> cal_scores;
  std::vector<std::span<const double>> cal_features;
  KernelSpec kernel;

  EdgeSetBuilder(const ExperimentConfig& config_, const std::vector<Example>& pool_,
                 EdgeSetMethod method_, double alpha_, std::size_t trial_index_,
                 const std::vector<std::size_t>& cal_indices)
      : config(config_), pool(pool_), method(method_), alpha(alpha_),
        trial_index(trial_index_), kernel(config_.lcp_kernel) {
    if (method == EdgeSetMethod::hms) return;
    cal_scores.reserve(cal_indices.size());
    for (std::size_t idx : cal_indices) {
      const Example& ex = pool[idx];
      if (!ex.label) {
        throw Error(ErrorCode::ValidationError,
                    "calibration example " + ex.id + " lacks a label");
      }
      cal_scores.push_back(nll_score(ex.edge_dist, *ex.label));
      if (method == EdgeSetMethod::lcp) {
        cal_features.emplace_back(ex.features);
      }
    }
    if (method == EdgeSetMethod::cp) {
      cp_q = cp_threshold(cal_scores, alpha);
    } else if (kernel.kind == KernelSpec::Kind::gaussian &&
               kernel.bandwidth == 0.0) {
      kernel.bandwidth = auto_bandwidth(cal_features);
    }
  }

  PredictionSet build(std::size_t pool_index) const {
    const Example& ex = pool[pool_index];
    switch (method) {
      case EdgeSetMethod::hms:
        return hms(ex.edge_dist, alpha);
      case EdgeSetMethod::cp:
        return threshold_set(ex.edge_dist, cp_q);
      case EdgeSetMethod::lcp: {
        Rng rng(subseed(subseed(config.base_seed, trial_index, kTagLcp),
                        pool_index, 0));
        const double q = lcp_threshold(ex.features, cal_features, cal_scores,
                                       alpha, kernel, rng);
        return threshold_set(ex.edge_dist, q);
      }
    }
    throw Error(ErrorCode::Internal, "unreachable edge set method");
  }
};

}  // namespace

TrialOutput run_trial_detailed(const ExperimentConfig& config,
                               const std::vector<Example>& pool,
                               EdgeSetMethod method, double alpha, double delta,
                               std::size_t trial_index) {
  const RiskSpec risk{alpha, delta};
  validate_risk(risk);
  const PartitionSizes& sizes = config.partition;
  if (sizes.total() > pool.size()) {
    throw Error(ErrorCode::ConfigError,
                "partition needs " + std::to_string(sizes.total()) +
                    " examples, pool has " + std::to_string(pool.size()));
  }
  if (sizes.val == 0 || sizes.te == 0) {
    throw Error(ErrorCode::ConfigError, "partition val and te must be non-empty");
  }
  if (config.cascade == CascadeMethod::cab &&
      config.predictor == PredictorKind::isotonic && sizes.tr == 0) {
    throw Error(ErrorCode::ConfigError,
                "isotonic predictor needs a non-empty tr split");
  }

  // Independent split per trial: shuffle one fixed pool.
  std::vector<std::size_t> indices(pool.size());
  std::iota(indices.begin(), indices.end(), 0);
  Rng shuffle_rng(subseed(config.base_seed, trial_index, kTagShuffle));
  shuffle_rng.shuffle(indices);

  TrialOutput out;
  DataPartition& part = out.partition;
  auto cursor = indices.begin();
  part.cal.assign(cursor, cursor + static_cast<std::ptrdiff_t>(sizes.cal));
  cursor += static_cast<std::ptrdiff_t>(sizes.cal);
  part.tr.assign(cursor, cursor + static_cast<std::ptrdiff_t>(sizes.tr));
  cursor += static_cast<std::ptrdiff_t>(sizes.tr);
  part.val.assign(cursor, cursor + static_cast<std::ptrdiff_t>(sizes.val));
  cursor += static_cast<std::ptrdiff_t>(sizes.val);
  part.te.assign(cursor, cursor + static_cast<std::ptrdiff_t>(sizes.te));

  const EdgeSetBuilder builder(config, pool, method, alpha, trial_index, part.cal);

  // Test-side artifacts. True alignments are computed here but only the
  // metrics stage below may look at them.
  const std::size_t n_te = part.te.size();
  std::vector<PredictionSet> te_edge_sets(n_te);
  std::vector<PredictionSet> te_oracle_sets(n_te);
  std::vector<double> te_features(n_te);
  out.te_ids.resize(n_te);
  out.te_true_alignments.resize(n_te);
  for (std::size_t i = 0; i < n_te; ++i) {
    const Example& ex = pool[part.te[i]];
    te_edge_sets[i] = builder.build(part.te[i]);
    te_oracle_sets[i] = hms(ex.cloud_dist, alpha);
    te_features[i] = edge_coverage_feature(ex.edge_dist, te_edge_sets[i]);
    out.te_ids[i] = ex.id;
    out.te_true_alignments[i] = true_alignment(ex.cloud_dist, te_edge_sets[i]);
  }

  // Routing.
  std::vector<bool> selected(n_te, false);
  switch (config.cascade) {
    case CascadeMethod::cloud_only:
      break;
    case CascadeMethod::edge_only:
      selected.assign(n_te, true);
      break;
    case CascadeMethod::cbd: {
      const double gamma = config.cbd_gamma ? *config.cbd_gamma : 1.0 - delta;
      for (std::size_t i = 0; i < n_te; ++i) {
        selected[i] =
            cbd_route(pool[part.te[i]].edge_dist, gamma) == Route::edge;
      }
      break;
    }
    case CascadeMethod::cab: {
      AlignmentPredictor predictor =
          config.predictor == PredictorKind::constant
              ? AlignmentPredictor::constant(config.predictor_constant)
              : [&] {
                  std::vector<AlignmentSample> samples;
                  samples.reserve(part.tr.size());
                  for (std::size_t idx : part.tr) {
                    const Example& ex = pool[idx];
                    const PredictionSet set = builder.build(idx);
                    samples.push_back(
                        {ex.id, edge_coverage_feature(ex.edge_dist, set),
                         true_alignment(ex.cloud_dist, set)});
                  }
                  return AlignmentPredictor::fit(samples);
                }();
      std::vector<ValEntry> val_entries;
      val_entries.reserve(part.val.size());
      for (std::size_t idx : part.val) {
        const Example& ex = pool[idx];
        const PredictionSet set = builder.build(idx);
        const double feature = edge_coverage_feature(ex.edge_dist, set);
        val_entries.push_back({ex.id, true_alignment(ex.cloud_dist, set),
                               predictor.predict(feature)});
      }
      std::vector<TestEntry> te_entries;
      te_entries.reserve(n_te);
      for (std::size_t i = 0; i < n_te; ++i) {
        te_entries.push_back({out.te_ids[i], predictor.predict(te_features[i])});
      }
      out.selection = cab_select(val_entries, te_entries, risk,
                                 subseed(config.base_seed, trial_index, kTagTiebreak));
      for (std::size_t i = 0; i < n_te; ++i) {
        selected[i] = std::binary_search(out.selection->selected_ids.begin(),
                                         out.selection->selected_ids.end(),
                                         out.te_ids[i]);
      }
      break;
    }
  }

  // Assembly and evaluation.
  std::vector<PredictionSet> final_sets(n_te);
  std::vector<double> selected_alignments;
  for (std::size_t i = 0; i < n_te; ++i) {
    final_sets[i] = selected[i] ? te_edge_sets[i] : te_oracle_sets[i];
    if (selected[i]) {
      selected_alignments.push_back(out.te_true_alignments[i]);
      out.selected_ids.push_back(out.te_ids[i]);
    }
  }
  std::sort(out.selected_ids.begin(), out.selected_ids.end());

  TrialMetrics& m = out.metrics;
  m.n_selected = selected_alignments.size();
  m.empty_selection = m.n_selected == 0;
  m.fdp = fdp(selected_alignments, alpha);
  // Cloud-only output always meets the coverage bar; every other cascade
  // reports the empty-selection convention.
  m.satisfaction_rate = config.cascade == CascadeMethod::cloud_only
                            ? 1.0
                            : satisfaction_rate(selected_alignments, alpha);
  m.deferral_rate = deferral_rate(m.n_selected, n_te);
  m.normalized_inefficiency = normalized_inefficiency(final_sets, te_oracle_sets);
  bool all_labeled = true;
  std::vector<Label> te_labels;
  te_labels.reserve(n_te);
  for (std::size_t idx : part.te) {
    if (!pool[idx].label) {
      all_labeled = false;
      break;
    }
    te_labels.push_back(*pool[idx].label);
  }
  if (all_labeled) {
    m.marginal_coverage = marginal_coverage(final_sets, te_labels);
  }
  return out;
}

TrialMetrics run_trial(const ExperimentConfig& config,
                       const std::vector<Example>& pool, double alpha,
                       double delta, std::size_t trial_index) {
  return run_trial_detailed(config, pool, config.edge_set, alpha, delta,
                            trial_index)
      .metrics;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const std::vector<Example> pool = load_pool(config);
  if (config.alphas.empty() || config.deltas.empty()) {
    throw Error(ErrorCode::ConfigError, "alpha and delta sweeps must be non-empty");
  }
  std::vector<EdgeSetMethod> methods = config.sweep_edge_sets;
  if (methods.empty()) methods.push_back(config.edge_set);

  struct Cell {
    EdgeSetMethod method;
    double alpha;
    double delta;
  };
  std::vector<Cell> cells;
  for (EdgeSetMethod method : methods) {
    for (double alpha : config.alphas) {
      for (double delta : config.deltas) {
        cells.push_back({method, alpha, delta});
      }
    }
  }

  const std::size_t n_jobs = cells.size() * config.trials;
  std::vector<TrialRecord> records(n_jobs);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= n_jobs || failed.load()) break;
      const Cell& cell = cells[job / config.trials];
      const std::size_t trial = job % config.trials;
      try {
        TrialRecord& rec = records[job];
        rec.edge_set = edge_set_name(cell.method);
        rec.cascade = cascade_name(config.cascade);
        rec.alpha = cell.alpha;
        rec.delta = cell.delta;
        rec.trial = trial;
        rec.metrics = run_trial_detailed(config, pool, cell.method, cell.alpha,
                                         cell.delta, trial)
                          .metrics;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        break;
      }
    }
  };

  const std::size_t n_threads =
      std::max<std::size_t>(1, std::min(config.workers, n_jobs ? n_jobs : 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ExperimentResult result;
  result.trials = std::move(records);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto begin = result.trials.begin() +
                       static_cast<std::ptrdiff_t>(c * config.trials);
    const std::vector<TrialRecord> cell_records(
        begin, begin + static_cast<std::ptrdiff_t>(config.trials));
    if (!cell_records.empty()) {
      result.aggregates.push_back(aggregate_trials(cell_records));
    }
  }
  return result;
}

Diagnostics run_diagnostics(const ExperimentConfig& config) {
  const std::vector<Example> pool = load_pool(config);
  Diagnostics diag;

  std::vector<double> confidences;
  std::vector<bool> correct;
  for (const Example& ex : pool) {
    if (!ex.label) continue;
    Label arg = 0;
    double top = -1.0;
    for (Label y = 0; y < ex.edge_dist.size(); ++y) {
      if (ex.edge_dist[y] > top) {
        top = ex.edge_dist[y];
        arg = y;
      }
    }
    confidences.push_back(top);
    correct.push_back(arg == *ex.label);
  }
  if (confidences.empty()) {
    throw Error(ErrorCode::ValidationError,
                "diagnostics need labeled examples for the reliability diagram");
  }
  diag.edge_reliability = reliability_diagram(confidences, correct, config.diag_bins);

  ExperimentConfig cab_config = config;
  cab_config.cascade = CascadeMethod::cab;
  const TrialOutput trial = run_trial_detailed(
      cab_config, pool, config.edge_set, config.alphas.front(),
      config.deltas.front(), 0);
  if (trial.selection) {
    std::unordered_map<std::string, double> te_scores;
    for (std::size_t i = 0; i < trial.te_ids.size(); ++i) {
      te_scores.emplace(trial.te_ids[i], trial.te_true_alignments[i]);
    }
    std::vector<MartingaleItem> items;
    items.reserve(trial.selection->order.size());
    for (const PoolItem& item : trial.selection->order) {
      if (item.origin == PoolItem::Origin::test) {
        items.push_back({true, te_scores.at(item.example_id)});
      } else {
        items.push_back({false, item.true_score});
      }
    }
    diag.martingale = martingale_trajectory(items, config.alphas.front());
    diag.fdp_trajectory = trial.selection->fdp_trajectory;
    diag.stop_step = trial.selection->stop_step;
  }
  return diag;
}

void write_reliability_csv(const ReliabilityDiagram& diagram,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "bin_lo,bin_hi,confidence_mean,accuracy,count\n";
  for (std::size_t b = 0; b + 1 < diagram.bin_edges.size(); ++b) {
    const ReliabilityDiagram::Bin& bin = diagram.bins[b];
    out << fmt_double(diagram.bin_edges[b]) << ','
        << fmt_double(diagram.bin_edges[b + 1]) << ','
        << fmt_double(bin.confidence_mean) << ',' << fmt_double(bin.accuracy)
        << ',' << bin.count << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

void write_martingale_csv(const Diagnostics& diagnostics, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "step,martingale,fdp_estimate\n";
  for (std::size_t i = 0; i < diagnostics.martingale.size(); ++i) {
    out << i << ',' << fmt_double(diagnostics.martingale[i]) << ',';
    if (i < diagnostics.fdp_trajectory.size()) {
      out << fmt_double(diagnostics.fdp_trajectory[i]);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace relay
