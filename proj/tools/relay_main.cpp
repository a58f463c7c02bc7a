#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "relay/harness.hpp"
#include "relay/ingest.hpp"
#include "relay/synth.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out_path;
  std::string format;
  std::optional<std::size_t> workers;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags.config_path, "experiment config file");
  if (config_required) opt->required();
  cmd->add_option("--seed", flags.seed, "base seed override");
  cmd->add_option("--trials", flags.trials, "trial count override");
  cmd->add_option("--out", flags.out_path, "output path override");
  cmd->add_option("--format", flags.format, "output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", flags.workers, "worker thread count");
}

relay::ExperimentConfig build_config(const CommonFlags& flags) {
  relay::ExperimentConfig config;
  if (!flags.config_path.empty()) {
    config = relay::parse_config_file(flags.config_path);
  }
  if (flags.seed) config.base_seed = *flags.seed;
  if (flags.trials) config.trials = *flags.trials;
  if (!flags.out_path.empty()) config.out_path = flags.out_path;
  if (!flags.format.empty()) {
    config.out_format = flags.format == "json" ? relay::ResultFormat::json
                                               : relay::ResultFormat::csv;
  }
  if (flags.workers) config.workers = std::max<std::size_t>(1, *flags.workers);
  return config;
}

std::string default_out(const relay::ExperimentConfig& config) {
  return config.out_format == relay::ResultFormat::json ? "results.json"
                                                        : "results.csv";
}

std::string strip_extension(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path;
  }
  return path.substr(0, dot);
}

int run_gen(const CommonFlags& flags) {
  relay::ExperimentConfig config = build_config(flags);
  config.use_file = false;
  const std::string out =
      config.out_path.empty() ? "pool.jsonl" : config.out_path;
  relay::SynthConfig synth = config.synth;
  synth.seed = relay::pool_seed(config);
  const auto pool = relay::gen_pool(synth);
  relay::write_pool_jsonl(pool, out);
  std::cout << "wrote " << pool.size() << " examples to " << out << "\n";
  return 0;
}

int run_run(const CommonFlags& flags) {
  relay::ExperimentConfig config = build_config(flags);
  if (config.out_path.empty()) config.out_path = default_out(config);
  const relay::ExperimentResult result = relay::run_experiment(config);
  relay::write_results(result.trials, result.aggregates, config.out_path,
                       config.out_format);
  std::cout << "wrote " << result.trials.size() << " trial rows ("
            << result.aggregates.size() << " cells) to " << config.out_path
            << "\n";
  return 0;
}

int run_sweep(const CommonFlags& flags) {
  relay::ExperimentConfig config = build_config(flags);
  if (config.out_path.empty()) config.out_path = default_out(config);
  if (config.sweep_edge_sets.empty()) {
    config.sweep_edge_sets = {relay::EdgeSetMethod::hms, relay::EdgeSetMethod::cp,
                              relay::EdgeSetMethod::lcp};
  }
  if (config.deltas.size() == 1) {
    config.deltas = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
  }
  const relay::ExperimentResult result = relay::run_experiment(config);
  relay::write_results(result.trials, result.aggregates, config.out_path,
                       config.out_format);
  const std::string tradeoff = strip_extension(config.out_path) + ".tradeoff.csv";
  relay::write_tradeoff_table(result.aggregates, tradeoff);
  std::cout << "wrote " << result.trials.size() << " trial rows to "
            << config.out_path << " and trade-off table to " << tradeoff << "\n";
  return 0;
}

int run_diagnose(const CommonFlags& flags) {
  relay::ExperimentConfig config = build_config(flags);
  const relay::Diagnostics diag = relay::run_diagnostics(config);
  const std::string prefix = strip_extension(
      config.out_path.empty() ? std::string("diagnostics") : config.out_path);
  const std::string reliability = prefix + ".reliability.csv";
  const std::string martingale = prefix + ".martingale.csv";
  relay::write_reliability_csv(diag.edge_reliability, reliability);
  relay::write_martingale_csv(diag, martingale);
  std::cout << "wrote " << reliability << " and " << martingale << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-cloud prediction-set cascades with risk-controlled routing"};
  app.require_subcommand(1);

  CommonFlags gen_flags, run_flags, sweep_flags, diag_flags;
  CLI::App* gen = app.add_subcommand("gen", "emit a synthetic pool to JSONL");
  add_common(gen, gen_flags, false);
  CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
  add_common(run, run_flags, true);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "grid over delta and edge-set methods, with trade-off table");
  add_common(sweep, sweep_flags, true);
  CLI::App* diagnose = app.add_subcommand(
      "diagnose", "emit reliability diagram and screening diagnostics");
  add_common(diagnose, diag_flags, true);

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return run_gen(gen_flags);
    if (run->parsed()) return run_run(run_flags);
    if (sweep->parsed()) return run_sweep(sweep_flags);
    if (diagnose->parsed()) return run_diagnose(diag_flags);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const relay::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return relay::error_exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
