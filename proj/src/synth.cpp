#include "relay/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace relay {

void validate_synth_config(const SynthConfig& config) {
  if (config.num_labels < 2) {
    throw Error(ErrorCode::InvalidConfig,
                "num_labels=" + std::to_string(config.num_labels));
  }
  if (config.feature_dim < 0) {
    throw Error(ErrorCode::InvalidConfig,
                "feature_dim=" + std::to_string(config.feature_dim));
  }
  if (!(config.dirichlet_concentration > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "dirichlet_concentration must be > 0");
  }
  if (!(config.edge_temperature > 0.0)) {
    throw Error(ErrorCode::InvalidTemperature,
                "edge_temperature=" + std::to_string(config.edge_temperature));
  }
  if (!(config.edge_noise >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "edge_noise must be >= 0");
  }
  if (config.pool_size == 0) {
    throw Error(ErrorCode::InvalidConfig, "pool_size must be >= 1");
  }
}

Categorical temperature_distort(const Categorical& cloud, double temperature,
                                double noise, Rng& rng) {
  if (!(temperature > 0.0)) {
    throw Error(ErrorCode::InvalidTemperature,
                "temperature=" + std::to_string(temperature));
  }
  if (temperature == 1.0 && noise == 0.0) return cloud;

  const int k = cloud.size();
  std::vector<double> logits(static_cast<std::size_t>(k));
  double max_logit = -std::numeric_limits<double>::infinity();
  for (int y = 0; y < k; ++y) {
    const double p = cloud[y];
    double z = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    if (noise > 0.0 && p > 0.0) z += noise * rng.normal();
    z /= temperature;
    logits[static_cast<std::size_t>(y)] = z;
    max_logit = std::max(max_logit, z);
  }
  std::vector<double> probs(static_cast<std::size_t>(k), 0.0);
  double total = 0.0;
  for (int y = 0; y < k; ++y) {
    const double z = logits[static_cast<std::size_t>(y)];
    if (z > -std::numeric_limits<double>::infinity()) {
      probs[static_cast<std::size_t>(y)] = std::exp(z - max_logit);
      total += probs[static_cast<std::size_t>(y)];
    }
  }
  for (double& p : probs) p /= total;
  return Categorical{std::move(probs)};
}

std::vector<Example> gen_pool(const SynthConfig& config) {
  validate_synth_config(config);
  const std::size_t k = static_cast<std::size_t>(config.num_labels);
  const std::size_t d = static_cast<std::size_t>(config.feature_dim);

  std::vector<Example> pool;
  pool.reserve(config.pool_size);
  for (std::size_t i = 0; i < config.pool_size; ++i) {
    Rng rng = Rng::substream(config.seed, i, 0x73796e7468ULL);
    Example ex;
    ex.id = "synth-" + std::to_string(i);
    ex.cloud_dist = Categorical{rng.dirichlet(k, config.dirichlet_concentration)};
    ex.edge_dist = temperature_distort(ex.cloud_dist, config.edge_temperature,
                                       config.edge_noise, rng);
    ex.label = static_cast<Label>(rng.categorical(ex.cloud_dist.probs));
    ex.features.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      const double base =
          j < k ? std::log(std::max(ex.cloud_dist.probs[j], 1e-300)) : 0.0;
      ex.features[j] = base + rng.normal();
    }
    pool.push_back(std::move(ex));
  }
  return pool;
}

}  // namespace relay
