#ifndef RELAY_SYNTH_HPP
#define RELAY_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "relay/domain.hpp"
#include "relay/rng.hpp"

namespace relay {

// Synthetic cloud/edge population: cloud distributions are Dirichlet draws,
// the edge distribution is a temperature-and-noise distortion of the cloud,
// and labels are drawn from the cloud so that it is exactly the conditional
// law of the data.
struct SynthConfig {
  int num_labels = 10;
  int feature_dim = 8;
  double dirichlet_concentration = 1.0;
  double edge_temperature = 0.5;  // < 1 over-confident, > 1 under-confident
  double edge_noise = 0.0;        // std of per-coordinate logit perturbation
  std::size_t pool_size = 1400;
  std::uint64_t seed = 1;
};

void validate_synth_config(const SynthConfig& config);

// Edge probabilities proportional to exp((log cloud + noise) / T).
Categorical temperature_distort(const Categorical& cloud, double temperature,
                                double noise, Rng& rng);

std::vector<Example> gen_pool(const SynthConfig& config);

}  // namespace relay

#endif  // RELAY_SYNTH_HPP
