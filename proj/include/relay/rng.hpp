#ifndef RELAY_RNG_HPP
#define RELAY_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace relay {

// Seeded random source with hand-rolled distributions. The mt19937_64 engine
// is fully specified by the standard; the std:: distributions are not, so
// normal/gamma/dirichlet are implemented here to keep every run bit-identical
// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent substream derived from (base, stream, salt) by splitmix64
  // finalization. Used to give each trial / pool item its own stream.
  static Rng substream(std::uint64_t base, std::uint64_t stream, std::uint64_t salt = 0);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  // Standard normal, Marsaglia polar method (one spare cached).
  double normal();

  // Gamma(shape, 1), Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  // Symmetric Dirichlet over k coordinates.
  std::vector<double> dirichlet(std::size_t k, double concentration);

  // Index drawn from an (already normalized) probability vector.
  std::size_t categorical(const std::vector<double>& probs);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// splitmix64 finalizer; also used to mix seeds.
std::uint64_t mix_u64(std::uint64_t x);

}  // namespace relay

#endif  // RELAY_RNG_HPP
