#pragma once
//
// Deterministic random source for protocol sampling.
//
// Every stochastic code path in the library draws from an explicitly seeded
// Rng, and the seed travels with the transcript/report it produced, so a run
// can be replayed bit-for-bit.  Uniform doubles are built from the top 53 bits
// of the raw engine output instead of std::uniform_real_distribution, whose
// output is implementation-defined.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qdistill {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Integer in [0, n).
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::uniform_int: n must be positive");
    return static_cast<int>(uniform() * n) % n;
  }

  /// Sample an index according to a vector of non-negative weights.
  /// Weights need not be normalised; at least one must be positive.
  int pick_weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("Rng::pick_weighted: negative weight");
      total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("Rng::pick_weighted: all weights zero");
    double u = uniform() * total;
    double acc = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] > 0.0) last_positive = static_cast<int>(i);
      acc += weights[i];
      if (u < acc) return static_cast<int>(i);
    }
    return last_positive;  // u landed on the accumulated rounding slack
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace qdistill
