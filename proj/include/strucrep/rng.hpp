#pragma once

// Reproducible random streams. mt19937_64 has a fully specified output
// sequence; the real-valued transforms are done here rather than through
// <random> distributions, whose algorithms are implementation-defined.

#include <cstdint>
#include <random>

#include "strucrep/tensor.hpp"

namespace strucrep {

/// splitmix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, one value per call).
  double normal();
  bool coin() { return (engine_() >> 63) != 0; }

  /// Symmetric tensor with independent entries uniform in [-1, 1].
  SymTensor2 sym_tensor();
  /// B^T B + 0.1 I with B entries uniform in [-1, 1].
  SymTensor2 spd_tensor();
  /// Haar-distributed element of O(3): QR of a Gaussian matrix with the
  /// signs of R's diagonal folded into Q.
  Mat3 orthogonal();
  /// Rotation by a uniform angle about k.
  Mat3 rotation_about_k();

 private:
  std::mt19937_64 engine_;
};

Mat3 rotation_about_k(double angle);

}  // namespace strucrep
