#pragma once

// Isotropic functional bases and tensor generators for arbitrary lists of
// symmetric arguments A_i and skew arguments W_i, and a least-squares span
// oracle used to confirm that eliminated generators are redundant.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "strucrep/tensor.hpp"

namespace strucrep {

/// Relative residual threshold for span membership.
inline constexpr double kSpanTol = 1e-8;

struct ArgList {
  std::vector<SymTensor2> sym;   // A_1, A_2, ...
  std::vector<SkewTensor2> skew; // W_1, W_2, ...
};

/// Label order: table row order, then lexicographic argument indices.
struct InvariantVector {
  std::vector<std::string> labels;
  std::vector<double> values;
};

struct GeneratorList {
  std::vector<std::string> labels;
  std::vector<SymTensor2> values;
};

InvariantVector iso_invariants(const ArgList& args);
/// Every value is checked symmetric to 1e-12 (relative to its scale) before
/// being stored. Throws std::logic_error otherwise.
GeneratorList iso_generators(const ArgList& args);

/// Stores A + A^T over 2 after checking the skew part is negligible.
/// Used wherever a product expression is known to be symmetric.
SymTensor2 symmetric_result(const Mat3& m, const char* what);

/// ||c - P c|| / ||c|| where P projects onto span(retained) in Mandel
/// coordinates. 0 when c vanishes.
double span_residual(std::span<const SymTensor2> retained, const SymTensor2& candidate);

struct SpanReport {
  std::size_t trials = 0;
  std::size_t skipped = 0;  // samples where every retained generator vanished
  double max_residual = 0.0;
  double tolerance = kSpanTol;
  bool pass = true;
};

using TensorListFn = std::function<std::vector<SymTensor2>(const SymTensor2& C)>;
using TensorFn = std::function<SymTensor2(const SymTensor2& C)>;

/// Samples C uniformly (entries in [-1,1]) from per-trial seeds
/// mix_seed(seed, t) and records the worst span_residual.
SpanReport span_check(const TensorListFn& retained, const TensorFn& candidate, std::uint64_t seed,
                      std::size_t trials, double tol = kSpanTol);

}  // namespace strucrep
