#pragma once

// Linear least-squares calibration of coefficient models. Coefficients tied
// by the constraint table share one unknown, so every fitted model is
// symmetrized by construction.

#include <cstdint>
#include <vector>

#include "strucrep/group_rep.hpp"
#include "strucrep/verify.hpp"

namespace strucrep {

enum class SampleKind { tensor, scalar };
std::string_view kind_name(SampleKind k);
SampleKind parse_kind(std::string_view s);

struct Sample {
  SymTensor2 C;
  SymTensor2 T;      // tensor kind
  double psi = 0.0;  // scalar kind
};

struct SampleSet {
  SampleKind kind = SampleKind::tensor;
  std::vector<Sample> records;
};

/// Draws C from mix_seed(seed, i) and evaluates the (symmetrized) model,
/// adding independent N(0, noise^2) to every stored target component.
SampleSet synthesize(const CoefficientModel& m, std::size_t n, std::uint64_t seed, SampleKind kind, double noise);

struct FitOptions {
  Form form = Form::standard;
  int degree = 1;
  double ridge = 0.0;
};

/// One tied unknown: its symmetrized unit model (coefficients for tensor
/// kind, psi for scalar kind).
struct TiedTerm {
  CoefficientModel basis;
};

/// Orbit representatives of (slot, monomial) under the constraint group, in
/// slot-then-monomial order of first appearance.
std::vector<TiedTerm> tied_terms(Group g, Form form, int degree, SampleKind kind);

struct FitResult {
  CoefficientModel model;
  SampleKind kind = SampleKind::tensor;
  double rms_residual = 0.0;      // over stored components, 6 per tensor record
  double max_residual = 0.0;
  std::vector<double> residuals;  // per record: Frobenius norm or |psi error|
  double condition = 0.0;         // sigma_max / smallest retained sigma, column-scaled
  std::size_t rank = 0;
  std::size_t unknowns = 0;
  bool min_norm = false;          // rank < unknowns: minimum-norm solution returned
  double ridge = 0.0;
};

/// Throws ValidationError for an empty sample set or a degree outside [0, 8].
FitResult fit_linear(Group g, const SampleSet& samples, const FitOptions& opt);

struct ResidualReport {
  double rms = 0.0;
  double max = 0.0;
  std::size_t records = 0;
  VerificationReport reaudit;
};

/// Throws ValidationError for an empty holdout or a kind mismatch.
ResidualReport residual_report(const FitResult& fit, const SampleSet& holdout, std::uint64_t seed = 0);

}  // namespace strucrep
