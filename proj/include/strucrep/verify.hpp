#pragma once

// Property-test harness. Every sweep derives per-trial streams from
// mix_seed(seed, trial), so results do not depend on evaluation order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strucrep/group_rep.hpp"

namespace strucrep {

inline constexpr std::size_t kMaxWitnesses = 5;
/// Orthogonal samples per trial for continuous groups.
inline constexpr std::size_t kContinuousSamplesPerTrial = 5;
inline constexpr double kConstraintTol = 1e-12;
inline constexpr double kStressTol = 1e-6;
inline constexpr double kInvariantDependenceTol = 1e-6;

struct Witness {
  Mat3 Q;
  SymTensor2 C;
  double violation = 0.0;
};

struct VerificationReport {
  std::string group;
  std::string check;
  std::string model;  // empty for group-level checks
  std::size_t trials = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::vector<Witness> witnesses;  // failing pairs only, first kMaxWitnesses in trial order
  std::string note;
};

/// Group elements applied in one trial: the full element list for discrete
/// groups, kContinuousSamplesPerTrial sampler draws otherwise.
std::vector<Mat3> trial_elements(Group g, Rng& rng);

/// ||Q T(C) Q^T - T(Q C Q^T)||_max / (1 + ||T(C)||_max), evaluated without
/// the symmetrization guard.
double equivariance_violation(const CoefficientModel& m, const SymTensor2& C, const Mat3& Q);
/// |psi(Q C Q^T) - psi(C)| / (1 + |psi(C)|)
double invariance_violation(const CoefficientModel& m, const SymTensor2& C, const Mat3& Q);

VerificationReport check_equivariance(const CoefficientModel& m, std::size_t trials, double tol, std::uint64_t seed);
VerificationReport check_scalar_invariance(const CoefficientModel& m, std::size_t trials, double tol,
                                           std::uint64_t seed);

/// Both sides of every constraint row at random C, for every coefficient
/// slot and for psi when present.
VerificationReport audit_constraints(const CoefficientModel& m, std::size_t trials, double tol, std::uint64_t seed);

/// True iff sigma has the same order as the row's member permutation.
bool index_map_order_consistent(const ConstraintRow& row);

/// Unreduced generators (isotropic generators of C and the structural set)
/// that are not in the reduced list must lie in its span at every sample.
VerificationReport audit_redundancy_generators(Group g, Form form, std::size_t trials, std::uint64_t seed,
                                               double tol = kSpanTol);
/// Unreduced invariants missing from the reduced list must be functions of
/// it: constant along kernel orbits of the set action, and with gradients in
/// the span of the reduced gradients.
VerificationReport audit_redundancy_invariants(Group g, Form form, std::size_t trials, std::uint64_t seed,
                                               double tol = kInvariantDependenceTol);

/// 1e-5 * (1 + ||C||_max)
double default_stress_step(const SymTensor2& C);
/// S_ij = 2 dpsi/dC_ij by central differences; off-diagonal entries are
/// perturbed symmetrically and the difference halved. step <= 0 selects
/// default_stress_step.
SymTensor2 stress_from_energy(const CoefficientModel& m, const SymTensor2& C, double step = 0.0);
/// Tolerance actually applied is max(tol, 50 * step^2) per sample.
VerificationReport check_stress_equivariance(const CoefficientModel& m, std::size_t trials, double tol,
                                             std::uint64_t seed);

/// Deterministic symmetrized models of degree 0, 1 and 2, each carrying
/// tensor coefficients and psi.
std::vector<CoefficientModel> model_library(Group g, Form form = Form::standard);

struct NegativeControl {
  CoefficientModel model;  // unsymmetrized
  std::string generator;   // label of the witness generator
  Mat3 Q;
  SymTensor2 C;            // diag(1,2,3)
  std::string invariant;   // invariant used for alpha_first and psi
};
/// For Man-Goddard groups: alpha_first and psi both equal the first
/// invariant moved by the first generator acting non-trivially on the set.
/// Throws std::invalid_argument for Boehler-Liu groups.
NegativeControl negative_control(Group g);

struct SuiteOptions {
  std::size_t trials = 200;
  std::size_t constraint_trials = 50;
  std::size_t redundancy_trials = 100;
  std::size_t stress_trials = 20;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  double stress_tol = kStressTol;
};

struct NamedModel {
  std::string name;
  CoefficientModel model;
};

/// Per model: equivariance, scalar invariance, constraints (Man-Goddard
/// only), stress equivariance (when psi is present). Then the two group-level
/// redundancy audits.
std::vector<VerificationReport> run_suite(Group g, Form form, const std::vector<NamedModel>& models,
                                          const SuiteOptions& opt);

}  // namespace strucrep
