#include "strucrep/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Dense>

#include "strucrep/error.hpp"

namespace strucrep {

namespace {

std::vector<Mat3> canonical_members(const CoefficientModel& m) {
  return structural_set(m.group, m.form).matrices();
}

/// Max-fold with witness collection; pass is decided at the end.
class Fold {
 public:
  Fold(VerificationReport& r) : r_(r) {}
  void add(double violation, double tol, const Mat3& Q, const SymTensor2& C) {
    r_.max_violation = std::max(r_.max_violation, violation);
    if (!(violation <= tol)) {
      r_.pass = false;
      if (r_.witnesses.size() < kMaxWitnesses) r_.witnesses.push_back({Q, C, violation});
    }
  }

 private:
  VerificationReport& r_;
};

VerificationReport start(Group g, std::string check, std::size_t trials, double tol) {
  VerificationReport r;
  r.group = std::string(group_name(g));
  r.check = std::move(check);
  r.trials = trials;
  r.tolerance = tol;
  return r;
}

double rel_tensor(const SymTensor2& lhs, const SymTensor2& rhs, const SymTensor2& scale) {
  return (lhs - rhs).max_abs() / (1.0 + scale.max_abs());
}

double rel_scalar(double lhs, double rhs, double scale) { return std::abs(lhs - rhs) / (1.0 + std::abs(scale)); }

}  // namespace

std::vector<Mat3> trial_elements(Group g, Rng& rng) {
  const auto& pg = point_group(g);
  if (!pg.is_continuous) return pg.elements;
  std::vector<Mat3> qs;
  for (std::size_t k = 0; k < kContinuousSamplesPerTrial; ++k) qs.push_back(pg.sample(rng));
  return qs;
}

double equivariance_violation(const CoefficientModel& m, const SymTensor2& C, const Mat3& Q) {
  const auto L = canonical_members(m);
  const SymTensor2 T = eval_tensor_raw(m, C.to_mat(), L);
  const SymTensor2 rotated = eval_tensor_raw(m, conjugate(Q, C.to_mat()), L);
  return rel_tensor(conjugate(Q, T), rotated, T);
}

double invariance_violation(const CoefficientModel& m, const SymTensor2& C, const Mat3& Q) {
  const auto L = canonical_members(m);
  const double psi = eval_scalar_raw(m, C.to_mat(), L);
  return rel_scalar(eval_scalar_raw(m, conjugate(Q, C.to_mat()), L), psi, psi);
}

VerificationReport check_equivariance(const CoefficientModel& m, std::size_t trials, double tol, std::uint64_t seed) {
  auto r = start(m.group, "equivariance", trials, tol);
  Fold fold(r);
  const auto L = canonical_members(m);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, t));
    const SymTensor2 C = rng.sym_tensor();
    const SymTensor2 T = eval_tensor_raw(m, C.to_mat(), L);
    for (const Mat3& Q : trial_elements(m.group, rng)) {
      const SymTensor2 rotated = eval_tensor_raw(m, conjugate(Q, C.to_mat()), L);
      fold.add(rel_tensor(conjugate(Q, T), rotated, T), tol, Q, C);
    }
  }
  return r;
}

VerificationReport check_scalar_invariance(const CoefficientModel& m, std::size_t trials, double tol,
                                           std::uint64_t seed) {
  auto r = start(m.group, "scalar_invariance", trials, tol);
  Fold fold(r);
  const auto L = canonical_members(m);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, t));
    const SymTensor2 C = rng.sym_tensor();
    const double psi = eval_scalar_raw(m, C.to_mat(), L);
    for (const Mat3& Q : trial_elements(m.group, rng))
      fold.add(rel_scalar(eval_scalar_raw(m, conjugate(Q, C.to_mat()), L), psi, psi), tol, Q, C);
  }
  return r;
}

VerificationReport audit_constraints(const CoefficientModel& m, std::size_t trials, double tol, std::uint64_t seed) {
  auto r = start(m.group, "constraints", trials, tol);
  const auto& table = constraint_table(m.group, m.form);
  if (table.constraint_free) {
    r.note = "Boehler-Liu group: no constraint rows";
    return r;
  }
  Fold fold(r);
  const auto L = canonical_members(m);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, t));
    const SymTensor2 C = rng.sym_tensor();
    const Mat3 Cm = C.to_mat();
    const auto lhs = m.coefficients.empty() ? std::vector<double>{} : eval_coefficients_raw(m, Cm, L);
    for (const auto& row : table.rows) {
      const auto permuted = permute_members(L, row.member_perm);
      const auto Q = generators_of(m.group);
      const auto gen = std::find_if(Q.begin(), Q.end(), [&](const NamedMatrix& n) { return n.label == row.generator; });
      const Mat3 witnessQ = gen != Q.end() ? gen->matrix : Mat3::identity();
      if (!lhs.empty()) {
        const auto rhs = eval_coefficients_raw(m, Cm, permuted);
        for (std::size_t k = 0; k < lhs.size(); ++k) {
          const double b = rhs[static_cast<std::size_t>(row.sigma[k])];
          fold.add(rel_scalar(lhs[k], b, std::max(std::abs(lhs[k]), std::abs(b))), tol, witnessQ, C);
        }
      }
      if (m.psi) {
        const double a = eval_scalar_raw(m, Cm, L), b = eval_scalar_raw(m, Cm, permuted);
        fold.add(rel_scalar(a, b, std::max(std::abs(a), std::abs(b))), tol, witnessQ, C);
      }
    }
  }
  return r;
}

namespace {

int permutation_order(const std::vector<int>& p) {
  std::vector<int> cur = p;
  for (int k = 1; k <= 720; ++k) {
    bool id = true;
    for (std::size_t i = 0; i < cur.size(); ++i) id = id && cur[i] == static_cast<int>(i);
    if (id) return k;
    std::vector<int> next(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) next[i] = p[static_cast<std::size_t>(cur[i])];
    cur = std::move(next);
  }
  return -1;
}

}  // namespace

bool index_map_order_consistent(const ConstraintRow& row) {
  return permutation_order(row.sigma) == permutation_order(row.member_perm);
}

// ---------------------------------------------------------------------------
// redundancy

namespace {

ArgList unreduced_args(const StructuralTensorSet& set, const Mat3& C) {
  ArgList args;
  args.sym.push_back(SymTensor2::symmetric_part(C));
  for (const auto& m : set.members) {
    if (m.kind == MemberKind::symmetric)
      args.sym.push_back(SymTensor2::symmetric_part(m.tensor));
    else
      args.skew.push_back(SkewTensor2::skew_part(m.tensor));
  }
  return args;
}

constexpr std::size_t kPresenceSamples = 3;

Mat3 presence_sample(std::size_t k) { return Rng(mix_seed(0x70726573ULL, k)).sym_tensor().to_mat(); }

}  // namespace

VerificationReport audit_redundancy_generators(Group g, Form form, std::size_t trials, std::uint64_t seed,
                                               double tol) {
  auto r = start(g, "redundancy_generators", trials, tol);
  const auto& set = structural_set(g, form);
  const auto& basis = group_basis(g, form);
  const auto L = set.matrices();

  // unreduced terms whose values coincide with a reduced term are present
  std::vector<std::vector<SymTensor2>> full, reduced;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < kPresenceSamples; ++k) {
    const Mat3 C = presence_sample(k);
    const auto gl = iso_generators(unreduced_args(set, C));
    labels = gl.labels;
    full.push_back(gl.values);
    reduced.push_back(generators_with(basis, C, L));
  }
  std::vector<std::size_t> absent;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    bool present = false;
    for (std::size_t i = 0; i < basis.generator_count() && !present; ++i) {
      present = true;
      for (std::size_t s = 0; s < kPresenceSamples && present; ++s)
        present = (full[s][j] - reduced[s][i]).max_abs() <= 1e-12 * (1.0 + full[s][j].max_abs());
    }
    if (!present) absent.push_back(j);
  }

  std::vector<std::function<SymTensor2(const SymTensor2&)>> candidates;
  for (std::size_t j : absent)
    candidates.push_back([&set, j](const SymTensor2& C) {
      return iso_generators(unreduced_args(set, C.to_mat())).values[j];
    });
  if (g == Group::K_h)  // Cayley-Hamilton witness
    candidates.push_back([](const SymTensor2& C) {
      const Mat3 c = C.to_mat();
      return SymTensor2::symmetric_part(c * c * c);
    });

  const auto retained = [&](const SymTensor2& C) { return generators_with(basis, C.to_mat(), L); };
  std::size_t skipped = 0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const SpanReport s = span_check(retained, candidates[k], mix_seed(seed, 0x1000 + k), trials, tol);
    skipped += s.skipped;
    r.max_violation = std::max(r.max_violation, s.max_residual);
  }
  r.pass = r.max_violation <= tol;
  r.note = std::to_string(labels.size()) + " unreduced generators, " + std::to_string(candidates.size()) +
           " span-checked";
  if (skipped > 0) r.note += ", " + std::to_string(skipped) + " degenerate samples skipped";
  return r;
}

namespace {

constexpr std::size_t kStorageIdx[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};

std::pair<Mat3, Mat3> perturbed(const Mat3& C, std::size_t c, double h) {
  const auto [i, j] = kStorageIdx[c];
  Mat3 plus = C, minus = C;
  plus(i, j) += h;
  minus(i, j) -= h;
  if (i != j) {
    plus(j, i) += h;
    minus(j, i) -= h;
  }
  return {plus, minus};
}

/// d f / d C in the six storage coordinates; off-diagonals perturbed in both
/// mirror positions, difference halved.
template <class F>
std::array<double, 6> fd_gradient(const F& f, const Mat3& C, double h) {
  std::array<double, 6> g{};
  for (std::size_t c = 0; c < 6; ++c) {
    const auto [plus, minus] = perturbed(C, c, h);
    g[c] = (f(plus) - f(minus)) / (2.0 * h) / (c < 3 ? 1.0 : 2.0);
  }
  return g;
}

/// Same scheme for a vector-valued f; result[k] is the gradient of f_k.
template <class F>
std::vector<std::array<double, 6>> fd_jacobian(const F& f, const Mat3& C, double h) {
  std::vector<std::array<double, 6>> out;
  for (std::size_t c = 0; c < 6; ++c) {
    const auto [plus, minus] = perturbed(C, c, h);
    const std::vector<double> fp = f(plus), fm = f(minus);
    out.resize(fp.size());
    for (std::size_t k = 0; k < fp.size(); ++k) out[k][c] = (fp[k] - fm[k]) / (2.0 * h) / (c < 3 ? 1.0 : 2.0);
  }
  return out;
}

double gradient_span_residual(const std::vector<std::array<double, 6>>& reduced, const std::array<double, 6>& cand) {
  Eigen::Map<const Eigen::Matrix<double, 6, 1>> c(cand.data());
  const double cn = c.norm();
  if (cn <= 1e-9) return 0.0;
  Eigen::MatrixXd G(6, static_cast<Eigen::Index>(reduced.size()));
  for (std::size_t k = 0; k < reduced.size(); ++k)
    for (int i = 0; i < 6; ++i) G(i, static_cast<Eigen::Index>(k)) = reduced[k][static_cast<std::size_t>(i)];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Matrix<double, 6, 1> r = c;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(0) == 0.0 || s(k) <= 1e-8 * s(0)) break;
    const auto u = svd.matrixU().col(k);
    r -= u.dot(c) * u;
  }
  return r.norm() / cn;
}

}  // namespace

VerificationReport audit_redundancy_invariants(Group g, Form form, std::size_t trials, std::uint64_t seed,
                                               double tol) {
  auto r = start(g, "redundancy_invariants", trials, tol);
  Fold fold(r);
  const auto& set = structural_set(g, form);
  const auto& basis = group_basis(g, form);
  const auto L = set.matrices();

  std::vector<std::vector<double>> full, reduced;
  std::size_t n_full = 0;
  for (std::size_t k = 0; k < kPresenceSamples; ++k) {
    const Mat3 C = presence_sample(k);
    full.push_back(iso_invariants(unreduced_args(set, C)).values);
    reduced.push_back(invariants_with(basis, C, L));
    n_full = full.back().size();
  }
  std::vector<std::size_t> absent;
  for (std::size_t j = 0; j < n_full; ++j) {
    bool present = false;
    for (std::size_t i = 0; i < basis.invariant_count() && !present; ++i) {
      present = true;
      for (std::size_t s = 0; s < kPresenceSamples && present; ++s)
        present = std::abs(full[s][j] - reduced[s][i]) <= 1e-12 * (1.0 + std::abs(full[s][j]));
    }
    if (!present) absent.push_back(j);
  }

  const auto cand_values = [&](const Mat3& C) { return iso_invariants(unreduced_args(set, C)).values; };
  std::size_t kernel_pairs = 0;
  for (std::size_t t = 0; t < trials && !absent.empty(); ++t) {
    Rng rng(mix_seed(seed, t));
    const SymTensor2 Cs = rng.sym_tensor();
    const Mat3 C = Cs.to_mat();
    const auto base = cand_values(C);

    // orbit resampling under elements acting trivially on the set
    for (const Mat3& Q : trial_elements(g, rng)) {
      if (!action_on_set(Q, set.members).is_identity()) continue;
      ++kernel_pairs;
      const auto moved = cand_values(conjugate(Q, C));
      for (std::size_t j : absent) fold.add(rel_scalar(moved[j], base[j], base[j]), tol, Q, Cs);
    }

    // local functional dependence: candidate gradient in the reduced span
    const double h = default_stress_step(Cs);
    const auto red_grads = fd_jacobian([&](const Mat3& X) { return invariants_with(basis, X, L); }, C, h);
    const auto cand_grads = fd_jacobian(cand_values, C, h);
    for (std::size_t j : absent)
      fold.add(gradient_span_residual(red_grads, cand_grads[j]), tol, Mat3::identity(), Cs);
  }
  r.note = std::to_string(n_full) + " unreduced invariants, " + std::to_string(absent.size()) +
           " tested for dependence, " + std::to_string(kernel_pairs) + " kernel-orbit pairs";
  return r;
}

// ---------------------------------------------------------------------------
// stress

double default_stress_step(const SymTensor2& C) { return 1e-5 * (1.0 + C.max_abs()); }

SymTensor2 stress_from_energy(const CoefficientModel& m, const SymTensor2& C, double step) {
  if (!m.psi) throw ValidationError("stress_from_energy needs a model with psi");
  const double h = step > 0.0 ? step : default_stress_step(C);
  const auto L = canonical_members(m);
  const auto g = fd_gradient([&](const Mat3& X) { return eval_scalar_raw(m, X, L); }, C.to_mat(), h);
  return SymTensor2{{2 * g[0], 2 * g[1], 2 * g[2], 2 * g[3], 2 * g[4], 2 * g[5]}};
}

VerificationReport check_stress_equivariance(const CoefficientModel& m, std::size_t trials, double tol,
                                             std::uint64_t seed) {
  auto r = start(m.group, "stress_equivariance", trials, tol);
  Fold fold(r);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, t));
    const SymTensor2 C = rng.sym_tensor();
    const SymTensor2 S = stress_from_energy(m, C);
    const double h = default_stress_step(C);
    const double eff = std::max(tol, 50.0 * h * h);
    r.tolerance = std::max(r.tolerance, eff);
    for (const Mat3& Q : trial_elements(m.group, rng)) {
      const SymTensor2 rotated = stress_from_energy(m, conjugate(Q, C));
      fold.add(rel_tensor(conjugate(Q, S), rotated, S), eff, Q, C);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// model library and negative controls

std::vector<CoefficientModel> model_library(Group g, Form form) {
  const auto& b = group_basis(g, form);
  std::vector<CoefficientModel> out;
  for (int d = 0; d <= 2; ++d) {
    Rng rng(mix_seed(0x6c696272617279ULL, static_cast<std::uint64_t>(g) * 16 + static_cast<std::uint64_t>(form) * 4 +
                                                 static_cast<std::uint64_t>(d)));
    const auto monos = monomials_up_to(b.invariant_count(), d);
    CoefficientModel m;
    m.group = g;
    m.form = form;
    m.degree = d;
    m.coefficients.resize(b.generator_count());
    for (auto& p : m.coefficients)
      for (const auto& e : monos) p[e] = rng.uniform(-1.0, 1.0);
    Polynomial psi;
    for (const auto& e : monos) psi[e] = rng.uniform(-1.0, 1.0);
    m.psi = std::move(psi);
    out.push_back(symmetrize_model(m));
  }
  return out;
}

NegativeControl negative_control(Group g) {
  if (formulation_of(g) != Formulation::man_goddard)
    throw std::invalid_argument("negative controls exist only for Man-Goddard groups");
  const auto& set = structural_set(g);
  const auto& b = group_basis(g);
  const auto L = set.matrices();
  for (const auto& act : set.generator_actions) {
    if (act.action.is_identity()) continue;
    const auto kappa = derive_invariant_map(b, L, act.action.target);
    for (std::size_t m = 0; m < kappa.size(); ++m) {
      if (kappa[m] == static_cast<int>(m)) continue;
      NegativeControl nc;
      Exponents e(b.invariant_count(), 0);
      e[m] = 1;
      nc.model.group = g;
      nc.model.degree = 1;
      nc.model.coefficients.resize(b.generator_count());
      nc.model.coefficients[0][e] = 1.0;
      nc.model.psi = Polynomial{{e, 1.0}};
      nc.generator = act.generator;
      for (const auto& nm : generators_of(g))
        if (nm.label == act.generator) nc.Q = nm.matrix;
      nc.C = SymTensor2::diag(1.0, 2.0, 3.0);
      nc.invariant = b.invariant_labels[m];
      return nc;
    }
  }
  throw std::logic_error("no generator moves an invariant");
}

std::vector<VerificationReport> run_suite(Group g, Form form, const std::vector<NamedModel>& models,
                                          const SuiteOptions& opt) {
  std::vector<VerificationReport> out;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const auto& nm = models[k];
    const std::uint64_t s = mix_seed(opt.seed, k);
    auto tag = [&](VerificationReport r) {
      r.model = nm.name;
      out.push_back(std::move(r));
    };
    if (!nm.model.coefficients.empty()) tag(check_equivariance(nm.model, opt.trials, opt.tol, mix_seed(s, 1)));
    if (nm.model.psi) tag(check_scalar_invariance(nm.model, opt.trials, opt.tol, mix_seed(s, 2)));
    if (formulation_of(g) == Formulation::man_goddard)
      tag(audit_constraints(nm.model, opt.constraint_trials, kConstraintTol, mix_seed(s, 3)));
    if (nm.model.psi)
      tag(check_stress_equivariance(nm.model, opt.stress_trials, opt.stress_tol, mix_seed(s, 4)));
  }
  out.push_back(audit_redundancy_generators(g, form, opt.redundancy_trials, mix_seed(opt.seed, 0x100)));
  out.push_back(audit_redundancy_invariants(g, form, std::min<std::size_t>(opt.redundancy_trials, 20),
                                            mix_seed(opt.seed, 0x101)));
  return out;
}

}  // namespace strucrep
