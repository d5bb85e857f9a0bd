#include "strucrep/model_fit.hpp"

#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "strucrep/error.hpp"

namespace strucrep {

std::string_view kind_name(SampleKind k) { return k == SampleKind::scalar ? "scalar" : "tensor"; }

SampleKind parse_kind(std::string_view s) {
  if (s == "tensor") return SampleKind::tensor;
  if (s == "scalar") return SampleKind::scalar;
  throw UsageError("unknown sample kind '" + std::string(s) + "'; expected 'tensor' or 'scalar'");
}

SampleSet synthesize(const CoefficientModel& m, std::size_t n, std::uint64_t seed, SampleKind kind, double noise) {
  if (noise < 0.0 || !std::isfinite(noise)) throw UsageError("noise must be a finite non-negative number");
  SampleSet out;
  out.kind = kind;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(mix_seed(seed, i));
    Sample s;
    s.C = rng.sym_tensor();
    if (kind == SampleKind::tensor) {
      s.T = eval_tensor(m, s.C);
      if (noise > 0.0) {
        std::array<double, 6> c = s.T.components();
        for (double& x : c) x += noise * rng.normal();
        s.T = SymTensor2{c};
      }
    } else {
      s.psi = eval_scalar(m, s.C);
      if (noise > 0.0) s.psi += noise * rng.normal();
    }
    out.records.push_back(s);
  }
  return out;
}

std::vector<TiedTerm> tied_terms(Group g, Form form, int degree, SampleKind kind) {
  const auto& b = group_basis(g, form);
  const auto monos = monomials_up_to(b.invariant_count(), degree);
  const std::size_t slots = kind == SampleKind::tensor ? b.generator_count() : 1;
  std::set<std::pair<std::size_t, Exponents>> seen;
  std::vector<TiedTerm> out;
  for (std::size_t k = 0; k < slots; ++k)
    for (const auto& e : monos) {
      if (seen.count({k, e})) continue;
      CoefficientModel unit;
      unit.group = g;
      unit.form = form;
      unit.degree = degree;
      if (kind == SampleKind::tensor) {
        unit.coefficients.resize(b.generator_count());
        unit.coefficients[k][e] = 1.0;
      } else {
        unit.psi = Polynomial{{e, 1.0}};
      }
      CoefficientModel sym = symmetrize_model(unit);
      if (kind == SampleKind::tensor) {
        for (std::size_t j = 0; j < sym.coefficients.size(); ++j)
          for (const auto& term : sym.coefficients[j]) seen.insert({j, term.first});
      } else {
        for (const auto& term : *sym.psi) seen.insert({0, term.first});
      }
      out.push_back({std::move(sym)});
    }
  return out;
}

namespace {

constexpr double kRankTol = 1e-10;

void add_scaled(CoefficientModel& into, const CoefficientModel& term, double x) {
  for (std::size_t k = 0; k < term.coefficients.size(); ++k)
    for (const auto& [e, c] : term.coefficients[k]) into.coefficients[k][e] += x * c;
  if (term.psi)
    for (const auto& [e, c] : *term.psi) (*into.psi)[e] += x * c;
}

}  // namespace

FitResult fit_linear(Group g, const SampleSet& samples, const FitOptions& opt) {
  if (samples.records.empty()) throw ValidationError("cannot fit an empty sample set");
  if (opt.degree < 0 || opt.degree > 8) throw ValidationError("fit degree must lie in [0, 8]");
  if (opt.ridge < 0.0 || !std::isfinite(opt.ridge)) throw ValidationError("ridge must be finite and non-negative");
  const auto& b = group_basis(g, opt.form);
  const auto members = structural_set(g, opt.form).matrices();
  const auto terms = tied_terms(g, opt.form, opt.degree, samples.kind);
  const bool tensor = samples.kind == SampleKind::tensor;
  const Eigen::Index rows_per = tensor ? 6 : 1;
  const auto n = static_cast<Eigen::Index>(samples.records.size());
  const auto u = static_cast<Eigen::Index>(terms.size());

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n * rows_per, u);
  Eigen::VectorXd y(n * rows_per);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Sample& s = samples.records[static_cast<std::size_t>(r)];
    const Mat3 C = s.C.to_mat();
    const auto inv = invariants_with(b, C, members);
    if (tensor) {
      const auto gens = generators_with(b, C, members);
      const auto obs = mandel(s.T);
      for (int c = 0; c < 6; ++c) y(r * 6 + c) = obs[static_cast<std::size_t>(c)];
      for (Eigen::Index j = 0; j < u; ++j) {
        SymTensor2 T;
        const auto& coefs = terms[static_cast<std::size_t>(j)].basis.coefficients;
        for (std::size_t k = 0; k < coefs.size(); ++k)
          if (!coefs[k].empty()) T += eval_polynomial(coefs[k], inv) * gens[k];
        const auto col = mandel(T);
        for (int c = 0; c < 6; ++c) A(r * 6 + c, j) = col[static_cast<std::size_t>(c)];
      }
    } else {
      y(r) = s.psi;
      for (Eigen::Index j = 0; j < u; ++j) A(r, j) = eval_polynomial(*terms[static_cast<std::size_t>(j)].basis.psi, inv);
    }
  }

  // column scaling keeps the rank decision independent of monomial magnitude
  Eigen::VectorXd scale(u);
  for (Eigen::Index j = 0; j < u; ++j) {
    const double nrm = A.col(j).norm();
    scale(j) = nrm > 0.0 ? nrm : 1.0;
    A.col(j) /= scale(j);
  }
  Eigen::MatrixXd As = A;
  Eigen::VectorXd ys = y;
  if (opt.ridge > 0.0) {
    As.conservativeResize(A.rows() + u, Eigen::NoChange);
    As.bottomRows(u).setZero();
    for (Eigen::Index j = 0; j < u; ++j) As(A.rows() + j, j) = std::sqrt(opt.ridge) / scale(j);
    ys.conservativeResize(y.size() + u);
    ys.tail(u).setZero();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  std::size_t rank = 0;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(u);
  const Eigen::VectorXd uty = svd.matrixU().transpose() * ys;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(0) == 0.0 || sv(k) <= kRankTol * sv(0)) break;
    z += (uty(k) / sv(k)) * svd.matrixV().col(k);
    ++rank;
  }
  const Eigen::VectorXd pred = A * z;

  FitResult res;
  res.kind = samples.kind;
  res.rank = rank;
  res.unknowns = static_cast<std::size_t>(u);
  res.min_norm = rank < res.unknowns;
  res.condition = rank > 0 ? sv(0) / sv(static_cast<Eigen::Index>(rank) - 1) : 0.0;
  res.ridge = opt.ridge;

  CoefficientModel m;
  m.group = g;
  m.form = opt.form;
  m.degree = opt.degree;
  m.symmetrized = true;
  if (tensor)
    m.coefficients.resize(b.generator_count());
  else
    m.psi = Polynomial{};
  for (Eigen::Index j = 0; j < u; ++j) {
    const double x = z(j) / scale(j);
    if (x != 0.0) add_scaled(m, terms[static_cast<std::size_t>(j)].basis, x);
  }
  res.model = std::move(m);

  // residuals in stored components (off-diagonals undo the Mandel weight)
  double sq = 0.0;
  std::size_t count = 0;
  for (Eigen::Index r = 0; r < n; ++r) {
    double rec = 0.0;
    for (Eigen::Index c = 0; c < rows_per; ++c) {
      const double w = (tensor && c >= 3) ? std::sqrt(2.0) : 1.0;
      const double d = (pred(r * rows_per + c) - y(r * rows_per + c)) / w;
      sq += d * d;
      ++count;
      rec += w * w * d * d;
      res.max_residual = std::max(res.max_residual, std::abs(d));
    }
    res.residuals.push_back(std::sqrt(rec));
  }
  res.rms_residual = std::sqrt(sq / static_cast<double>(count));
  return res;
}

ResidualReport residual_report(const FitResult& fit, const SampleSet& holdout, std::uint64_t seed) {
  if (holdout.records.empty()) throw ValidationError("holdout sample set is empty");
  if (holdout.kind != fit.kind) throw ValidationError("holdout kind does not match the fitted kind");
  ResidualReport rep;
  rep.records = holdout.records.size();
  double sq = 0.0;
  std::size_t count = 0;
  for (const Sample& s : holdout.records) {
    if (fit.kind == SampleKind::tensor) {
      const auto d = (eval_tensor(fit.model, s.C) - s.T).components();
      for (double x : d) {
        sq += x * x;
        rep.max = std::max(rep.max, std::abs(x));
        ++count;
      }
    } else {
      const double d = eval_scalar(fit.model, s.C) - s.psi;
      sq += d * d;
      rep.max = std::max(rep.max, std::abs(d));
      ++count;
    }
  }
  rep.rms = std::sqrt(sq / static_cast<double>(count));
  rep.reaudit = fit.kind == SampleKind::tensor ? check_equivariance(fit.model, 20, 1e-9, seed)
                                               : check_scalar_invariance(fit.model, 20, 1e-9, seed);
  return rep;
}

}  // namespace strucrep
