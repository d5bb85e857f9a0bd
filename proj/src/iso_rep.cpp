#include "strucrep/iso_rep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "strucrep/rng.hpp"

namespace strucrep {

namespace {

std::string a(std::size_t i) { return "A" + std::to_string(i + 1); }
std::string w(std::size_t i) { return "W" + std::to_string(i + 1); }

class InvariantBuilder {
 public:
  void add(std::string label, std::initializer_list<Mat3> factors) {
    out.labels.push_back("tr(" + std::move(label) + ")");
    out.values.push_back(trace_of_product(factors));
  }
  InvariantVector out;
};

class GeneratorBuilder {
 public:
  void add(std::string label, const Mat3& m) {
    out.values.push_back(symmetric_result(m, label.c_str()));
    out.labels.push_back(std::move(label));
  }
  GeneratorList out;
};

}  // namespace

SymTensor2 symmetric_result(const Mat3& m, const char* what) {
  const double defect = max_abs_diff(m, m.transpose());
  if (defect > 1e-12 * (1.0 + m.max_abs())) {
    std::ostringstream os;
    os << "generator " << what << " is not symmetric (defect " << defect << ")";
    throw std::logic_error(os.str());
  }
  return SymTensor2::symmetric_part(m);
}

InvariantVector iso_invariants(const ArgList& args) {
  std::vector<Mat3> A, A2, W, W2;
  for (const auto& s : args.sym) {
    A.push_back(s.to_mat());
    A2.push_back(A.back() * A.back());
  }
  for (const auto& s : args.skew) {
    W.push_back(s.to_mat());
    W2.push_back(W.back() * W.back());
  }
  const std::size_t na = A.size(), nw = W.size();
  InvariantBuilder b;

  for (std::size_t i = 0; i < na; ++i) {
    b.add(a(i), {A[i]});
    b.add(a(i) + "^2", {A2[i]});
    b.add(a(i) + "^3", {A2[i], A[i]});
  }
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = i + 1; j < na; ++j) {
      b.add(a(i) + " " + a(j), {A[i], A[j]});
      b.add(a(i) + "^2 " + a(j), {A2[i], A[j]});
      b.add(a(i) + " " + a(j) + "^2", {A[i], A2[j]});
      b.add(a(i) + "^2 " + a(j) + "^2", {A2[i], A2[j]});
    }
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = i + 1; j < na; ++j)
      for (std::size_t k = j + 1; k < na; ++k) b.add(a(i) + " " + a(j) + " " + a(k), {A[i], A[j], A[k]});
  for (std::size_t p = 0; p < nw; ++p) b.add(w(p) + "^2", {W2[p]});
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t p = 0; p < nw; ++p) {
      b.add(a(i) + " " + w(p) + "^2", {A[i], W2[p]});
      b.add(a(i) + "^2 " + w(p) + "^2", {A2[i], W2[p]});
      b.add(a(i) + "^2 " + w(p) + "^2 " + a(i) + " " + w(p), {A2[i], W2[p], A[i], W[p]});
    }
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = i + 1; j < na; ++j)
      for (std::size_t p = 0; p < nw; ++p) {
        b.add(a(i) + " " + a(j) + " " + w(p), {A[i], A[j], W[p]});
        b.add(a(i) + "^2 " + a(j) + " " + w(p), {A2[i], A[j], W[p]});
        b.add(a(i) + " " + a(j) + "^2 " + w(p), {A[i], A2[j], W[p]});
        b.add(a(i) + " " + w(p) + "^2 " + a(j) + " " + w(p), {A[i], W2[p], A[j], W[p]});
      }
  for (std::size_t p = 0; p < nw; ++p)
    for (std::size_t q = p + 1; q < nw; ++q) b.add(w(p) + " " + w(q), {W[p], W[q]});
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t p = 0; p < nw; ++p)
      for (std::size_t q = p + 1; q < nw; ++q) {
        b.add(a(i) + " " + w(p) + " " + w(q), {A[i], W[p], W[q]});
        b.add(a(i) + " " + w(p) + "^2 " + w(q), {A[i], W2[p], W[q]});
        b.add(a(i) + " " + w(p) + " " + w(q) + "^2", {A[i], W[p], W2[q]});
      }
  for (std::size_t p = 0; p < nw; ++p)
    for (std::size_t q = p + 1; q < nw; ++q)
      for (std::size_t r = q + 1; r < nw; ++r) b.add(w(p) + " " + w(q) + " " + w(r), {W[p], W[q], W[r]});
  return std::move(b.out);
}

GeneratorList iso_generators(const ArgList& args) {
  std::vector<Mat3> A, A2, W, W2;
  for (const auto& s : args.sym) {
    A.push_back(s.to_mat());
    A2.push_back(A.back() * A.back());
  }
  for (const auto& s : args.skew) {
    W.push_back(s.to_mat());
    W2.push_back(W.back() * W.back());
  }
  const std::size_t na = A.size(), nw = W.size();
  GeneratorBuilder b;

  b.add("I", Mat3::identity());
  for (std::size_t i = 0; i < na; ++i) {
    b.add(a(i), A[i]);
    b.add(a(i) + "^2", A2[i]);
  }
  for (std::size_t p = 0; p < nw; ++p) b.add(w(p) + "^2", W2[p]);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = i + 1; j < na; ++j) {
      const std::string x = a(i), y = a(j);
      b.add(x + " " + y + " + " + y + " " + x, A[i] * A[j] + A[j] * A[i]);
      b.add(x + "^2 " + y + " + " + y + " " + x + "^2", A2[i] * A[j] + A[j] * A2[i]);
      b.add(x + " " + y + "^2 + " + y + "^2 " + x, A[i] * A2[j] + A2[j] * A[i]);
    }
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t p = 0; p < nw; ++p) {
      const std::string x = a(i), v = w(p);
      b.add(x + " " + v + " - " + v + " " + x, A[i] * W[p] - W[p] * A[i]);
      b.add(x + "^2 " + v + " - " + v + " " + x + "^2", A2[i] * W[p] - W[p] * A2[i]);
      b.add(v + " " + x + " " + v, W[p] * A[i] * W[p]);
      b.add(v + " " + x + " " + v + "^2 - " + v + "^2 " + x + " " + v,
            W[p] * A[i] * W2[p] - W2[p] * A[i] * W[p]);
    }
  for (std::size_t p = 0; p < nw; ++p)
    for (std::size_t q = p + 1; q < nw; ++q) {
      const std::string u = w(p), v = w(q);
      b.add(u + " " + v + " + " + v + " " + u, W[p] * W[q] + W[q] * W[p]);
      b.add(u + " " + v + "^2 - " + v + "^2 " + u, W[p] * W2[q] - W2[q] * W[p]);
      b.add(u + "^2 " + v + " - " + v + " " + u + "^2", W2[p] * W[q] - W[q] * W2[p]);
    }
  return std::move(b.out);
}

double span_residual(std::span<const SymTensor2> retained, const SymTensor2& candidate) {
  const auto c = mandel(candidate);
  Eigen::Map<const Eigen::Matrix<double, 6, 1>> cv(c.data());
  const double cnorm = cv.norm();
  if (cnorm == 0.0) return 0.0;
  if (retained.empty()) return 1.0;
  Eigen::MatrixXd g(6, static_cast<Eigen::Index>(retained.size()));
  for (std::size_t k = 0; k < retained.size(); ++k) {
    const auto col = mandel(retained[k]);
    for (int r = 0; r < 6; ++r) g(r, static_cast<Eigen::Index>(k)) = col[static_cast<std::size_t>(r)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 1.0;
  Eigen::Matrix<double, 6, 1> r = cv;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) <= 1e-12 * s(0)) break;
    const auto u = svd.matrixU().col(k);
    r -= u.dot(cv) * u;
  }
  return r.norm() / cnorm;
}

SpanReport span_check(const TensorListFn& retained, const TensorFn& candidate, std::uint64_t seed,
                      std::size_t trials, double tol) {
  if (trials == 0) throw std::invalid_argument("span_check: trials must be at least 1");
  SpanReport rep;
  rep.tolerance = tol;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, t));
    const SymTensor2 C = rng.sym_tensor();
    const auto gens = retained(C);
    const bool all_zero = std::all_of(gens.begin(), gens.end(), [](const SymTensor2& g) { return g.max_abs() == 0.0; });
    ++rep.trials;
    if (all_zero) {
      ++rep.skipped;
      continue;
    }
    rep.max_residual = std::max(rep.max_residual, span_residual(gens, candidate(C)));
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

}  // namespace strucrep
