#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "strucrep/error.hpp"
#include "strucrep/verify.hpp"

using namespace strucrep;

namespace {

CoefficientModel scalar_model(Group g, const Exponents& e, double c = 1.0) {
  CoefficientModel m;
  m.group = g;
  m.psi = Polynomial{{e, c}};
  return m;
}

Exponents unit(Group g, std::size_t k, int power = 1) {
  Exponents e(group_basis(g).invariant_count(), 0);
  e[k] = power;
  return e;
}

}  // namespace

TEST_CASE("K_h equivariance with constant coefficients") {
  CoefficientModel m;
  m.group = Group::K_h;
  m.coefficients.assign(3, Polynomial{{{0, 0, 0}, 1.0}});
  const auto r = check_equivariance(m, 200, 1e-9, 1);
  CHECK(r.pass);
  CHECK(r.max_violation <= 1e-12);
  CHECK(r.check == "equivariance");
  CHECK(r.group == "K_h");
  CHECK(r.witnesses.empty());
  const auto s = check_scalar_invariance(scalar_model(Group::K_h, {0, 0, 1}), 200, 1e-9, 2);
  CHECK(s.pass);
  CHECK(s.max_violation <= 1e-12);
}

TEST_CASE("library models pass every Laue and continuous sweep") {
  for (Group g : kAllGroups) {
    CAPTURE(group_name(g));
    const auto lib = model_library(g);
    REQUIRE(lib.size() >= 3);
    for (const auto& m : lib) {
      CHECK(m.symmetrized);
      CHECK(check_equivariance(m, 50, 1e-9, 3).pass);
      CHECK(check_scalar_invariance(m, 50, 1e-9, 4).pass);
      CHECK(audit_constraints(m, 20, kConstraintTol, 5).pass);
    }
  }
}

TEST_CASE("negative controls fail at their pinned witness") {
  for (Group g : kLaueGroups) {
    if (formulation_of(g) != Formulation::man_goddard) continue;
    CAPTURE(group_name(g));
    const auto nc = negative_control(g);
    CHECK_FALSE(nc.model.symmetrized);
    CHECK(nc.C == SymTensor2::diag(1, 2, 3));
    CHECK(equivariance_violation(nc.model, nc.C, nc.Q) > 1e-4);
    const auto r = check_equivariance(nc.model, 20, 1e-9, 6);
    CHECK_FALSE(r.pass);
    CHECK(r.witnesses.size() <= kMaxWitnesses);
    CHECK_FALSE(r.witnesses.empty());
    for (const auto& w : r.witnesses) CHECK(w.violation > r.tolerance);
    CHECK_FALSE(check_scalar_invariance(nc.model, 20, 1e-9, 7).pass);
    CHECK_FALSE(check_stress_equivariance(nc.model, 5, kStressTol, 8).pass);
    CHECK_FALSE(audit_constraints(nc.model, 5, kConstraintTol, 9).pass);
  }
  // D_4h: alpha_1 = tr(C M1), alpha_2 = 0 fails under C_4 by more than 1e-3
  const auto d4 = negative_control(Group::D_4h);
  CHECK(d4.generator == "C_4");
  CHECK(d4.invariant == "tr(C M1)");
  CHECK(equivariance_violation(d4.model, d4.C, ops::c4()) > 1e-3);
  CHECK(negative_control(Group::D_6h).invariant == "tr(C H1)");
  CHECK_THROWS_AS(negative_control(Group::D_2h), std::invalid_argument);
}

TEST_CASE("C_6h raw tr(C H1) fails scalar invariance") {
  const auto& b = group_basis(Group::C_6h);
  std::size_t k = 0;
  while (b.invariant_labels[k] != "tr(C H1)") ++k;
  const auto m = scalar_model(Group::C_6h, unit(Group::C_6h, k));
  CHECK(invariance_violation(m, SymTensor2::diag(1, 2, 3), ops::c6()) > 1e-4);
  CHECK_FALSE(check_scalar_invariance(m, 10, 1e-9, 1).pass);
  // the symmetrized version passes over all 12 elements
  CHECK(check_scalar_invariance(symmetrize_model(m), 50, 1e-9, 1).pass);
}

TEST_CASE("constraint audits") {
  CoefficientModel th = model_library(Group::T_h)[2];
  const auto r = audit_constraints(th, 50, kConstraintTol, 10);
  CHECK(r.pass);
  CHECK(r.max_violation <= 1e-12);

  CoefficientModel d3;
  d3.group = Group::D_3d;
  d3.coefficients.assign(group_basis(Group::D_3d).generator_count(), Polynomial{{Exponents(6, 0), 0.7}});
  const auto c = audit_constraints(d3, 10, kConstraintTol, 11);
  CHECK(c.pass);
  CHECK(c.max_violation == 0.0);

  const auto bl = audit_constraints(model_library(Group::D_2h)[1], 10, kConstraintTol, 12);
  CHECK(bl.pass);
  CHECK_FALSE(bl.note.empty());

  for (Group g : kLaueGroups)
    for (const auto& row : constraint_table(g).rows) CHECK(index_map_order_consistent(row));
  ConstraintRow bad = constraint_table(Group::D_4h).rows[0];
  bad.sigma = {1, 2, 0, 3, 4, 5, 6};  // order 3 against an order-2 permutation
  CHECK_FALSE(index_map_order_consistent(bad));
}

TEST_CASE("redundancy audits") {
  for (Group g : kAllGroups) {
    CAPTURE(group_name(g));
    const auto gen = audit_redundancy_generators(g, Form::standard, 100, 13);
    CHECK(gen.pass);
    CHECK(gen.max_violation <= kSpanTol);
    CHECK(gen.trials == 100);
    const auto inv = audit_redundancy_invariants(g, Form::standard, 20, 14);
    CHECK(inv.pass);
  }
  CHECK(audit_redundancy_generators(Group::D_2h, Form::p2, 50, 15).pass);
  CHECK(audit_redundancy_invariants(Group::D_2h, Form::p2, 10, 15).pass);
}

TEST_CASE("finite-difference stress") {
  const SymTensor2 C = SymTensor2::diag(1, 2, 3);
  const auto trc = scalar_model(Group::K_h, {1, 0, 0});
  CHECK(max_abs_diff(stress_from_energy(trc, C).to_mat(), 2.0 * Mat3::identity()) <= 1e-8);
  const auto trc2 = scalar_model(Group::K_h, {0, 1, 0});
  CHECK(max_abs_diff(stress_from_energy(trc2, C).to_mat(), Mat3::diag(4, 8, 12)) <= 1e-8);

  Rng r(16);
  const auto m3 = scalar_model(Group::D_inf_h, {0, 0, 0, 1, 0});
  for (int t = 0; t < 20; ++t) {
    const SymTensor2 X = r.sym_tensor();
    CHECK(max_abs_diff(stress_from_energy(m3, X).to_mat(), 2.0 * outer(kUnitK, kUnitK)) <= 1e-8);
    // tr C^2 off the diagonal: S = 4C
    CHECK(max_abs_diff(stress_from_energy(trc2, X).to_mat(), 4.0 * X.to_mat()) <= 1e-8);
  }
  CHECK(default_stress_step(C) == doctest::Approx(4e-5));

  CHECK(check_stress_equivariance(scalar_model(Group::K_h, {0, 0, 1}), 20, kStressTol, 17).pass);
  for (Group g : kAllGroups) {
    CAPTURE(group_name(g));
    CHECK(check_stress_equivariance(model_library(g)[2], 5, kStressTol, 18).pass);
  }
}

TEST_CASE("reports are deterministic and order independent of the caller") {
  const auto m = model_library(Group::O_h)[2];
  const auto a = check_equivariance(m, 30, 1e-9, 99);
  const auto b = check_equivariance(m, 30, 1e-9, 99);
  CHECK(a.max_violation == b.max_violation);
  const auto nc = negative_control(Group::O_h).model;
  const auto w1 = check_equivariance(nc, 10, 1e-9, 5).witnesses;
  const auto w2 = check_equivariance(nc, 10, 1e-9, 5).witnesses;
  REQUIRE(w1.size() == w2.size());
  for (std::size_t k = 0; k < w1.size(); ++k) {
    CHECK(w1[k].Q == w2[k].Q);
    CHECK(w1[k].C == w2[k].C);
  }
  // pass <=> max_violation <= tolerance
  for (const auto& r : {a, check_equivariance(nc, 10, 1e-9, 5)}) CHECK(r.pass == (r.max_violation <= r.tolerance));
}

TEST_CASE("continuous groups at arbitrary angles") {
  for (Group g : {Group::C_inf_h, Group::D_inf_h, Group::K_h}) {
    CAPTURE(group_name(g));
    const auto m = model_library(g)[2];
    // 200 trials x 5 samples = 1,000 orthogonal Q
    const auto r = check_equivariance(m, 200, 1e-9, 21);
    CHECK(r.pass);
    CHECK(check_scalar_invariance(m, 200, 1e-9, 22).pass);
  }
}

TEST_CASE("suite runner") {
  SuiteOptions opt;
  opt.trials = 20;
  opt.redundancy_trials = 20;
  opt.seed = 7;
  std::vector<NamedModel> models;
  for (const auto& m : model_library(Group::D_4h)) models.push_back({"m", m});
  const auto reports = run_suite(Group::D_4h, Form::standard, models, opt);
  CHECK(reports.size() == 3 * 4 + 2);
  for (const auto& r : reports) CHECK(r.pass);
}
