#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "strucrep/error.hpp"
#include "strucrep/group_rep.hpp"
#include "strucrep/rng.hpp"

using namespace strucrep;

namespace {

Exponents unit(std::size_t n, std::size_t m) {
  Exponents e(n, 0);
  e[m] = 1;
  return e;
}

CoefficientModel empty_model(Group g, bool tensor, bool scalar, Form form = Form::standard) {
  CoefficientModel m;
  m.group = g;
  m.form = form;
  if (tensor) m.coefficients.resize(group_basis(g, form).generator_count());
  if (scalar) m.psi = Polynomial{};
  return m;
}

CoefficientModel random_model(Group g, std::uint64_t seed, int degree) {
  const auto& b = group_basis(g);
  CoefficientModel m = empty_model(g, true, true);
  m.degree = degree;
  Rng r(seed);
  for (const auto& e : monomials_up_to(b.invariant_count(), degree)) {
    for (auto& p : m.coefficients) p[e] = r.uniform(-1, 1);
    (*m.psi)[e] = r.uniform(-1, 1);
  }
  return m;
}

std::size_t order_of(std::span<const int> p) {
  std::vector<int> cur(p.begin(), p.end());
  for (std::size_t k = 1; k < 64; ++k) {
    bool id = true;
    for (std::size_t i = 0; i < cur.size(); ++i) id = id && cur[i] == static_cast<int>(i);
    if (id) return k;
    std::vector<int> next(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) next[i] = p[static_cast<std::size_t>(cur[i])];
    cur = next;
  }
  return 0;
}

}  // namespace

TEST_CASE("formulation split") {
  for (Group g : {Group::C_i, Group::C_2h, Group::D_2h, Group::C_inf_h, Group::D_inf_h, Group::K_h})
    CHECK(formulation_of(g) == Formulation::boehler_liu);
  for (Group g : {Group::C_4h, Group::D_4h, Group::C_3i, Group::D_3d, Group::C_6h, Group::D_6h, Group::T_h, Group::O_h})
    CHECK(formulation_of(g) == Formulation::man_goddard);
}

TEST_CASE("frozen basis sizes and numbering") {
  struct Row {
    std::size_t invariants, generators;
    int first;
  };
  const std::map<Group, Row> expect{
      {Group::C_i, {6, 6, 1}},      {Group::C_2h, {8, 13, 0}},    {Group::D_2h, {7, 7, 1}},   {Group::C_4h, {11, 13, 1}},
      {Group::D_4h, {7, 7, 1}},     {Group::C_3i, {6, 22, 0}},    {Group::D_3d, {6, 15, 0}},  {Group::C_6h, {9, 16, 0}},
      {Group::D_6h, {9, 12, 0}},    {Group::T_h, {7, 7, 1}},      {Group::O_h, {7, 7, 1}},    {Group::C_inf_h, {6, 8, 0}},
      {Group::D_inf_h, {5, 6, 0}},  {Group::K_h, {3, 3, 0}}};
  for (const auto& [g, r] : expect) {
    CAPTURE(group_name(g));
    const auto& b = group_basis(g);
    CHECK(b.invariant_count() == r.invariants);
    CHECK(b.generator_count() == r.generators);
    CHECK(b.first_index == r.first);
    CHECK(b.invariant_exprs.size() == r.invariants);
    CHECK(b.generator_exprs.size() == r.generators);
  }
  const auto& p2 = group_basis(Group::D_2h, Form::p2);
  CHECK(p2.invariant_count() == 7);
  CHECK(p2.generator_count() == 8);
}

TEST_CASE("invariant examples") {
  CHECK(invariant_basis(Group::K_h, SymTensor2::identity()).values == std::vector<double>{3, 3, 3});
  const double a = 1.5, b = -0.5, c = 2.0;
  const auto d = invariant_basis(Group::D_inf_h, SymTensor2::diag(a, b, c)).values;
  CHECK(d == std::vector<double>{a + b + c, a * a + b * b + c * c, a * a * a + b * b * b + c * c * c, c, c * c});
  CHECK(invariant_basis(Group::D_inf_h, SymTensor2::diag(1, 2, 3)).values == std::vector<double>{6, 14, 36, 3, 9});
  const auto ci = invariant_basis(Group::C_i, SymTensor2::identity());
  CHECK(ci.values == std::vector<double>{-2, -2, -2, 0, 0, 0});
  CHECK(ci.labels.front() == "tr(C K1^2)");
  CHECK(ci.labels.back() == "tr(C K2 K3)");
}

TEST_CASE("generator examples") {
  const auto k = generator_basis(Group::K_h, SymTensor2::diag(1, 2, 3));
  REQUIRE(k.values.size() == 3);
  CHECK(k.values[0] == SymTensor2::identity());
  CHECK(k.values[1] == SymTensor2::diag(1, 2, 3));
  CHECK(k.values[2] == SymTensor2::diag(1, 4, 9));

  CHECK(group_basis(Group::D_2h).generator_labels ==
        std::vector<std::string>{"M1", "M2", "M3", "M1 C + C M1", "M2 C + C M2", "M3 C + C M3", "C^2"});

  Rng r(1);
  const auto ci = generator_basis(Group::C_i, r.sym_tensor());
  REQUIRE(ci.values.size() == 6);
  CHECK(ci.values[0] == SymTensor2::diag(0, -1, -1));
  CHECK(ci.labels[3] == "K1 K2 + K2 K1");

  // every reduced generator symmetric for every group
  for (Group g : kAllGroups) {
    const auto gl = generator_basis(g, r.sym_tensor());
    CHECK(gl.values.size() == group_basis(g).generator_count());
  }
}

TEST_CASE("expression parser") {
  const auto& s = structural_set(Group::C_4h);
  const auto e = parse_expression("K3 C K3^2 - K3^2 C K3", s.members);
  REQUIRE(e.size() == 2);
  CHECK(e[1].sign == -1.0);
  CHECK(e[0].factors.size() == 3);
  CHECK(e[0].factors[1].symbol == Product::kSymC);
  CHECK(e[1].factors[0].power == 2);
  CHECK_THROWS_AS(parse_expression("Z9 C", s.members), std::invalid_argument);
  CHECK_THROWS_AS(parse_expression("C +", s.members), std::invalid_argument);
}

TEST_CASE("constraint tables") {
  const auto& d4 = constraint_table(Group::D_4h);
  REQUIRE(d4.rows.size() == 1);
  CHECK(d4.rows[0].generator == "C_4");
  CHECK(d4.rows[0].member_perm == std::vector<int>{1, 0, 2});
  CHECK(d4.rows[0].sigma == std::vector<int>{1, 0, 2, 4, 3, 5, 6});

  CHECK(constraint_table(Group::D_2h).rows.empty());
  CHECK(constraint_table(Group::D_2h).constraint_free);
  CHECK(constraint_table(Group::K_h).constraint_free);

  const auto& th = constraint_table(Group::T_h);
  REQUIRE(th.rows.size() == 1);
  CHECK(th.rows[0].sigma[0] == 2);  // alpha_1 -> alpha_3

  CHECK(constraint_table(Group::O_h).rows.size() == 2);
  CHECK(constraint_table(Group::D_3d).rows.size() == 2);
  CHECK(constraint_table(Group::D_6h).rows.size() == 2);
  for (Group g : {Group::C_4h, Group::C_3i, Group::C_6h}) CHECK(constraint_table(g).rows.size() == 1);
}

TEST_CASE("tabulated index maps are the inverse of the derived generator maps") {
  for (Group g : kAllGroups) {
    CAPTURE(group_name(g));
    const auto& b = group_basis(g);
    const auto members = structural_set(g).matrices();
    for (const auto& row : constraint_table(g).rows) {
      CAPTURE(row.generator);
      const auto tau = derive_generator_map(b, members, row.member_perm);
      for (std::size_t j = 0; j < tau.size(); ++j) CHECK(row.sigma[static_cast<std::size_t>(tau[j])] == static_cast<int>(j));
      // row order agrees with the member permutation order
      CHECK(order_of(row.sigma) == order_of(row.member_perm));
    }
  }
}

TEST_CASE("complete_index_map closes chains") {
  const std::vector<std::pair<int, int>> pairs{{1, 2}, {4, 5}};
  CHECK(complete_index_map(7, 1, pairs) == std::vector<int>{1, 0, 2, 4, 3, 5, 6});
  const std::vector<std::pair<int, int>> cyc{{0, 3}, {3, 1}};
  CHECK(complete_index_map(4, 0, cyc) == std::vector<int>{3, 0, 2, 1});
  const std::vector<std::pair<int, int>> bad{{1, 2}, {1, 3}};
  CHECK_THROWS_AS(complete_index_map(4, 1, bad), std::invalid_argument);
}

TEST_CASE("constraint group sizes") {
  CHECK(constraint_group(Group::D_4h).size() == 2);
  CHECK(constraint_group(Group::T_h).size() == 3);
  CHECK(constraint_group(Group::O_h).size() == 6);
  CHECK(constraint_group(Group::C_3i).size() == 3);
  CHECK(constraint_group(Group::D_3d).size() == 6);
  CHECK(constraint_group(Group::D_6h).size() == 6);
  CHECK(constraint_group(Group::C_6h).size() == 3);
  CHECK(constraint_group(Group::C_4h).size() == 2);
  CHECK(constraint_group(Group::D_2h).size() == 1);
}

TEST_CASE("monomials") {
  const auto m = monomials_up_to(3, 2);
  CHECK(m.size() == 10);
  CHECK(m.front() == Exponents{0, 0, 0});
  CHECK(m[1] == Exponents{1, 0, 0});
  CHECK(m[4] == Exponents{2, 0, 0});
  CHECK(monomials_up_to(7, 3).size() == 120);
  const std::vector<double> inv{2.0, 3.0};
  CHECK(eval_polynomial(Polynomial{{{2, 1}, 0.5}, {{0, 0}, 1.0}}, inv) == 7.0);
  CHECK(total_degree({2, 1, 3}) == 6);
}

TEST_CASE("symmetrization of the D_4h single-term model") {
  const auto& b = group_basis(Group::D_4h);
  CoefficientModel raw = empty_model(Group::D_4h, true, false);
  raw.coefficients[0][unit(b.invariant_count(), 0)] = 1.0;  // alpha_1 = tr(C M1)
  const auto sym = symmetrize_model(raw);
  CHECK(sym.symmetrized);

  const auto members = structural_set(Group::D_4h).matrices();
  const auto& row = constraint_table(Group::D_4h).rows[0];
  const auto swapped = permute_members(members, row.member_perm);
  Rng r(2);
  for (int t = 0; t < 20; ++t) {
    const Mat3 C = r.sym_tensor().to_mat();
    const auto lhs = eval_coefficients_raw(sym, C, members);
    const auto rhs = eval_coefficients_raw(sym, C, swapped);
    for (std::size_t i = 0; i < lhs.size(); ++i)
      CHECK(std::abs(lhs[i] - rhs[static_cast<std::size_t>(row.sigma[i])]) <= 1e-12);
  }
  // orbit average halves the seed term and places the other half on alpha_2
  const SymTensor2 T = eval_tensor(sym, SymTensor2::diag(1, 2, 3));
  CHECK(max_abs_diff(T.to_mat(), Mat3::diag(0.5, 1.0, 0.0)) <= 1e-15);
  for (const auto& q : point_group(Group::D_4h).elements) {
    const SymTensor2 C = r.sym_tensor();
    CHECK(max_abs_diff(eval_tensor(sym, conjugate(q, C)).to_mat(), conjugate(q, eval_tensor(sym, C)).to_mat()) <=
          1e-12);
  }
}

TEST_CASE("symmetrization is idempotent and fixes satisfying models") {
  Rng r(3);
  for (Group g : kLaueGroups) {
    CAPTURE(group_name(g));
    const auto once = symmetrize_model(random_model(g, 10 + static_cast<std::uint64_t>(g), 2));
    const auto twice = symmetrize_model(once);
    const auto members = structural_set(g).matrices();
    for (int t = 0; t < 10; ++t) {
      const Mat3 C = r.sym_tensor().to_mat();
      CHECK(max_abs_diff(eval_tensor_raw(once, C, members).to_mat(), eval_tensor_raw(twice, C, members).to_mat()) <=
            1e-12);
      CHECK(std::abs(eval_scalar_raw(once, C, members) - eval_scalar_raw(twice, C, members)) <= 1e-12);
    }
  }
}

TEST_CASE("O_h psi = tr(C M1) symmetrizes to tr(C)/3") {
  const auto& b = group_basis(Group::O_h);
  CoefficientModel raw = empty_model(Group::O_h, false, true);
  (*raw.psi)[unit(b.invariant_count(), 0)] = 1.0;
  const auto sym = symmetrize_model(raw);
  Rng r(4);
  for (int t = 0; t < 20; ++t) {
    const SymTensor2 C = r.sym_tensor();
    CHECK(std::abs(eval_scalar(sym, C) - C.trace() / 3.0) <= 1e-15);
  }
}

TEST_CASE("evaluation examples") {
  CoefficientModel k = empty_model(Group::K_h, true, true);
  (*k.psi)[{1, 0, 0}] = 1.0;
  k.coefficients[0][{0, 0, 0}] = 1.0;
  CHECK(eval_scalar(k, SymTensor2::diag(1, 2, 3)) == 6.0);
  Rng r(5);
  CHECK(eval_tensor(k, r.sym_tensor()) == SymTensor2::identity());

  CoefficientModel dinf = empty_model(Group::D_inf_h, false, true);
  (*dinf.psi)[{0, 0, 0, 1, 0}] = 1.0;
  CHECK(eval_scalar(dinf, SymTensor2::diag(1, 2, 3)) == 3.0);

  CoefficientModel ci = empty_model(Group::C_i, false, true);
  (*ci.psi)[{0, 0, 0, 1, 0, 0}] = 1.0;
  CHECK(eval_scalar(ci, SymTensor2::identity()) == 0.0);

  CoefficientModel d2 = empty_model(Group::D_2h, true, false);
  for (int i = 0; i < 3; ++i) d2.coefficients[static_cast<std::size_t>(i)][Exponents(7, 0)] = 1.0;
  CHECK(eval_tensor(d2, r.sym_tensor()) == SymTensor2::identity());
}

TEST_CASE("evaluation guards") {
  CoefficientModel raw = empty_model(Group::D_4h, true, true);
  raw.coefficients[0][Exponents(7, 0)] = 1.0;
  CHECK_THROWS_AS(eval_tensor(raw, SymTensor2::identity()), ValidationError);
  CHECK_THROWS_AS(eval_scalar(raw, SymTensor2::identity()), ValidationError);
  CHECK_NOTHROW(eval_tensor(symmetrize_model(raw), SymTensor2::identity()));

  CoefficientModel shape = empty_model(Group::D_2h, true, false);
  shape.coefficients.pop_back();
  CHECK_THROWS_AS(validate_model(shape), ValidationError);
  CHECK_THROWS_AS(eval_tensor(shape, SymTensor2::identity()), ValidationError);

  CoefficientModel badexp = empty_model(Group::K_h, false, true);
  (*badexp.psi)[{1, 0}] = 1.0;
  CHECK_THROWS_AS(validate_model(badexp), ValidationError);

  CoefficientModel deg = empty_model(Group::K_h, false, true);
  deg.degree = 1;
  (*deg.psi)[{2, 0, 0}] = 1.0;
  CHECK_THROWS_AS(validate_model(deg), ValidationError);

  CoefficientModel no_tensor = empty_model(Group::K_h, false, true);
  CHECK_THROWS_AS(eval_tensor(no_tensor, SymTensor2::identity()), ValidationError);
}

TEST_CASE("scalar invariance and tensor equivariance of symmetrized models") {
  for (Group g : kAllGroups) {
    CAPTURE(group_name(g));
    const auto m = symmetrize_model(random_model(g, 100 + static_cast<std::uint64_t>(g), 2));
    const auto& pg = point_group(g);
    Rng r(200 + static_cast<std::uint64_t>(g));
    for (int t = 0; t < 100; ++t) {
      const SymTensor2 C = r.sym_tensor();
      std::vector<Mat3> qs = pg.elements;
      if (pg.is_continuous) qs = {pg.sample(r)};
      const SymTensor2 T = eval_tensor(m, C);
      const double psi = eval_scalar(m, C);
      for (const auto& q : qs) {
        const SymTensor2 qc = conjugate(q, C);
        CHECK(std::abs(eval_scalar(m, qc) - psi) <= 1e-9 * (1.0 + std::abs(psi)));
        CHECK(max_abs_diff(eval_tensor(m, qc).to_mat(), conjugate(q, T).to_mat()) <= 1e-9 * (1.0 + T.max_abs()));
      }
    }
  }
}
