#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "strucrep/error.hpp"
#include "strucrep/group_catalog.hpp"

using namespace strucrep;

namespace {

const double kR3 = std::sqrt(3.0) / 2.0;

bool near(const Mat3& a, const Mat3& b, double tol = 1e-12) { return max_abs_diff(a, b) <= tol; }

std::vector<std::string> labels(const StructuralTensorSet& s) {
  std::vector<std::string> out;
  for (const auto& m : s.members) out.push_back(m.label);
  return out;
}

const SignedPermutation& action(const StructuralTensorSet& s, const std::string& gen) {
  for (const auto& a : s.generator_actions)
    if (a.generator == gen) return a.action;
  FAIL("no action for " << gen);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("names round-trip and unknown names are usage errors") {
  for (Group g : kAllGroups) CHECK(parse_group(group_name(g)) == g);
  CHECK_THROWS_AS(parse_group("D_5h"), UsageError);
  CHECK_THROWS_AS(parse_group("d_4h"), UsageError);
  CHECK(is_continuous(Group::K_h));
  CHECK_FALSE(is_continuous(Group::O_h));
  CHECK(parse_form("p2") == Form::p2);
  CHECK_THROWS_AS(parse_form("x"), UsageError);
}

TEST_CASE("generator tables") {
  auto gl = [](Group g) {
    std::vector<std::string> v;
    for (const auto& n : generators_of(g)) v.push_back(n.label);
    return v;
  };
  CHECK(gl(Group::C_i) == std::vector<std::string>{"-I"});
  CHECK(gl(Group::D_4h) == std::vector<std::string>{"C_4", "C_2x", "-I"});
  CHECK(gl(Group::T_h) == std::vector<std::string>{"C_2x", "C_2y", "Q_p", "-I"});
  CHECK(gl(Group::O_h) == std::vector<std::string>{"C_4x", "C_2y", "Q_p", "-I"});
  CHECK(gl(Group::K_h).empty());
  CHECK(point_group(Group::K_h).is_continuous);

  const auto c3i = generators_of(Group::C_3i);
  REQUIRE(c3i.size() == 2);
  CHECK(c3i[0].matrix == Mat3{{-0.5, kR3, 0, -kR3, -0.5, 0, 0, 0, 1}});
  CHECK(c3i[1].matrix == -1.0 * Mat3::identity());
  for (Group g : kLaueGroups)
    for (const auto& n : generators_of(g)) CHECK(is_orthogonal(n.matrix));
}

TEST_CASE("generator matrices pinned entrywise") {
  CHECK(ops::inversion() == Mat3{{-1, 0, 0, 0, -1, 0, 0, 0, -1}});
  CHECK(ops::c2() == Mat3{{-1, 0, 0, 0, -1, 0, 0, 0, 1}});
  CHECK(ops::c2x() == Mat3{{1, 0, 0, 0, -1, 0, 0, 0, -1}});
  CHECK(ops::c2y() == Mat3{{-1, 0, 0, 0, 1, 0, 0, 0, -1}});
  CHECK(ops::c4() == Mat3{{0, 1, 0, -1, 0, 0, 0, 0, 1}});
  CHECK(ops::c4x() == Mat3{{1, 0, 0, 0, 0, 1, 0, -1, 0}});
  CHECK(ops::c3() == Mat3{{-0.5, kR3, 0, -kR3, -0.5, 0, 0, 0, 1}});
  CHECK(ops::c6() == Mat3{{0.5, kR3, 0, -kR3, 0.5, 0, 0, 0, 1}});
  CHECK(ops::qp() == Mat3{{0, 0, 1, 1, 0, 0, 0, 1, 0}});
}

TEST_CASE("closure orders and product closure") {
  const std::map<Group, std::size_t> orders{{Group::C_i, 2},  {Group::C_2h, 4}, {Group::D_2h, 8},  {Group::C_4h, 8},
                                            {Group::D_4h, 16}, {Group::C_3i, 6}, {Group::D_3d, 12}, {Group::C_6h, 12},
                                            {Group::D_6h, 24}, {Group::T_h, 24}, {Group::O_h, 48}};
  for (const auto& [g, n] : orders) {
    CAPTURE(group_name(g));
    const auto& els = point_group(g).elements;
    REQUIRE(els.size() == n);
    CHECK(els.front() == Mat3::identity());
    CHECK(find_match(els, -1.0 * Mat3::identity()).has_value());
    for (const auto& a : els)
      for (const auto& b : els) CHECK(find_match(els, a * b).has_value());
  }
  CHECK_THROWS_AS(enumerate_group(Group::K_h), std::invalid_argument);
  // C_6 alone has infinite order once perturbed off the lattice
  const Mat3 bad = rotation_about_k(1.0);
  CHECK_THROWS_AS(close_under_products(std::vector<Mat3>{bad}, 200), std::runtime_error);
}

TEST_CASE("continuous samplers stay inside their groups") {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const Mat3 a = point_group(Group::C_inf_h).sample(rng);
    CHECK(is_orthogonal(a));
    // C_inf_h fixes k up to the centre
    CHECK(std::abs(std::abs(a(2, 2)) - 1.0) <= 1e-14);
    CHECK(std::abs(a(0, 2)) + std::abs(a(1, 2)) <= 1e-14);
    const Mat3 b = point_group(Group::D_inf_h).sample(rng);
    CHECK(std::abs(std::abs(b(2, 2)) - 1.0) <= 1e-14);
    CHECK(is_orthogonal(point_group(Group::K_h).sample(rng)));
  }
}

TEST_CASE("canonical structural sets") {
  const auto& d4 = structural_set(Group::D_4h);
  CHECK(labels(d4) == std::vector<std::string>{"M1", "M2", "M3"});
  CHECK(d4.members[0].tensor == outer(kUnitI, kUnitI));
  CHECK(d4.members[1].tensor == outer(kUnitJ, kUnitJ));
  CHECK(d4.members[2].tensor == outer(kUnitK, kUnitK));

  const auto& c3i = structural_set(Group::C_3i);
  CHECK(labels(c3i) == std::vector<std::string>{"T1", "T2", "T3", "K3"});
  const Vec3 u{1, 0, 1};
  CHECK(near(c3i.members[0].tensor, outer(u, u)));
  CHECK(near(c3i.members[1].tensor, conjugate(ops::c3(), c3i.members[0].tensor)));
  CHECK(near(c3i.members[2].tensor, conjugate(ops::c3(), c3i.members[1].tensor)));
  CHECK(c3i.members[3].kind == MemberKind::skew);
  CHECK(c3i.members[3].tensor == eps_contract(kUnitK).to_mat());

  const auto& dinf = structural_set(Group::D_inf_h);
  REQUIRE(dinf.size() == 1);
  CHECK(dinf.members[0].tensor == outer(kUnitK, kUnitK));

  const auto& ci = structural_set(Group::C_i);
  CHECK(labels(ci) == std::vector<std::string>{"K1", "K2", "K3"});
  CHECK(ci.members[0].tensor == Mat3{{0, 0, 0, 0, 0, 1, 0, -1, 0}});

  CHECK(labels(structural_set(Group::D_2h, Form::p2)) == std::vector<std::string>{"P2"});
  CHECK(structural_set(Group::D_2h, Form::p2).members[0].tensor == Mat3::diag(1, -1, 0));
  CHECK_THROWS_AS(structural_set(Group::D_4h, Form::p2), UsageError);
}

TEST_CASE("every element stabilizes its set") {
  for (Group g : kLaueGroups) {
    CAPTURE(group_name(g));
    const auto& s = structural_set(g);
    for (const auto& q : point_group(g).elements) {
      CHECK(stabilizes(q, s.members));
      CHECK(action_on_set(q, s.members).is_unsigned());
    }
    CHECK(action_on_set(-1.0 * Mat3::identity(), s.members).is_identity());
  }
  const auto& s = structural_set(Group::D_2h, Form::p2);
  for (const auto& q : point_group(Group::D_2h).elements) CHECK(stabilizes(q, s.members));
}

TEST_CASE("generator actions compose homomorphically") {
  for (Group g : kLaueGroups) {
    CAPTURE(group_name(g));
    const auto& s = structural_set(g);
    const auto& els = point_group(g).elements;
    for (const auto& a : els)
      for (const auto& b : els) {
        const auto pa = action_on_set(a, s.members), pb = action_on_set(b, s.members);
        CHECK(action_on_set(a * b, s.members) == pa.after(pb));
      }
  }
}

TEST_CASE("reference permutation tables") {
  const auto& d4 = structural_set(Group::D_4h);
  CHECK(action(d4, "C_4").target == std::vector<int>{1, 0, 2});
  CHECK(action(d4, "C_2x").is_identity());

  const auto& oh = structural_set(Group::O_h);
  CHECK(action(oh, "Q_p").target == std::vector<int>{1, 2, 0});
  CHECK(action_on_set(ops::qp(), oh.members).target == std::vector<int>{1, 2, 0});
  CHECK(action(oh, "C_4x").target == std::vector<int>{0, 2, 1});
  CHECK(action(structural_set(Group::T_h), "Q_p").target == std::vector<int>{1, 2, 0});

  CHECK(action(structural_set(Group::C_3i), "C_3").target == std::vector<int>{1, 2, 0, 3});
  const auto& d3d = structural_set(Group::D_3d);
  CHECK(labels(d3d) == std::vector<std::string>{"D1", "D2", "D3"});
  CHECK(action(d3d, "C_3").target == std::vector<int>{1, 2, 0});
  CHECK(action(d3d, "C_2x").target == std::vector<int>{0, 2, 1});

  const auto& d6h = structural_set(Group::D_6h);
  CHECK(labels(d6h) == std::vector<std::string>{"H1", "H2", "H3"});
  CHECK(action(d6h, "C_6").target == std::vector<int>{1, 2, 0});
  const auto c2x = action(d6h, "C_2x").target;
  // C_2x is an involution fixing exactly one member
  int fixed = 0;
  for (int k = 0; k < 3; ++k) fixed += c2x[static_cast<std::size_t>(k)] == k;
  CHECK(fixed == 1);
  CHECK(action(structural_set(Group::C_6h), "C_6").target == std::vector<int>{1, 2, 0, 3});
  CHECK(action(structural_set(Group::C_4h), "C_4").target == std::vector<int>{1, 0, 2, 3});
  for (Group g : {Group::C_i, Group::C_2h, Group::D_2h})
    for (const auto& a : structural_set(g).generator_actions) CHECK(a.action.is_identity());
}

TEST_CASE("non-stabilizing operation is reported") {
  const Mat3 q = rotation_about_k(0.3);
  CHECK_FALSE(stabilizes(q, structural_set(Group::D_4h).members));
  try {
    action_on_set(q, structural_set(Group::D_4h).members);
    FAIL("expected NotStabilizedError");
  } catch (const NotStabilizedError& e) {
    CHECK(e.member() == "M1");
    CHECK(e.nearest_distance() > kMatchTol);
  }
}

TEST_CASE("build_set_from_seed") {
  const double h = std::sqrt(2.0) / 2.0;
  const Vec3 v1{h, h, 1.0};
  const auto a1 = build_set_from_seed(Group::D_4h, std::vector<Vec3>{v1}, false);
  CHECK(a1.size() == 4);
  CHECK(near(a1.members[0].tensor, outer(v1, v1)));
  CHECK(near(a1.members[1].tensor, conjugate(ops::c4(), a1.members[0].tensor)));
  for (const auto& q : point_group(Group::D_4h).elements) CHECK(stabilizes(q, a1.members));

  const auto a2 = build_set_from_seed(Group::D_4h, std::vector<Vec3>{{h, h, 0.0}, kUnitK}, false);
  CHECK(a2.size() == 3);

  const auto a3 = build_set_from_seed(Group::D_4h, std::vector<Vec3>{kUnitI, kUnitJ, kUnitK}, false);
  REQUIRE(a3.size() == 3);
  for (const auto& m : structural_set(Group::D_4h).members) CHECK(find_match(a3.matrices(), m.tensor).has_value());

  const auto with_k = build_set_from_seed(Group::C_4h, std::vector<Vec3>{kUnitI}, true);
  CHECK(with_k.size() == 3);
  CHECK(with_k.members.back().label == "K3");
  CHECK(with_k.members.back().kind == MemberKind::skew);

  // generic seed in O_h: orbit of a generic line has 24 lines, over a cap of 10
  CHECK_THROWS_AS(build_set_from_seed(Group::O_h, std::vector<Vec3>{{0.3, 0.5, 0.9}}, false, 10), std::runtime_error);
  CHECK(build_set_from_seed(Group::O_h, std::vector<Vec3>{{0.3, 0.5, 0.9}}, false).size() == 24);
  CHECK_THROWS_AS(build_set_from_seed(Group::K_h, std::vector<Vec3>{kUnitK}, false), std::invalid_argument);
}

TEST_CASE("stabilizers within a supergroup") {
  const auto& oh = point_group(Group::O_h).elements;
  CHECK(stabilizer_within(structural_set(Group::D_4h), oh).size() == 48);
  CHECK(stabilizer_within(structural_set(Group::O_h), oh).size() == 48);
  const auto& c3i = point_group(Group::C_3i).elements;
  CHECK(stabilizer_within(structural_set(Group::C_3i), c3i).size() == 6);
  const std::vector<Mat3> id{Mat3::identity()};
  for (Group g : kLaueGroups) CHECK(stabilizer_within(structural_set(g), id).size() == 1);

  // each set is stabilized by at least its own group within the reference
  for (Group g : kLaueGroups) {
    const auto ref = stabilizer_reference(g);
    REQUIRE(ref.has_value());
    CHECK(stabilizer_within(structural_set(g), point_group(*ref).elements).size() >= point_group(g).order());
  }
  CHECK_FALSE(stabilizer_reference(Group::K_h).has_value());
}
