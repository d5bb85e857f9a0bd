#include "strucrep/group_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "strucrep/error.hpp"

namespace strucrep {

namespace {

constexpr std::array<std::string_view, 14> kNames{"C_i",  "C_2h", "D_2h", "C_4h",    "D_4h",    "C_3i", "D_3d",
                                                  "C_6h", "D_6h", "T_h",  "O_h",     "C_inf_h", "D_inf_h", "K_h"};

const double kHalfRoot3 = std::sqrt(3.0) / 2.0;

}  // namespace

std::string_view group_name(Group g) { return kNames[static_cast<std::size_t>(g)]; }

Group parse_group(std::string_view name) {
  for (std::size_t k = 0; k < kNames.size(); ++k)
    if (kNames[k] == name) return static_cast<Group>(k);
  std::ostringstream os;
  os << "unknown group '" << name << "'; expected one of:";
  for (auto n : kNames) os << ' ' << n;
  throw UsageError(os.str());
}

bool is_continuous(Group g) { return g == Group::C_inf_h || g == Group::D_inf_h || g == Group::K_h; }

std::string_view form_name(Form f) { return f == Form::p2 ? "p2" : "standard"; }

Form parse_form(std::string_view name) {
  if (name == "standard") return Form::standard;
  if (name == "p2") return Form::p2;
  throw UsageError("unknown basis form '" + std::string(name) + "'; expected 'standard' or 'p2'");
}

// ---------------------------------------------------------------------------
// generator matrices

namespace ops {
Mat3 inversion() { return Mat3::diag(-1.0, -1.0, -1.0); }
Mat3 c2() { return Mat3::diag(-1.0, -1.0, 1.0); }
Mat3 c2x() { return Mat3::diag(1.0, -1.0, -1.0); }
Mat3 c2y() { return Mat3::diag(-1.0, 1.0, -1.0); }
Mat3 c4() { return Mat3{{0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0}}; }
Mat3 c4x() { return Mat3{{1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -1.0, 0.0}}; }
Mat3 c3() { return Mat3{{-0.5, kHalfRoot3, 0.0, -kHalfRoot3, -0.5, 0.0, 0.0, 0.0, 1.0}}; }
Mat3 c6() { return Mat3{{0.5, kHalfRoot3, 0.0, -kHalfRoot3, 0.5, 0.0, 0.0, 0.0, 1.0}}; }
Mat3 qp() { return Mat3{{0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0}}; }
}  // namespace ops

std::vector<NamedMatrix> generators_of(Group g) {
  const NamedMatrix inv{"-I", ops::inversion()};
  const NamedMatrix c2{"C_2", ops::c2()};
  const NamedMatrix c2x{"C_2x", ops::c2x()};
  const NamedMatrix c2y{"C_2y", ops::c2y()};
  const NamedMatrix c4{"C_4", ops::c4()};
  const NamedMatrix c4x{"C_4x", ops::c4x()};
  const NamedMatrix c3{"C_3", ops::c3()};
  const NamedMatrix c6{"C_6", ops::c6()};
  const NamedMatrix qp{"Q_p", ops::qp()};
  switch (g) {
    case Group::C_i: return {inv};
    case Group::C_2h: return {c2, inv};
    case Group::D_2h: return {c2, c2x, inv};
    case Group::C_4h: return {c4, inv};
    case Group::D_4h: return {c4, c2x, inv};
    case Group::C_3i: return {c3, inv};
    case Group::D_3d: return {c3, c2x, inv};
    case Group::C_6h: return {c6, inv};
    case Group::D_6h: return {c6, c2x, inv};
    case Group::T_h: return {c2x, c2y, qp, inv};
    case Group::O_h: return {c4x, c2y, qp, inv};
    case Group::C_inf_h:
    case Group::D_inf_h:
    case Group::K_h: return {};
  }
  return {};
}

// ---------------------------------------------------------------------------
// closure

std::optional<std::size_t> find_match(std::span<const Mat3> list, const Mat3& target, double tol) {
  std::optional<std::size_t> hit;
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (max_abs_diff(list[k], target) <= tol) {
      if (hit) throw std::logic_error("find_match: two candidates within tolerance of the same target");
      hit = k;
    }
  }
  return hit;
}

std::vector<Mat3> close_under_products(std::span<const Mat3> generators, std::size_t cap) {
  std::vector<Mat3> elements{Mat3::identity()};
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const Mat3 h = elements[frontier.front()];
    frontier.pop_front();
    for (const Mat3& g : generators) {
      const Mat3 cand = g * h;
      if (find_match(elements, cand)) continue;
      if (elements.size() >= cap)
        throw std::runtime_error("group closure exceeded the element cap; generator table is corrupt");
      elements.push_back(cand);
      frontier.push_back(elements.size() - 1);
    }
  }
  return elements;
}

std::vector<Mat3> enumerate_group(Group g) {
  if (is_continuous(g))
    throw std::invalid_argument("enumerate_group: " + std::string(group_name(g)) + " is continuous");
  std::vector<Mat3> gens;
  for (const auto& nm : generators_of(g)) gens.push_back(nm.matrix);
  return close_under_products(gens);
}

Mat3 PointGroup::sample(Rng& rng) const {
  if (!is_continuous) {
    const auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(elements.size()));
    return elements[std::min(k, elements.size() - 1)];
  }
  switch (name) {
    case Group::C_inf_h: {
      const Mat3 r = rng.rotation_about_k();
      return rng.coin() ? ops::inversion() * r : r;
    }
    case Group::D_inf_h: {
      Mat3 q = rng.rotation_about_k();
      if (rng.coin()) q = ops::c2x() * q;
      if (rng.coin()) q = ops::inversion() * q;
      return q;
    }
    default: return rng.orthogonal();
  }
}

const PointGroup& point_group(Group g) {
  static std::once_flag once;
  static std::array<PointGroup, 14> catalog;
  std::call_once(once, [] {
    for (Group name : kAllGroups) {
      PointGroup& pg = catalog[static_cast<std::size_t>(name)];
      pg.name = name;
      pg.is_continuous = is_continuous(name);
      pg.generators = generators_of(name);
      if (!pg.is_continuous) pg.elements = enumerate_group(name);
    }
  });
  return catalog[static_cast<std::size_t>(g)];
}

// ---------------------------------------------------------------------------
// signed permutations

SignedPermutation SignedPermutation::identity(std::size_t n) {
  SignedPermutation p;
  p.target.resize(n);
  p.sign.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) p.target[i] = static_cast<int>(i);
  return p;
}

bool SignedPermutation::is_identity() const { return *this == identity(target.size()); }

bool SignedPermutation::is_unsigned() const {
  return std::all_of(sign.begin(), sign.end(), [](int s) { return s == 1; });
}

SignedPermutation SignedPermutation::after(const SignedPermutation& other) const {
  SignedPermutation r;
  r.target.resize(other.target.size());
  r.sign.resize(other.target.size());
  for (std::size_t i = 0; i < other.target.size(); ++i) {
    const auto mid = static_cast<std::size_t>(other.target[i]);
    r.target[i] = target[mid];
    r.sign[i] = sign[mid] * other.sign[i];
  }
  return r;
}

// ---------------------------------------------------------------------------
// structural sets

std::vector<Mat3> StructuralTensorSet::matrices() const {
  std::vector<Mat3> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.tensor);
  return out;
}

std::size_t StructuralTensorSet::index_of(std::string_view label) const {
  for (std::size_t k = 0; k < members.size(); ++k)
    if (members[k].label == label) return k;
  throw std::out_of_range("no structural tensor labelled '" + std::string(label) + "'");
}

NotStabilizedError::NotStabilizedError(std::string member, double nearest)
    : std::runtime_error("<Q> maps structural tensor " + member +
                         " outside the set (nearest member at distance " + std::to_string(nearest) + ")"),
      member_(std::move(member)),
      nearest_(nearest) {}

SignedPermutation action_on_set(const Mat3& q, std::span<const Member> members) {
  const std::size_t n = members.size();
  SignedPermutation p;
  p.target.assign(n, -1);
  p.sign.assign(n, 1);
  std::vector<Mat3> plain;
  std::vector<Mat3> negated;
  for (const auto& m : members) {
    plain.push_back(m.tensor);
    negated.push_back(-m.tensor);
  }
  std::vector<bool> hit(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const Mat3 image = conjugate(q, members[i].tensor);
    auto j = find_match(plain, image);
    int s = 1;
    if (!j) {
      j = find_match(negated, image);
      s = -1;
    }
    if (!j) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n; ++k)
        nearest = std::min({nearest, max_abs_diff(plain[k], image), max_abs_diff(negated[k], image)});
      throw NotStabilizedError(members[i].label, nearest);
    }
    if (hit[*j]) throw NotStabilizedError(members[i].label, 0.0);
    hit[*j] = true;
    p.target[i] = static_cast<int>(*j);
    p.sign[i] = s;
  }
  return p;
}

bool stabilizes(const Mat3& q, std::span<const Member> members) {
  try {
    return action_on_set(q, members).is_unsigned();
  } catch (const NotStabilizedError&) {
    return false;
  }
}

namespace {

Member sym_member(std::string label, const Mat3& t) { return {std::move(label), MemberKind::symmetric, t}; }

Member eps_member(std::string label, const Vec3& v) {
  return {std::move(label), MemberKind::skew, eps_contract(v).to_mat()};
}

void add_axis_projectors(std::vector<Member>& out) {
  out.push_back(sym_member("M1", outer(kUnitI, kUnitI)));
  out.push_back(sym_member("M2", outer(kUnitJ, kUnitJ)));
  out.push_back(sym_member("M3", outer(kUnitK, kUnitK)));
}

/// seed (x) seed, then repeated conjugation by `cycler` until it closes.
void add_cycled(std::vector<Member>& out, const Vec3& seed, const Mat3& cycler, const std::string& prefix) {
  std::vector<Mat3> orbit{outer(seed, seed)};
  for (;;) {
    const Mat3 next = conjugate(cycler, orbit.back());
    if (find_match(orbit, next)) break;
    orbit.push_back(next);
  }
  for (std::size_t k = 0; k < orbit.size(); ++k)
    out.push_back(sym_member(prefix + std::to_string(k + 1), orbit[k]));
}

Mat3 p2_tensor() { return outer(kUnitI, kUnitI) - outer(kUnitJ, kUnitJ); }

std::vector<Member> canonical_members(Group g, Form form) {
  std::vector<Member> m;
  switch (g) {
    case Group::C_i:
      m.push_back(eps_member("K1", kUnitI));
      m.push_back(eps_member("K2", kUnitJ));
      m.push_back(eps_member("K3", kUnitK));
      break;
    case Group::C_2h:
      m.push_back(sym_member("P2", p2_tensor()));
      m.push_back(eps_member("K3", kUnitK));
      break;
    case Group::D_2h:
      if (form == Form::p2)
        m.push_back(sym_member("P2", p2_tensor()));
      else
        add_axis_projectors(m);
      break;
    case Group::C_4h:
      add_axis_projectors(m);
      m.push_back(eps_member("K3", kUnitK));
      break;
    case Group::D_4h:
    case Group::T_h:
    case Group::O_h: add_axis_projectors(m); break;
    case Group::C_3i:
      add_cycled(m, kUnitI + kUnitK, ops::c3(), "T");
      m.push_back(eps_member("K3", kUnitK));
      break;
    case Group::D_3d: add_cycled(m, kUnitJ + kUnitK, ops::c3(), "D"); break;
    case Group::C_6h:
      add_cycled(m, kUnitI, ops::c6(), "H");
      m.push_back(eps_member("K3", kUnitK));
      break;
    case Group::D_6h: add_cycled(m, kUnitI, ops::c6(), "H"); break;
    case Group::C_inf_h: m.push_back(eps_member("K3", kUnitK)); break;
    case Group::D_inf_h: m.push_back(sym_member("M3", outer(kUnitK, kUnitK))); break;
    case Group::K_h: m.push_back(sym_member("I", Mat3::identity())); break;
  }
  return m;
}

std::vector<GeneratorAction> actions_for(Group g, std::span<const Member> members) {
  std::vector<GeneratorAction> out;
  for (const auto& gen : generators_of(g)) out.push_back({gen.label, action_on_set(gen.matrix, members)});
  return out;
}

}  // namespace

const StructuralTensorSet& structural_set(Group g, Form form) {
  if (form == Form::p2 && g != Group::D_2h)
    throw UsageError("the p2 basis form exists only for D_2h");
  static std::once_flag once;
  static std::map<std::pair<Group, Form>, StructuralTensorSet> cache;
  std::call_once(once, [] {
    auto build = [](Group name, Form f) {
      StructuralTensorSet s;
      s.group = name;
      s.form = f;
      s.members = canonical_members(name, f);
      s.generator_actions = actions_for(name, s.members);
      cache.emplace(std::pair{name, f}, std::move(s));
    };
    for (Group name : kAllGroups) build(name, Form::standard);
    build(Group::D_2h, Form::p2);
  });
  return cache.at({g, form});
}

StructuralTensorSet build_set_from_seed(Group g, std::span<const Vec3> seeds, bool include_eps_k,
                                        std::size_t cap) {
  const auto& elements = point_group(g).elements;
  if (point_group(g).is_continuous)
    throw std::invalid_argument("build_set_from_seed: " + std::string(group_name(g)) + " is continuous");
  StructuralTensorSet s;
  s.group = g;
  std::vector<Mat3> sym;
  for (const Vec3& v : seeds) {
    const Mat3 base = outer(v, v);
    for (const Mat3& q : elements) {
      const Mat3 image = conjugate(q, base);
      if (find_match(sym, image)) continue;
      if (sym.size() >= cap)
        throw std::runtime_error("build_set_from_seed: closure exceeded " + std::to_string(cap) +
                                 " members; the seed is poorly chosen");
      sym.push_back(image);
    }
  }
  for (std::size_t k = 0; k < sym.size(); ++k) s.members.push_back(sym_member("S" + std::to_string(k + 1), sym[k]));
  if (include_eps_k) {
    const Mat3 k3 = eps_contract(kUnitK).to_mat();
    std::vector<Mat3> skew{k3};
    for (const Mat3& q : elements) {
      const Mat3 image = conjugate(q, k3);
      if (find_match(skew, image)) continue;
      if (s.members.size() + skew.size() >= cap)
        throw std::runtime_error("build_set_from_seed: closure exceeded the member cap");
      skew.push_back(image);
    }
    s.members.push_back({"K3", MemberKind::skew, k3});
    for (std::size_t k = 1; k < skew.size(); ++k)
      s.members.push_back({"K3_" + std::to_string(k + 1), MemberKind::skew, skew[k]});
  }
  s.generator_actions = actions_for(g, s.members);
  return s;
}

std::vector<Mat3> stabilizer_within(const StructuralTensorSet& set, std::span<const Mat3> candidates) {
  std::vector<Mat3> out;
  for (const Mat3& q : candidates)
    if (stabilizes(q, set.members)) out.push_back(q);
  return out;
}

std::optional<Group> stabilizer_reference(Group g) {
  switch (g) {
    case Group::C_3i:
    case Group::D_3d:
    case Group::C_6h:
    case Group::D_6h: return Group::D_6h;
    case Group::C_inf_h:
    case Group::D_inf_h:
    case Group::K_h: return std::nullopt;
    default: return Group::O_h;
  }
}

}  // namespace strucrep
