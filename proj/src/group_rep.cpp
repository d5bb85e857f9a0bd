#include "strucrep/group_rep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "strucrep/error.hpp"
#include "strucrep/rng.hpp"

namespace strucrep {

std::string_view formulation_name(Formulation f) {
  return f == Formulation::man_goddard ? "Man-Goddard" : "Boehler-Liu";
}

Formulation formulation_of(Group g) {
  switch (g) {
    case Group::C_4h:
    case Group::D_4h:
    case Group::C_3i:
    case Group::D_3d:
    case Group::C_6h:
    case Group::D_6h:
    case Group::T_h:
    case Group::O_h: return Formulation::man_goddard;
    default: return Formulation::boehler_liu;
  }
}

// ---------------------------------------------------------------------------
// expression parsing and evaluation

Expression parse_expression(std::string_view text, std::span<const Member> members) {
  std::istringstream in{std::string(text)};
  std::string tok;
  Expression expr;
  Product cur;
  bool expect_factor = true;
  auto flush = [&] {
    if (cur.factors.empty()) throw std::invalid_argument("empty product in '" + std::string(text) + "'");
    expr.push_back(cur);
    cur = Product{};
  };
  while (in >> tok) {
    if (tok == "+" || tok == "-") {
      flush();
      cur.sign = tok == "+" ? 1.0 : -1.0;
      expect_factor = true;
      continue;
    }
    std::string name = tok;
    int power = 1;
    if (const auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      const std::string p = tok.substr(caret + 1);
      if (p.empty() || !std::all_of(p.begin(), p.end(), [](unsigned char c) { return std::isdigit(c) != 0; }))
        throw std::invalid_argument("bad power in '" + tok + "'");
      power = std::stoi(p);
      if (power < 1) throw std::invalid_argument("bad power in '" + tok + "'");
    }
    int symbol;
    if (name == "C") {
      symbol = Product::kSymC;
    } else if (name == "I") {
      symbol = Product::kSymI;
    } else {
      auto it = std::find_if(members.begin(), members.end(), [&](const Member& m) { return m.label == name; });
      if (it == members.end()) throw std::invalid_argument("unknown symbol '" + name + "' in '" + std::string(text) + "'");
      symbol = static_cast<int>(it - members.begin());
    }
    cur.factors.push_back({symbol, power});
    expect_factor = false;
  }
  if (expect_factor && !cur.factors.empty()) throw std::invalid_argument("dangling operator");
  flush();
  return expr;
}

namespace {

Mat3 power_of(const Mat3& m, int p) {
  Mat3 r = m;
  for (int k = 1; k < p; ++k) r = r * m;
  return r;
}

struct EvalContext {
  const Mat3& C;
  std::span<const Mat3> members;
  Mat3 C2;

  EvalContext(const Mat3& c, std::span<const Mat3> m) : C(c), members(m), C2(c * c) {}

  Mat3 factor(const Product::Factor& f) const {
    if (f.symbol == Product::kSymI) return Mat3::identity();
    const Mat3& base = f.symbol == Product::kSymC ? C : members[static_cast<std::size_t>(f.symbol)];
    if (f.symbol == Product::kSymC && f.power == 2) return C2;
    return power_of(base, f.power);
  }

  Mat3 evaluate(const Expression& e) const {
    Mat3 sum;
    for (const Product& p : e) {
      Mat3 prod = factor(p.factors.front());
      for (std::size_t k = 1; k < p.factors.size(); ++k) prod = prod * factor(p.factors[k]);
      sum += p.sign * prod;
    }
    return sum;
  }
};

// ---------------------------------------------------------------------------
// basis tables

struct BasisSpec {
  Group group;
  Form form;
  int first_index;
  std::vector<const char*> generators;
  std::vector<const char*> invariants;
};

const std::vector<const char*> kD2hP2Gens{"I", "C", "C^2", "P2", "P2^2", "C P2 + P2 C", "C^2 P2 + P2 C^2",
                                          "C P2^2 + P2^2 C"};
const std::vector<const char*> kD2hP2Invs{"C", "C^2", "C^3", "C P2", "C^2 P2", "C P2^2", "C^2 P2^2"};
const std::vector<const char*> kThreeMGens{"M1", "M2", "M3", "M1 C + C M1", "M2 C + C M2", "M3 C + C M3", "C^2"};
const std::vector<const char*> kThreeMInvs{"C M1", "C M2", "C M3", "C^2 M1", "C^2 M2", "C^2 M3", "C^3"};
const std::vector<const char*> kK3Gens{"C K3 - K3 C", "C^2 K3 - K3 C^2", "K3 C K3", "K3 C K3^2 - K3^2 C K3"};
const std::vector<const char*> kHexGens{"I",
                                        "H1",
                                        "H2",
                                        "H3",
                                        "C",
                                        "C^2",
                                        "C H1 + H1 C",
                                        "C^2 H1 + H1 C^2",
                                        "C H2 + H2 C",
                                        "C^2 H2 + H2 C^2",
                                        "C H3 + H3 C",
                                        "C^2 H3 + H3 C^2"};
const std::vector<const char*> kHexInvs{"C", "C^2", "C^3", "C H1", "C^2 H1", "C H2", "C^2 H2", "C H3", "C^2 H3"};

std::vector<const char*> trigonal_gens(const std::string& x) {
  static std::deque<std::string> storage;  // keeps the c_str() pointers alive
  auto s = [&](std::string v) { return storage.emplace_back(std::move(v)).c_str(); };
  const std::string a = x + "1", b = x + "2", c = x + "3";
  return {"I",
          s(a),
          s(b),
          s(c),
          "C",
          "C^2",
          s("C " + a + " + " + a + " C"),
          s("C^2 " + a + " + " + a + " C^2"),
          s("C " + b + " + " + b + " C"),
          s("C^2 " + b + " + " + b + " C^2"),
          s("C " + c + " + " + c + " C"),
          s("C^2 " + c + " + " + c + " C^2"),
          s(a + " " + b + " + " + b + " " + a),
          s(a + " " + c + " + " + c + " " + a),
          s(b + " " + c + " + " + c + " " + b)};
}

std::vector<const char*> concat(std::vector<const char*> a, const std::vector<const char*>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

BasisSpec spec_for(Group g, Form form) {
  switch (g) {
    case Group::C_i:
      return {g, form, 1,
              {"K1^2", "K2^2", "K3^2", "K1 K2 + K2 K1", "K1 K3 + K3 K1", "K2 K3 + K3 K2"},
              {"C K1^2", "C K2^2", "C K3^2", "C K1 K2", "C K1 K3", "C K2 K3"}};
    case Group::C_2h:
      return {g, form, 0, concat(concat(kD2hP2Gens, kK3Gens), {"P2 K3 - K3 P2"}),
              concat(kD2hP2Invs, {"C^2 K3^2 C K3"})};
    case Group::D_2h:
      if (form == Form::p2) return {g, form, 0, kD2hP2Gens, kD2hP2Invs};
      return {g, form, 1, kThreeMGens, kThreeMInvs};
    case Group::C_4h:
      return {g, form, 1, concat(concat(kThreeMGens, kK3Gens), {"M1 K3 - K3 M1", "M2 K3 - K3 M2"}),
              concat(kThreeMInvs, {"C M1 K3", "C^2 M1 K3", "C M2 K3", "C^2 M2 K3"})};
    case Group::D_4h:
    case Group::T_h:
    case Group::O_h: return {g, form, 1, kThreeMGens, kThreeMInvs};
    case Group::C_3i: {
      auto gens = trigonal_gens("T");
      gens = concat(gens, kK3Gens);
      gens = concat(gens, {"K3 T1 K3", "K3 T2 K3", "K3 T3 K3"});
      return {g, form, 0, gens, {"C T1", "C T2", "C T3", "C T1 T2", "C T1 T3", "C T2 T3"}};
    }
    case Group::D_3d:
      return {g, form, 0, trigonal_gens("D"), {"C D1", "C D2", "C D3", "C D1 D2", "C D1 D3", "C D2 D3"}};
    case Group::C_6h: return {g, form, 0, concat(kHexGens, kK3Gens), kHexInvs};
    case Group::D_6h: return {g, form, 0, kHexGens, kHexInvs};
    case Group::C_inf_h:
      return {g, form, 0, concat({"I", "C", "C^2", "K3^2"}, kK3Gens),
              {"C", "C^2", "C^3", "C K3^2", "C^2 K3^2", "C^2 K3^2 C K3"}};
    case Group::D_inf_h:
      return {g, form, 0, {"I", "C", "C^2", "M3", "C M3 + M3 C", "C^2 M3 + M3 C^2"}, {"C", "C^2", "C^3", "C M3", "C^2 M3"}};
    case Group::K_h: return {g, form, 0, {"I", "C", "C^2"}, {"C", "C^2", "C^3"}};
  }
  throw std::logic_error("unreachable");
}

GroupBasis build_basis(Group g, Form form) {
  const BasisSpec spec = spec_for(g, form);
  const auto& set = structural_set(g, form);
  GroupBasis b;
  b.group = g;
  b.form = form;
  b.formulation = formulation_of(g);
  b.first_index = spec.first_index;
  for (const char* s : spec.generators) {
    b.generator_labels.emplace_back(s);
    b.generator_exprs.push_back(parse_expression(s, set.members));
  }
  for (const char* s : spec.invariants) {
    b.invariant_labels.push_back("tr(" + std::string(s) + ")");
    b.invariant_exprs.push_back(parse_expression(s, set.members));
  }
  return b;
}

template <class T>
const T& cached(Group g, Form form, T (*build)(Group, Form)) {
  static std::mutex mu;
  static std::map<std::pair<Group, Form>, std::unique_ptr<T>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{g, form}];
  if (!slot) slot = std::make_unique<T>(build(g, form));
  return *slot;
}

void check_form(Group g, Form form) {
  if (form == Form::p2 && g != Group::D_2h) throw UsageError("the p2 basis form exists only for D_2h");
}

}  // namespace

const GroupBasis& group_basis(Group g, Form form) {
  check_form(g, form);
  return cached<GroupBasis>(g, form, &build_basis);
}

std::vector<double> invariants_with(const GroupBasis& b, const Mat3& C, std::span<const Mat3> members) {
  const EvalContext ctx(C, members);
  std::vector<double> out;
  out.reserve(b.invariant_exprs.size());
  for (const auto& e : b.invariant_exprs) out.push_back(ctx.evaluate(e).trace());
  return out;
}

std::vector<SymTensor2> generators_with(const GroupBasis& b, const Mat3& C, std::span<const Mat3> members) {
  const EvalContext ctx(C, members);
  std::vector<SymTensor2> out;
  out.reserve(b.generator_exprs.size());
  for (std::size_t k = 0; k < b.generator_exprs.size(); ++k)
    out.push_back(symmetric_result(ctx.evaluate(b.generator_exprs[k]), b.generator_labels[k].c_str()));
  return out;
}

InvariantVector invariant_basis(Group g, const SymTensor2& C, Form form) {
  const auto& b = group_basis(g, form);
  const auto members = structural_set(g, form).matrices();
  return {b.invariant_labels, invariants_with(b, C.to_mat(), members)};
}

GeneratorList generator_basis(Group g, const SymTensor2& C, Form form) {
  const auto& b = group_basis(g, form);
  const auto members = structural_set(g, form).matrices();
  return {b.generator_labels, generators_with(b, C.to_mat(), members)};
}

std::vector<Mat3> permute_members(std::span<const Mat3> members, std::span<const int> perm) {
  std::vector<Mat3> out;
  out.reserve(perm.size());
  for (int k : perm) out.push_back(members[static_cast<std::size_t>(k)]);
  return out;
}

// ---------------------------------------------------------------------------
// constraint tables

std::vector<int> complete_index_map(std::size_t slots, int first_index, std::span<const std::pair<int, int>> pairs) {
  std::vector<int> next(slots, -1), prev(slots, -1);
  auto slot = [&](int numbered) {
    const int s = numbered - first_index;
    if (s < 0 || static_cast<std::size_t>(s) >= slots)
      throw std::invalid_argument("constraint index " + std::to_string(numbered) + " out of range");
    return static_cast<std::size_t>(s);
  };
  for (const auto& [from, to] : pairs) {
    const auto a = slot(from), b = slot(to);
    if (next[a] != -1 || prev[b] != -1)
      throw std::invalid_argument("constraint pairs are not disjoint chains at index " + std::to_string(from));
    next[a] = static_cast<int>(b);
    prev[b] = static_cast<int>(a);
  }
  std::vector<int> sigma(slots);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<bool> done(slots, false);
  for (std::size_t s = 0; s < slots; ++s) {
    if (next[s] == -1 || done[s]) continue;
    // walk back to the chain head; a full cycle has no head
    std::size_t head = s;
    while (prev[head] != -1 && static_cast<std::size_t>(prev[head]) != s) head = static_cast<std::size_t>(prev[head]);
    std::size_t cur = head;
    for (;;) {
      done[cur] = true;
      if (next[cur] == -1) {
        sigma[cur] = static_cast<int>(head);
        break;
      }
      sigma[cur] = next[cur];
      cur = static_cast<std::size_t>(next[cur]);
      if (cur == head) break;
    }
  }
  return sigma;
}

namespace {

constexpr std::size_t kMatchSamples = 3;

std::vector<Mat3> match_samples() {
  std::vector<Mat3> cs;
  for (std::size_t t = 0; t < kMatchSamples; ++t) cs.push_back(Rng(mix_seed(0x6d61746368ULL, t)).sym_tensor().to_mat());
  return cs;
}

/// out[j] = the i with lhs[.][j] == rhs[.][i] at every sample; prefers i = j.
template <class Values, class Close>
std::vector<int> match_columns(const std::vector<Values>& lhs, const std::vector<Values>& rhs, Close close,
                               const char* what) {
  const std::size_t n = lhs.front().size();
  std::vector<int> out(n, -1);
  for (std::size_t j = 0; j < n; ++j) {
    auto matches = [&](std::size_t i) {
      for (std::size_t s = 0; s < lhs.size(); ++s)
        if (!close(lhs[s][j], rhs[s][i])) return false;
      return true;
    };
    if (matches(j)) {
      out[j] = static_cast<int>(j);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (matches(i)) {
        out[j] = static_cast<int>(i);
        break;
      }
    if (out[j] < 0)
      throw std::runtime_error(std::string("member permutation does not map ") + what + " " + std::to_string(j) +
                               " onto the basis");
  }
  return out;
}

}  // namespace

std::vector<int> derive_generator_map(const GroupBasis& b, std::span<const Mat3> members, std::span<const int> perm) {
  const auto permuted = permute_members(members, perm);
  std::vector<std::vector<SymTensor2>> lhs, rhs;
  for (const Mat3& C : match_samples()) {
    lhs.push_back(generators_with(b, C, permuted));
    rhs.push_back(generators_with(b, C, members));
  }
  return match_columns(lhs, rhs,
                       [](const SymTensor2& x, const SymTensor2& y) {
                         return (x - y).max_abs() <= 1e-9 * (1.0 + std::max(x.max_abs(), y.max_abs()));
                       },
                       "generator");
}

std::vector<int> derive_invariant_map(const GroupBasis& b, std::span<const Mat3> members, std::span<const int> perm) {
  const auto permuted = permute_members(members, perm);
  std::vector<std::vector<double>> lhs, rhs;
  for (const Mat3& C : match_samples()) {
    lhs.push_back(invariants_with(b, C, permuted));
    rhs.push_back(invariants_with(b, C, members));
  }
  return match_columns(lhs, rhs,
                       [](double x, double y) {
                         return std::abs(x - y) <= 1e-9 * (1.0 + std::max(std::abs(x), std::abs(y)));
                       },
                       "invariant");
}

namespace {

struct ListedRow {
  const char* generator;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> fixed;
};

std::vector<ListedRow> listed_rows(Group g) {
  const std::vector<std::pair<int, int>> cubic_qp{{1, 3}, {2, 1}, {4, 6}, {5, 4}};
  const std::vector<std::pair<int, int>> hex_c6{{1, 3}, {2, 1}, {6, 10}, {8, 6}, {7, 11}, {9, 7}};
  switch (g) {
    case Group::D_4h: return {{"C_4", {{1, 2}, {4, 5}}, {3, 6, 7}}};
    case Group::T_h: return {{"Q_p", cubic_qp, {7}}};
    case Group::O_h: return {{"Q_p", cubic_qp, {7}}, {"C_4x", {{3, 2}, {6, 5}}, {1, 4, 7}}};
    case Group::C_4h: return {{"C_4", {{1, 2}, {4, 5}, {12, 13}}, {3, 6, 7, 8, 9, 10, 11}}};
    case Group::C_3i:
      return {{"C_3",
               {{1, 3}, {2, 1}, {6, 10}, {7, 11}, {8, 6}, {9, 7}, {12, 13}, {14, 12}, {19, 21}, {20, 19}},
               {0, 4, 5, 15, 16, 17, 18}}};
    case Group::D_3d:
      return {{"C_3", {{1, 3}, {2, 1}, {6, 10}, {7, 11}, {8, 6}, {9, 7}, {12, 13}, {13, 14}}, {0, 4, 5}},
              {"C_2x", {{2, 3}, {8, 10}, {9, 11}, {12, 13}}, {0, 1, 4, 5, 6, 7, 14}}};
    case Group::D_6h:
      return {{"C_6", hex_c6, {0, 4, 5}}, {"C_2x", {{2, 3}, {8, 10}, {9, 11}}, {0, 1, 4, 5, 6, 7}}};
    case Group::C_6h: return {{"C_6", hex_c6, {0, 4, 5, 12, 13, 14, 15}}};
    default: return {};
  }
}

ConstraintTable build_table(Group g, Form form) {
  ConstraintTable t;
  t.group = g;
  t.form = form;
  t.constraint_free = formulation_of(g) == Formulation::boehler_liu;
  const auto& b = group_basis(g, form);
  const auto& set = structural_set(g, form);
  for (const auto& pr : listed_rows(g)) {
    auto it = std::find_if(set.generator_actions.begin(), set.generator_actions.end(),
                           [&](const GeneratorAction& a) { return a.generator == pr.generator; });
    if (it == set.generator_actions.end()) throw std::logic_error("constraint row for unknown generator");
    if (!it->action.is_unsigned()) throw std::logic_error("signed member action in a constraint row");
    ConstraintRow row;
    row.generator = pr.generator;
    row.member_perm = it->action.target;
    row.listed_pairs = pr.pairs;
    row.listed_fixed = pr.fixed;
    row.sigma = complete_index_map(b.generator_count(), b.first_index, pr.pairs);
    for (int f : pr.fixed)
      if (row.sigma[static_cast<std::size_t>(f - b.first_index)] != f - b.first_index)
        throw std::logic_error("listed fixed index is moved by its own row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<ConstraintElement> build_constraint_group(Group g, Form form) {
  const auto& table = constraint_table(g, form);
  const auto& b = group_basis(g, form);
  const auto members = structural_set(g, form).matrices();
  const std::size_t n_members = members.size();

  struct Pair {
    std::vector<int> p, sigma;
  };
  std::vector<Pair> elems;
  Pair id;
  id.p.resize(n_members);
  std::iota(id.p.begin(), id.p.end(), 0);
  id.sigma.resize(b.generator_count());
  std::iota(id.sigma.begin(), id.sigma.end(), 0);
  elems.push_back(id);
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const Pair h = elems[frontier.front()];
    frontier.pop_front();
    for (const auto& row : table.rows) {
      Pair c;
      c.p.resize(n_members);
      for (std::size_t k = 0; k < n_members; ++k)
        c.p[k] = h.p[static_cast<std::size_t>(row.member_perm[k])];
      c.sigma.resize(h.sigma.size());
      for (std::size_t k = 0; k < h.sigma.size(); ++k)
        c.sigma[k] = row.sigma[static_cast<std::size_t>(h.sigma[k])];
      auto it = std::find_if(elems.begin(), elems.end(), [&](const Pair& e) { return e.p == c.p; });
      if (it != elems.end()) {
        if (it->sigma != c.sigma)
          throw std::runtime_error("constraint table of " + std::string(group_name(g)) +
                                   " is inconsistent: one member permutation carries two index maps");
        continue;
      }
      elems.push_back(c);
      frontier.push_back(elems.size() - 1);
    }
  }
  std::vector<ConstraintElement> out;
  for (const auto& e : elems) out.push_back({e.p, e.sigma, derive_invariant_map(b, members, e.p)});
  return out;
}

}  // namespace

const ConstraintTable& constraint_table(Group g, Form form) {
  check_form(g, form);
  return cached<ConstraintTable>(g, form, &build_table);
}

const std::vector<ConstraintElement>& constraint_group(Group g, Form form) {
  check_form(g, form);
  return cached<std::vector<ConstraintElement>>(g, form, &build_constraint_group);
}

// ---------------------------------------------------------------------------
// polynomials and models

int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

double eval_polynomial(const Polynomial& p, std::span<const double> invariants) {
  double sum = 0.0;
  for (const auto& [e, c] : p) {
    double term = c;
    for (std::size_t m = 0; m < e.size(); ++m)
      for (int k = 0; k < e[m]; ++k) term *= invariants[m];
    sum += term;
  }
  return sum;
}

std::vector<Exponents> monomials_up_to(std::size_t n, int degree) {
  std::vector<Exponents> out;
  for (int d = 0; d <= degree; ++d) {
    std::vector<Exponents> level;
    Exponents e(n, 0);
    // enumerate compositions of d into n parts, lexicographically descending
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
      if (pos + 1 == n || n == 0) {
        if (n > 0) e[pos] = left;
        if (n > 0 || left == 0) level.push_back(e);
        return;
      }
      for (int v = left; v >= 0; --v) {
        e[pos] = v;
        self(self, pos + 1, left - v);
      }
    };
    rec(rec, 0, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

namespace {

constexpr int kMaxDegree = 8;

void validate_polynomial(const Polynomial& p, std::size_t n_inv, int degree, const std::string& where) {
  for (const auto& [e, c] : p) {
    if (e.size() != n_inv)
      throw ValidationError(where + ": monomial has " + std::to_string(e.size()) + " exponents, expected " +
                            std::to_string(n_inv));
    if (std::any_of(e.begin(), e.end(), [](int x) { return x < 0; }))
      throw ValidationError(where + ": negative exponent");
    if (total_degree(e) > degree)
      throw ValidationError(where + ": monomial degree " + std::to_string(total_degree(e)) +
                            " exceeds the model degree " + std::to_string(degree));
    if (!std::isfinite(c)) throw ValidationError(where + ": non-finite coefficient value");
  }
}

Polynomial substitute(const Polynomial& p, const std::vector<int>& kappa) {
  Polynomial out;
  for (const auto& [e, c] : p) {
    Exponents f(e.size(), 0);
    for (std::size_t m = 0; m < e.size(); ++m) f[static_cast<std::size_t>(kappa[m])] += e[m];
    out[f] += c;
  }
  return out;
}

void accumulate(Polynomial& into, const Polynomial& p, double w) {
  for (const auto& [e, c] : p) into[e] += w * c;
}

void prune(Polynomial& p) {
  for (auto it = p.begin(); it != p.end();) it = it->second == 0.0 ? p.erase(it) : std::next(it);
}

void require_evaluable(const CoefficientModel& m) {
  if (formulation_of(m.group) == Formulation::man_goddard && !m.symmetrized)
    throw ValidationError("model for " + std::string(group_name(m.group)) +
                          " must be symmetrized before evaluation (Man-Goddard group)");
}

}  // namespace

void validate_model(const CoefficientModel& m) {
  const auto& b = group_basis(m.group, m.form);
  if (m.degree < 0 || m.degree > kMaxDegree)
    throw ValidationError("model degree must lie in [0, " + std::to_string(kMaxDegree) + "]");
  if (!m.coefficients.empty() && m.coefficients.size() != b.generator_count())
    throw ValidationError("model has " + std::to_string(m.coefficients.size()) + " coefficient functions but " +
                          std::string(group_name(m.group)) + " has " + std::to_string(b.generator_count()) +
                          " generators");
  for (std::size_t k = 0; k < m.coefficients.size(); ++k)
    validate_polynomial(m.coefficients[k], b.invariant_count(), m.degree,
                        "alpha_" + std::to_string(static_cast<int>(k) + b.first_index));
  if (m.psi) validate_polynomial(*m.psi, b.invariant_count(), m.degree, "psi");
}

CoefficientModel symmetrize_model(const CoefficientModel& raw) {
  validate_model(raw);
  CoefficientModel out = raw;
  out.symmetrized = true;
  if (formulation_of(raw.group) == Formulation::boehler_liu) return out;
  const auto& H = constraint_group(raw.group, raw.form);
  const double w = 1.0 / static_cast<double>(H.size());
  for (std::size_t k = 0; k < raw.coefficients.size(); ++k) {
    Polynomial acc;
    for (const auto& h : H)
      accumulate(acc, substitute(raw.coefficients[static_cast<std::size_t>(h.sigma[k])], h.kappa), w);
    prune(acc);
    out.coefficients[k] = std::move(acc);
  }
  if (raw.psi) {
    Polynomial acc;
    for (const auto& h : H) accumulate(acc, substitute(*raw.psi, h.kappa), w);
    prune(acc);
    out.psi = std::move(acc);
  }
  return out;
}

std::vector<double> eval_coefficients_raw(const CoefficientModel& m, const Mat3& C, std::span<const Mat3> members) {
  const auto inv = invariants_with(group_basis(m.group, m.form), C, members);
  std::vector<double> out;
  out.reserve(m.coefficients.size());
  for (const auto& p : m.coefficients) out.push_back(eval_polynomial(p, inv));
  return out;
}

double eval_scalar_raw(const CoefficientModel& m, const Mat3& C, std::span<const Mat3> members) {
  if (!m.psi) throw ValidationError("model has no scalar function psi");
  return eval_polynomial(*m.psi, invariants_with(group_basis(m.group, m.form), C, members));
}

SymTensor2 eval_tensor_raw(const CoefficientModel& m, const Mat3& C, std::span<const Mat3> members) {
  const auto& b = group_basis(m.group, m.form);
  if (m.coefficients.size() != b.generator_count())
    throw ValidationError("model has " + std::to_string(m.coefficients.size()) + " coefficient functions, " +
                          std::string(group_name(m.group)) + " needs " + std::to_string(b.generator_count()));
  const auto inv = invariants_with(b, C, members);
  const auto gens = generators_with(b, C, members);
  SymTensor2 T;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const double a = eval_polynomial(m.coefficients[k], inv);
    if (a != 0.0) T += a * gens[k];
  }
  return T;
}

double eval_scalar(const CoefficientModel& m, const SymTensor2& C) {
  require_evaluable(m);
  return eval_scalar_raw(m, C.to_mat(), structural_set(m.group, m.form).matrices());
}

SymTensor2 eval_tensor(const CoefficientModel& m, const SymTensor2& C) {
  require_evaluable(m);
  return eval_tensor_raw(m, C.to_mat(), structural_set(m.group, m.form).matrices());
}

std::vector<double> eval_coefficients(const CoefficientModel& m, const SymTensor2& C) {
  require_evaluable(m);
  return eval_coefficients_raw(m, C.to_mat(), structural_set(m.group, m.form).matrices());
}

}  // namespace strucrep
