#pragma once

// Per-group reduced representations: invariant lists, tensor generator
// lists, coefficient-index constraint tables, polynomial coefficient models,
// and the orbit-averaging projector that makes a model satisfy its table.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strucrep/group_catalog.hpp"
#include "strucrep/iso_rep.hpp"
#include "strucrep/tensor.hpp"

namespace strucrep {

enum class Formulation { boehler_liu, man_goddard };
std::string_view formulation_name(Formulation f);
Formulation formulation_of(Group g);

/// One product of factors with a sign. Factor symbols: kSymC, kSymI or a
/// structural-set member index.
struct Product {
  static constexpr int kSymC = -1;
  static constexpr int kSymI = -2;
  struct Factor {
    int symbol;
    int power;
  };
  double sign = 1.0;
  std::vector<Factor> factors;
};
/// Signed sum of products, parsed from text such as "K3 C K3^2 - K3^2 C K3".
using Expression = std::vector<Product>;

/// Parses the expression grammar against the labels of `members`.
/// Throws std::invalid_argument on unknown symbols or malformed text.
Expression parse_expression(std::string_view text, std::span<const Member> members);

struct GroupBasis {
  Group group{};
  Form form = Form::standard;
  Formulation formulation{};
  /// Index used for the first coefficient (0 or 1); slot k is alpha_{first_index + k}.
  int first_index = 0;
  std::vector<std::string> invariant_labels;
  std::vector<std::string> generator_labels;
  std::vector<Expression> invariant_exprs;  // traced
  std::vector<Expression> generator_exprs;

  std::size_t invariant_count() const { return invariant_labels.size(); }
  std::size_t generator_count() const { return generator_labels.size(); }
};

const GroupBasis& group_basis(Group g, Form form = Form::standard);

/// Evaluation against an explicit member list (possibly permuted). The
/// canonical lists are obtained with structural_set(g, form).matrices().
std::vector<double> invariants_with(const GroupBasis& b, const Mat3& C, std::span<const Mat3> members);
std::vector<SymTensor2> generators_with(const GroupBasis& b, const Mat3& C, std::span<const Mat3> members);

InvariantVector invariant_basis(Group g, const SymTensor2& C, Form form = Form::standard);
GeneratorList generator_basis(Group g, const SymTensor2& C, Form form = Form::standard);

/// (pi L)_k = L_{perm[k]}
std::vector<Mat3> permute_members(std::span<const Mat3> members, std::span<const int> perm);

// ---------------------------------------------------------------------------
// constraint tables

struct ConstraintRow {
  std::string generator;
  /// Positional member permutation: (pi L)_k = L_{member_perm[k]}.
  std::vector<int> member_perm;
  /// Tabulated index pairs i -> sigma(i) and tabulated fixed indices, in the
  /// group's own alpha numbering.
  std::vector<std::pair<int, int>> listed_pairs;
  std::vector<int> listed_fixed;
  /// Completed map over generator slots: alpha~_k(C, L) = alpha~_{sigma[k]}(C, pi L).
  std::vector<int> sigma;
};

struct ConstraintTable {
  Group group{};
  Form form = Form::standard;
  /// Set for Boehler-Liu groups: the table is empty because the structural
  /// tensors are individually invariant.
  bool constraint_free = false;
  std::vector<ConstraintRow> rows;
};

const ConstraintTable& constraint_table(Group g, Form form = Form::standard);

/// Completes partial index maps: each chain a -> b -> ... -> z is closed
/// by z -> a; unmentioned slots are fixed. Throws std::invalid_argument if
/// the pairs do not describe disjoint chains.
std::vector<int> complete_index_map(std::size_t slots, int first_index, std::span<const std::pair<int, int>> pairs);

/// G_j(C, pi L) = G_{tau[j]}(C, L), derived by matching values at fixed
/// random C. Throws std::runtime_error when some G_j has no match.
std::vector<int> derive_generator_map(const GroupBasis& b, std::span<const Mat3> members, std::span<const int> perm);
/// I_m(C, pi L) = I_{kappa[m]}(C, L), derived the same way.
std::vector<int> derive_invariant_map(const GroupBasis& b, std::span<const Mat3> members, std::span<const int> perm);

/// One element of the finite group generated by the constraint rows.
struct ConstraintElement {
  std::vector<int> member_perm;
  std::vector<int> sigma;
  std::vector<int> kappa;
};

/// Closure of the table rows under composition, identity first. Throws
/// std::runtime_error if two compositions give the same member permutation
/// with different index maps (an inconsistent table).
const std::vector<ConstraintElement>& constraint_group(Group g, Form form = Form::standard);

// ---------------------------------------------------------------------------
// coefficient models

/// Exponent per invariant, in basis order.
using Exponents = std::vector<int>;
using Polynomial = std::map<Exponents, double>;

double eval_polynomial(const Polynomial& p, std::span<const double> invariants);
int total_degree(const Exponents& e);
/// All exponent vectors of total degree <= degree over n invariants, ordered
/// by degree then lexicographically descending.
std::vector<Exponents> monomials_up_to(std::size_t n, int degree);

inline constexpr int kDefaultDegreeCap = 3;

struct CoefficientModel {
  Group group{};
  Form form = Form::standard;
  int degree = kDefaultDegreeCap;
  bool symmetrized = false;
  /// One polynomial per generator slot. May be empty for scalar-only models.
  std::vector<Polynomial> coefficients;
  /// Scalar function psi. Absent for tensor-only models.
  std::optional<Polynomial> psi;
};

/// Throws ValidationError for shape mismatches (slot count, exponent length,
/// degree above the model's cap, non-finite values).
void validate_model(const CoefficientModel& m);

/// Orbit average over constraint_group(g). Boehler-Liu models are returned
/// unchanged apart from the flag.
CoefficientModel symmetrize_model(const CoefficientModel& raw);

/// Canonical evaluation. Throws ValidationError for unsymmetrized models of
/// Man-Goddard groups or missing tensor/scalar parts.
double eval_scalar(const CoefficientModel& m, const SymTensor2& C);
SymTensor2 eval_tensor(const CoefficientModel& m, const SymTensor2& C);
std::vector<double> eval_coefficients(const CoefficientModel& m, const SymTensor2& C);

/// Evaluation without the symmetrization guard, against any member list.
double eval_scalar_raw(const CoefficientModel& m, const Mat3& C, std::span<const Mat3> members);
SymTensor2 eval_tensor_raw(const CoefficientModel& m, const Mat3& C, std::span<const Mat3> members);
std::vector<double> eval_coefficients_raw(const CoefficientModel& m, const Mat3& C, std::span<const Mat3> members);

}  // namespace strucrep
