#pragma once

// The 14 centrosymmetric point groups of 3D space: generator matrices,
// finite element enumeration, and the lower-order structural tensor sets
// attached to each group together with the permutation that every
// generator induces on them.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "strucrep/rng.hpp"
#include "strucrep/tensor.hpp"

namespace strucrep {

/// Dedup / match tolerance for group elements and structural tensors (max-entry norm).
inline constexpr double kMatchTol = 1e-9;

enum class Group { C_i, C_2h, D_2h, C_4h, D_4h, C_3i, D_3d, C_6h, D_6h, T_h, O_h, C_inf_h, D_inf_h, K_h };

inline constexpr std::array<Group, 14> kAllGroups{
    Group::C_i,  Group::C_2h, Group::D_2h, Group::C_4h, Group::D_4h,    Group::C_3i,    Group::D_3d,
    Group::C_6h, Group::D_6h, Group::T_h,  Group::O_h,  Group::C_inf_h, Group::D_inf_h, Group::K_h};

/// The 11 discrete (Laue) groups.
inline constexpr std::array<Group, 11> kLaueGroups{Group::C_i,  Group::C_2h, Group::D_2h, Group::C_4h,
                                                   Group::D_4h, Group::C_3i, Group::D_3d, Group::C_6h,
                                                   Group::D_6h, Group::T_h,  Group::O_h};

std::string_view group_name(Group g);
/// Accepts exactly the names printed by group_name. Throws UsageError otherwise.
Group parse_group(std::string_view name);
bool is_continuous(Group g);

/// Basis variant. Only D_2h has an alternative: the single tensor P2 = i(x)i - j(x)j.
enum class Form { standard, p2 };
std::string_view form_name(Form f);
Form parse_form(std::string_view name);

/// Named symmetry operations used as group generators.
namespace ops {
Mat3 inversion();  // -I
Mat3 c2();         // pi about X3
Mat3 c2x();        // pi about X1
Mat3 c2y();        // pi about X2
Mat3 c4();         // pi/2 about X3
Mat3 c4x();        // pi/2 about X1
Mat3 c3();         // 2pi/3 about X3
Mat3 c6();         // pi/3 about X3
Mat3 qp();         // 2pi/3 about (1,1,1)
}  // namespace ops

struct NamedMatrix {
  std::string label;
  Mat3 matrix;
};

struct PointGroup {
  Group name{};
  std::vector<NamedMatrix> generators;  // empty for continuous groups
  std::vector<Mat3> elements;           // empty for continuous groups
  bool is_continuous = false;

  std::size_t order() const { return elements.size(); }
  /// Continuous groups: a random element from the group's sampler.
  /// Discrete groups: a uniformly chosen enumerated element.
  Mat3 sample(Rng& rng) const;
};

/// Immutable, lazily built catalog entry.
const PointGroup& point_group(Group g);

std::vector<NamedMatrix> generators_of(Group g);

/// Breadth-first closure from the identity, multiplying by generators in
/// table order and deduplicating within kMatchTol. Throws std::invalid_argument
/// for continuous groups and std::runtime_error if the closure exceeds `cap`.
std::vector<Mat3> enumerate_group(Group g);
std::vector<Mat3> close_under_products(std::span<const Mat3> generators, std::size_t cap = 10000);

/// Index of the unique entry within tol of `target`. Throws std::logic_error
/// if more than one entry matches.
std::optional<std::size_t> find_match(std::span<const Mat3> list, const Mat3& target, double tol = kMatchTol);

enum class MemberKind { symmetric, skew };

struct Member {
  std::string label;
  MemberKind kind{};
  Mat3 tensor;
};

/// <Q> member_i = sign[i] * member_{target[i]}
struct SignedPermutation {
  std::vector<int> target;
  std::vector<int> sign;

  static SignedPermutation identity(std::size_t n);
  bool is_identity() const;
  bool is_unsigned() const;
  /// (this o other)(i) = this(other(i)): apply `other` first.
  SignedPermutation after(const SignedPermutation& other) const;
  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;
};

struct GeneratorAction {
  std::string generator;
  SignedPermutation action;
};

struct StructuralTensorSet {
  Group group{};
  Form form = Form::standard;
  std::vector<Member> members;
  std::vector<GeneratorAction> generator_actions;

  std::vector<Mat3> matrices() const;
  std::size_t size() const { return members.size(); }
  /// Index of the member with this label. Throws std::out_of_range.
  std::size_t index_of(std::string_view label) const;
};

/// Raised by action_on_set when <Q> maps a member outside the set.
class NotStabilizedError : public std::runtime_error {
 public:
  NotStabilizedError(std::string member, double nearest);
  const std::string& member() const { return member_; }
  double nearest_distance() const { return nearest_; }

 private:
  std::string member_;
  double nearest_;
};

SignedPermutation action_on_set(const Mat3& q, std::span<const Member> members);
/// True iff <Q> maps the member multiset onto itself (all signs +).
bool stabilizes(const Mat3& q, std::span<const Member> members);

/// The canonical lower-order structural tensor set of a group, built from
/// seed vectors and generator conjugation, with generator actions attached.
const StructuralTensorSet& structural_set(Group g, Form form = Form::standard);

/// Default cap on the number of members produced by build_set_from_seed.
inline constexpr std::size_t kSeedMemberCap = 24;

/// Closes {v (x) v : v in seeds}, optionally with eps*k, under conjugation by
/// every element of a discrete group. Throws std::runtime_error past `cap`.
StructuralTensorSet build_set_from_seed(Group g, std::span<const Vec3> seeds, bool include_eps_k,
                                        std::size_t cap = kSeedMemberCap);

std::vector<Mat3> stabilizer_within(const StructuralTensorSet& set, std::span<const Mat3> candidates);

/// Discrete supergroup used to probe whether a set characterizes more
/// symmetry than its group: O_h for cubic-axis groups, D_6h for hexagonal
/// and trigonal ones. Empty for continuous groups.
std::optional<Group> stabilizer_reference(Group g);

}  // namespace strucrep
