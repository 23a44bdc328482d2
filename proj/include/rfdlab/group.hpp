#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfdlab/linalg.hpp"

namespace rfdlab {

/// Search budget exceeded (no witness within configured limits).
struct SearchLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite group as a validated Cayley table. Elements are indices 0..order-1.
class FiniteGroup {
 public:
  FiniteGroup() = default;
  /// table[a*order+b] = a*b. Validates identity, inverses, associativity.
  FiniteGroup(int order, std::vector<int> table);

  int order() const { return order_; }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[static_cast<size_t>(a) * order_ + b]; }
  int inv(int a) const { return inverse_[a]; }
  const std::vector<int>& table() const { return table_; }

  int element_order(int g) const;
  bool is_abelian() const;
  /// Smallest generator index if the group is cyclic.
  std::optional<int> cyclic_generator() const;
  /// Greedy minimal generating sequence (deterministic).
  std::vector<int> generators() const;
  /// Indices of the subgroup generated by the given elements.
  std::vector<int> generated_subgroup(const std::vector<int>& gens) const;

  bool operator==(const FiniteGroup& o) const {
    return order_ == o.order_ && table_ == o.table_;
  }

 private:
  int order_ = 0;
  int identity_ = 0;
  std::vector<int> table_;
  std::vector<int> inverse_;
};

FiniteGroup trivial_group();
FiniteGroup cyclic_group(int n);
FiniteGroup symmetric_group(int n);  // n <= 5
/// Dihedral group of order 2n; index i + n*j for r^i s^j.
FiniteGroup dihedral_group(int n);
/// Index a*|B|+b for (a,b).
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
/// k-fold power with mixed-radix element indexing (digit i = coordinate i).
FiniteGroup direct_power(const FiniteGroup& h, int k);
std::vector<int> power_digits(std::int64_t index, int base, int k);
std::int64_t power_index(const std::vector<int>& digits, int base);

/// H x| G for theta[g] a permutation of H acting as automorphisms;
/// element (h,g) has index h*|G|+g.
FiniteGroup semidirect_product(const FiniteGroup& h, const FiniteGroup& g,
                               const std::vector<std::vector<int>>& theta);

struct PermGroup {
  FiniteGroup group;
  std::vector<std::vector<int>> perms;  // element -> permutation of the domain
};
/// Closure of a permutation generating set; element 0 is the identity.
PermGroup group_from_permutations(int degree,
                                  const std::vector<std::vector<int>>& gens);

struct Subgroup {
  FiniteGroup group;
  std::vector<int> embed;          // subgroup index -> parent index
  std::vector<int> parent_to_sub;  // parent index -> subgroup index or -1
};
Subgroup subgroup_from_elements(const FiniteGroup& g,
                                const std::vector<int>& elems);

struct GroupHom {
  FiniteGroup source;
  FiniteGroup target;
  std::vector<int> image;  // per source element
  void validate() const;   // throws on non-homomorphism
};

/// Left action on {0..set_size-1}; images[g] is the permutation x -> g.x.
struct GroupAction {
  FiniteGroup group;
  int set_size = 0;
  std::vector<std::vector<int>> images;
  int apply(int g, int x) const { return images[g][x]; }
  void validate() const;
};

/// Extends generator images to a full action table and validates it.
GroupAction action_from_images(const FiniteGroup& g,
                               const std::vector<int>& gens,
                               const std::vector<std::vector<int>>& gen_perms,
                               int set_size);

/// Orbits as sorted index lists, ordered by smallest member.
std::vector<std::vector<int>> orbits(const GroupAction& action);
Subgroup stabilizer(const GroupAction& action, int x);

struct UnitaryRep {
  FiniteGroup group;
  int dim = 0;
  std::vector<CMatrix> mats;  // per element

  /// Max violation over unitarity, multiplicativity and the identity image.
  double validation_error() const;
  void validate(double tol = kDefaultTol) const;

  static UnitaryRep trivial(const FiniteGroup& g);
  static UnitaryRep regular(const FiniteGroup& g);
  /// One-dimensional rep from integer angles: g -> exp(2 pi i angle[g]/phase_den).
  static UnitaryRep character(const FiniteGroup& g,
                              const std::vector<int>& angles, int phase_den);
};

UnitaryRep rep_direct_sum(const UnitaryRep& a, const UnitaryRep& b);
UnitaryRep rep_tensor(const UnitaryRep& a, const UnitaryRep& b);
UnitaryRep rep_tensor_power(const UnitaryRep& a, int n);
/// Restriction along a subgroup embedding.
UnitaryRep rep_restrict(const UnitaryRep& a, const Subgroup& s);

/// A rep u with u(h) != I for every h in E (identity must not be in E).
/// Cyclic groups get a faithful character, everything else the left regular
/// representation.
UnitaryRep separating_rep(const FiniteGroup& g, const std::vector<int>& e);

struct Amplified {
  UnitaryRep rep;      // (u + trivial)^{tensor N}
  int power = 0;       // N, minimal
  double bound = 0.0;  // max_{h in E} |normalized trace rep(h)|, measured
  double threshold = 0.0;
  double base_trace = 0.0;  // max_{h in E} |normalized trace (u+1)(h)|
};

/// Tensor-power trace damping: smallest N with
/// max_{h in E} |tr (u+1)^{tensor N}(h)| < threshold.
Amplified amplify(const UnitaryRep& u, const std::vector<int>& e,
                  double threshold, int max_dim = 4096);

/// amplify() applied to the cheaper of separating_rep(g,e) and the regular
/// representation, measured by final dimension.
struct AmplifiedChoice {
  Amplified amplified;
  UnitaryRep base;
  std::string base_kind;  // "trivial", "character" or "regular"
};
AmplifiedChoice separating_amplified(const FiniteGroup& g,
                                     const std::vector<int>& e,
                                     double threshold, int max_dim = 4096);

struct ZModReduction {
  std::int64_t modulus = 1;
  std::int64_t lo = 0, hi = 0;  // window covering the input set
  std::int64_t map(std::int64_t t) const {
    std::int64_t r = t % modulus;
    return r < 0 ? r + modulus : r;
  }
};

/// Smallest m >= 1 whose mod-m reduction is injective on the contiguous
/// window spanned by S.
ZModReduction quotient_search_Z(const std::vector<std::int64_t>& s);

/// Finite group or the integers; elements are int64 (index resp. integer).
class DynGroup {
 public:
  using Elem = std::int64_t;
  static DynGroup finite(FiniteGroup g);
  static DynGroup integers();

  bool is_finite() const { return finite_.has_value(); }
  const FiniteGroup& group() const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem id() const { return is_finite() ? group().identity() : 0; }
  std::vector<Elem> elements() const;  // finite only
  std::vector<Elem> generator_elems() const;

 private:
  std::optional<FiniteGroup> finite_;
};

}  // namespace rfdlab
