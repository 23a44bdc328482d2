#pragma once

#include <memory>

#include "rfdlab/group.hpp"

namespace rfdlab {

/// Finite groupoid with explicit structure maps. Arrows and units are
/// indices; compose(first, second) is defined when source(first) =
/// range(second) and applies `second` first.
class FiniteGroupoid {
 public:
  FiniteGroupoid(int num_units, std::vector<int> source, std::vector<int> range,
                 std::vector<int> inverse, std::vector<int> unit_arrows,
                 std::vector<int> compose_table);

  int num_units() const { return num_units_; }
  int num_arrows() const { return num_arrows_; }
  int source(int a) const { return source_[a]; }
  int range(int a) const { return range_[a]; }
  int inverse(int a) const { return inverse_[a]; }
  int unit_arrow(int u) const { return unit_arrows_[u]; }
  bool is_unit_arrow(int a) const { return unit_arrows_[source_[a]] == a && source_[a] == range_[a]; }
  bool composable(int first, int second) const {
    return source_[first] == range_[second];
  }
  /// Composite arrow, or -1 when undefined.
  int compose(int first, int second) const {
    return compose_table_[static_cast<size_t>(first) * num_arrows_ + second];
  }
  const std::vector<int>& arrows_with_range(int u) const {
    return by_range_[u];
  }
  /// Arrows from unit src to unit rng, ascending.
  std::vector<int> hom_set(int src, int rng) const;

  /// Connected components of the unit space, sorted, ordered by smallest
  /// member.
  std::vector<std::vector<int>> unit_orbits() const;

  bool operator==(const FiniteGroupoid& o) const;

 private:
  int num_units_ = 0;
  int num_arrows_ = 0;
  std::vector<int> source_, range_, inverse_, unit_arrows_, compose_table_;
  std::vector<std::vector<int>> by_range_;
};

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

/// Transformation groupoid of a left action: arrows are pairs (g, x) indexed
/// g*set_size+x, with source x and range g.x.
GroupoidPtr groupoid_from_action(const GroupAction& action);

/// Disjoint union of groups sitting over their own units.
GroupoidPtr group_bundle(const std::vector<FiniteGroup>& groups);

/// Finitely supported function on arrows (dense storage).
struct GroupoidFunction {
  GroupoidPtr gpd;
  std::vector<cplx> values;

  static GroupoidFunction zero(GroupoidPtr g);
  static GroupoidFunction indicator(GroupoidPtr g, int arrow);
  GroupoidFunction& set(int arrow, cplx v);
  bool is_zero(double tol = 0.0) const;
  std::vector<int> support(double tol = 0.0) const;
};

/// Convolution (f*h)(g) = sum over kappa with range(kappa)=range(g) of
/// f(kappa) h(kappa^{-1} g).
GroupoidFunction convolve(const GroupoidFunction& f, const GroupoidFunction& h);
/// f^*(g) = conj(f(g^{-1})).
GroupoidFunction involution(const GroupoidFunction& f);
/// Restriction to unit arrows, one value per unit.
std::vector<cplx> conditional_expectation(const GroupoidFunction& f);

/// Isotropy group at a unit, realized on its arrow set.
struct IsotropyGroup {
  FiniteGroup group;
  std::vector<int> arrows;        // group index -> arrow index
  std::vector<int> arrow_to_idx;  // arrow index -> group index or -1
};

/// One unit orbit with base point, connectors and isotropy. Units are listed
/// in breadth-first discovery order from the smallest unit of the orbit;
/// connectors[i] runs from the base to units[i], connectors[0] is the unit
/// arrow.
struct OrbitData {
  std::vector<int> units;
  std::vector<int> connectors;
  IsotropyGroup iso;
};
OrbitData orbit_data(const GroupoidPtr& gpd, int unit_in_orbit);

/// Data for a finite-dimensional block representation: orbit, isotropy rep
/// and twisting unitaries (z[0] must be the identity).
struct FdRepData {
  GroupoidPtr gpd;
  OrbitData orbit;
  UnitaryRep rho;
  std::vector<CMatrix> z;
};

FdRepData fd_rep_data(GroupoidPtr gpd, int base_unit, UnitaryRep rho,
                      std::vector<CMatrix> z = {});

/// Block representation: block (i,j) of pi(f) is
/// sum over arrows g from units[j] to units[i] of
/// f(g) z_i rho(conn_i^{-1} g conn_j) z_j^*.
class GroupoidRep {
 public:
  explicit GroupoidRep(FdRepData data);

  int dim() const { return dim_; }
  const FdRepData& data() const { return data_; }
  CMatrix eval(const GroupoidFunction& f) const;
  CMatrix arrow_matrix(int arrow) const;

 private:
  FdRepData data_;
  int dim_ = 0;
  std::vector<int> unit_pos_;  // unit -> block index or -1
  std::vector<bool> z_id_;     // exact-identity twists skip the products
};

/// Representation given as an explicit arrow -> matrix table.
struct ArrowRep {
  GroupoidPtr gpd;
  int dim = 0;
  std::vector<CMatrix> mats;
  CMatrix eval(const GroupoidFunction& f) const;
};
ArrowRep materialize(const GroupoidRep& rep);

struct VerifyReport {
  double indicator_mult = 0.0;
  double indicator_star = 0.0;
  double unital = 0.0;
  double sampled_mult = 0.0;
  double sampled_star = 0.0;
  double max_violation = 0.0;
  bool ok(double tol = kDefaultTol) const { return max_violation <= tol; }
};

/// Representation-axiom suite: multiplicativity and star-preservation on all
/// indicator pairs, unitality, and the same identities on sampled random
/// functions.
VerifyReport verify_rep(const ArrowRep& rep, int samples, Rng& rng);

/// Reconstructs block data from an irreducible arrow representation:
/// projections from unit arrows, isotropy rep compressed to the base block,
/// partial isometries along connectors. Throws if the input is reducible or
/// fails the axiom suite.
FdRepData analyze_irreducible(const ArrowRep& rep, double tol = 1e-7);

struct TraceApproxResult {
  GroupoidRep rep;
  double epsilon = 0.0;
  std::vector<int> damped;  // isotropy indices whose trace is damped
  double big_m = 0.0;       // max |f| over conjugated damped arrows
  double threshold = 0.0;   // epsilon/(|E| M), 0 when E is empty
  std::string base_kind;
  int amplify_power = 0;
  double amplify_bound = 0.0;
  double certified_bound = 0.0;  // |E| M amplify_bound
  cplx phi_average = 0.0;
  cplx trace_value = 0.0;
  double achieved = 0.0;  // |phi_average - trace|, must be < epsilon
};

/// Builds a representation over the orbit of base_unit whose normalized trace
/// on f matches the orbit average of the conditional expectation within
/// epsilon.
TraceApproxResult trace_approx(const GroupoidFunction& f, int base_unit,
                               double epsilon, int max_dim = 4096);

struct RfdCertificateData {
  std::vector<int> orbit_units;
  double lower = 0.0;  // positive orbit average C
  double epsilon = 0.0;
  TraceApproxResult approx;
};

/// Separation for positive elements: finds an orbit where the conditional
/// expectation has positive average C, then targets epsilon = C/4 so the
/// representation trace stays above C/2. A positive epsilon_override only
/// ever tightens the target.
RfdCertificateData certify_rfd(const GroupoidFunction& f, int max_dim = 4096,
                               double epsilon_override = 0.0);

}  // namespace rfdlab
