#pragma once

#include <map>
#include <memory>

#include "rfdlab/group.hpp"

namespace rfdlab {

using GElem = DynGroup::Elem;

/// Multi-matrix algebra: a direct sum of full matrix blocks.
struct FdAlgebra {
  std::vector<int> block_dims;

  int num_blocks() const { return static_cast<int>(block_dims.size()); }
  /// Dimension as a vector space, sum of squared block sizes.
  int dim() const;
  bool operator==(const FdAlgebra& o) const {
    return block_dims == o.block_dims;
  }
};

/// Element of an FdAlgebra: one matrix per block.
struct AlgElement {
  FdAlgebra alg;
  std::vector<CMatrix> blocks;

  static AlgElement zero(const FdAlgebra& a);
  static AlgElement identity(const FdAlgebra& a);
  /// Single matrix unit: entry (r,c) of the given block.
  static AlgElement unit(const FdAlgebra& a, int block, int r, int c);

  AlgElement operator+(const AlgElement& o) const;
  AlgElement operator-(const AlgElement& o) const;
  AlgElement operator*(const AlgElement& o) const;
  AlgElement operator*(cplx s) const;
  AlgElement adjoint() const;
  double op_norm() const;  // max operator norm over blocks
  double max_abs() const;
  bool is_zero(double tol = 0.0) const;
  bool approx_equal(const AlgElement& o, double tol = kDefaultTol) const;
  /// Normalized trace of one block (tr I = 1 per block).
  cplx block_trace(int k) const;
};

AlgElement random_alg_element(const FdAlgebra& a, Rng& rng);

/// *-automorphism in permutation-conjugation form:
/// alpha(a)[sigma(j)] = u[j] a[j] u[j]^*.
struct AlgAutomorphism {
  FdAlgebra alg;
  std::vector<int> sigma;
  std::vector<CMatrix> u;

  static AlgAutomorphism identity(const FdAlgebra& a);
  void validate(double tol = kDefaultTol) const;
  AlgElement apply(const AlgElement& a) const;
  /// Composite acting as *this after `inner`.
  AlgAutomorphism after(const AlgAutomorphism& inner) const;
  AlgAutomorphism inverse() const;
  /// Equality as maps (the block unitaries may differ by phases).
  bool same_map(const AlgAutomorphism& o, double tol = kDefaultTol) const;
};

/// Dynamical system: an FdAlgebra with an action of a finite group or Z.
class GAlgebra {
 public:
  GAlgebra(FdAlgebra alg, FiniteGroup g, std::vector<AlgAutomorphism> per_element);
  /// Z-system generated by one automorphism.
  GAlgebra(FdAlgebra alg, AlgAutomorphism z_generator);

  const FdAlgebra& alg() const { return alg_; }
  const DynGroup& grp() const { return grp_; }
  AlgAutomorphism alpha(GElem g) const;
  /// Block permutation of alpha(g).
  std::vector<int> block_action(GElem g) const;

 private:
  FdAlgebra alg_;
  DynGroup grp_;
  std::vector<AlgAutomorphism> table_;  // finite: per element; Z: generator only
};

using GAlgebraPtr = std::shared_ptr<const GAlgebra>;

/// Finitely supported function G -> A with the twisted product.
struct CrossedElement {
  GAlgebraPtr sys;
  std::map<GElem, AlgElement> terms;  // exact-zero terms are dropped

  static CrossedElement zero(GAlgebraPtr s);
  static CrossedElement monomial(GAlgebraPtr s, const AlgElement& a, GElem g);
  CrossedElement& add_term(GElem g, const AlgElement& a);
  AlgElement coeff(GElem g) const;
  std::vector<GElem> support() const;
  bool is_zero(double tol = 0.0) const;
};

CrossedElement c_add(const CrossedElement& b, const CrossedElement& c);
/// (b*c)(g) = sum_h b(h) alpha_h(c(h^{-1} g)).
CrossedElement convolve(const CrossedElement& b, const CrossedElement& c);
/// b^*(h) = alpha_h(b(h^{-1})^*).
CrossedElement involution(const CrossedElement& b);
/// Coefficient at the identity.
AlgElement conditional_expectation(const CrossedElement& b);

/// Orbit of one block under the induced permutation action, with coset
/// representatives (cosets[0] = identity) and the stabilizer: a subgroup in
/// the finite case, period * Z in the Z case.
struct BlockOrbit {
  GAlgebraPtr sys;
  int base_block = 0;
  std::vector<int> blocks;
  std::vector<GElem> cosets;
  std::vector<GElem> stab_elements;  // finite case, ascending
  GElem period = 0;                  // Z case only

  int size() const { return static_cast<int>(blocks.size()); }
  bool in_stabilizer(GElem g) const;
  /// g * cosets[i] = cosets[j] * t with t in the stabilizer.
  std::pair<int, GElem> resolve(GElem g, int i) const;
  /// Stabilizer as its own FiniteGroup (finite case only).
  const Subgroup& stab_subgroup() const;

  std::shared_ptr<const Subgroup> sub;  // finite case
};

BlockOrbit orbit_and_stabilizer(GAlgebraPtr sys, int block);

/// Genuine unitary representation of a block stabilizer. Finite case: one
/// matrix per subgroup element; Z case: the image of the period generator.
struct StabilizerRep {
  int dim = 0;
  std::vector<CMatrix> sub_mats;
  CMatrix z_gen;

  CMatrix eval(const BlockOrbit& orb, GElem t) const;
  static StabilizerRep trivial(const BlockOrbit& orb);
};

/// De-projectivized implementing representation on dim n_k^2: each stabilizer
/// element g gets Vtilde_g solving rho(alpha_g(a)) Vtilde = Vtilde rho(a)
/// (gauge: unitary, largest-modulus entry real positive), and
/// V(g) = Vtilde_g (x) conj(Vtilde_g), which is phase-independent.
struct LiftResult {
  StabilizerRep v;
  std::vector<CMatrix> vtilde;  // finite: per subgroup element; Z: generator
};

LiftResult projective_lift(const BlockOrbit& orb);

/// Induced representation on l^2(cosets) (x) (K (x) conj K) (x) K_U.
class InducedRep {
 public:
  InducedRep(BlockOrbit orbit, StabilizerRep v, StabilizerRep u);

  int dim() const { return dim_; }
  int block_dim() const { return d_; }
  int u_dim() const { return u_.dim; }
  const BlockOrbit& orbit() const { return orbit_; }
  const StabilizerRep& v_rep() const { return v_; }
  const StabilizerRep& u_rep() const { return u_; }

  CMatrix pi(const AlgElement& a) const;
  CMatrix l_of(GElem g) const;
  CMatrix eval(const CrossedElement& b) const;
  /// Max covariance violation ||L(g) pi(a) L(g)^* - pi(alpha_g(a))|| over
  /// generators and an algebra basis.
  double covariance_error() const;

 private:
  BlockOrbit orbit_;
  StabilizerRep v_, u_;
  std::vector<AlgAutomorphism> coset_inv_;  // alpha(s_i^{-1}), precomputed
  int d_ = 0;    // base block size
  int dim_ = 0;  // N * d^2 * u_dim
};

/// Normalized trace of gamma(a delta_g) computed without materializing it:
/// average over cosets fixed by g of tr((s_i . rho)(a) (x) I * V(t_i)) times
/// tr U(t_i), all traces normalized.
cplx trace_formula(const InducedRep& rep, const AlgElement& a, GElem g);

struct TraceMatchResult {
  InducedRep rep;
  double epsilon = 0.0;
  std::vector<GElem> damped;  // stabilizer conjugates of the support
  double big_m = 0.0;         // max op norm over the support
  double threshold = 0.0;     // epsilon / (N * M * |supp + e|)
  std::string base_kind;
  int amplify_power = 0;
  double amplify_bound = 0.0;
  double certified_bound = 0.0;
  cplx phi_trace = 0.0;    // coset average of base-block traces of Phi(b)
  cplx trace_value = 0.0;  // direct normalized trace of gamma(b)
  double achieved = 0.0;
};

/// Representation whose normalized trace on b matches the orbit-averaged
/// trace of the conditional expectation within epsilon, by damping the
/// auxiliary representation U on the stabilizer conjugates of supp(b).
TraceMatchResult trace_matching_rep(const CrossedElement& b, int block,
                                    double epsilon, int max_dim = 4096);

struct CrossedCertificateData {
  CrossedElement x;  // involution(b) * b
  int block = 0;
  double lower = 0.0;    // orbit-averaged trace C of Phi(x)
  double epsilon = 0.0;  // C/4
  TraceMatchResult approx;
  double witness_norm = 0.0;  // ||gamma(b)||, must exceed tolerance
  bool finite_image = false;
  std::int64_t image_order = 0;
};

/// Separation for nonzero b: x = b^* b has nonzero positive conditional
/// expectation; picks the block orbit with the largest averaged trace C and
/// certifies tr gamma(x) > C/2, hence gamma(b) != 0. A positive
/// epsilon_override only ever tightens the matching target.
CrossedCertificateData certify_separation(const CrossedElement& b,
                                          int max_dim = 4096,
                                          double epsilon_override = 0.0);

}  // namespace rfdlab
