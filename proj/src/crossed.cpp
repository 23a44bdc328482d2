#include "rfdlab/crossed.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace rfdlab {

int FdAlgebra::dim() const {
  int d = 0;
  for (int n : block_dims) d += n * n;
  return d;
}

namespace {

void require_alg(const FdAlgebra& a) {
  if (a.block_dims.empty())
    throw std::invalid_argument("algebra needs at least one block");
  for (int n : a.block_dims)
    if (n <= 0) throw std::invalid_argument("block sizes must be positive");
}

void require_same_alg(const AlgElement& a, const AlgElement& b) {
  if (!(a.alg == b.alg))
    throw std::invalid_argument("elements live in different algebras");
}

}  // namespace

AlgElement AlgElement::zero(const FdAlgebra& a) {
  require_alg(a);
  AlgElement out{a, {}};
  for (int n : a.block_dims) out.blocks.emplace_back(n, n);
  return out;
}

AlgElement AlgElement::identity(const FdAlgebra& a) {
  require_alg(a);
  AlgElement out{a, {}};
  for (int n : a.block_dims) out.blocks.push_back(CMatrix::identity(n));
  return out;
}

AlgElement AlgElement::unit(const FdAlgebra& a, int block, int r, int c) {
  AlgElement out = zero(a);
  out.blocks.at(block).at(r, c) = 1.0;
  return out;
}

AlgElement AlgElement::operator+(const AlgElement& o) const {
  require_same_alg(*this, o);
  AlgElement out = *this;
  for (size_t k = 0; k < blocks.size(); ++k) out.blocks[k] += o.blocks[k];
  return out;
}

AlgElement AlgElement::operator-(const AlgElement& o) const {
  require_same_alg(*this, o);
  AlgElement out = *this;
  for (size_t k = 0; k < blocks.size(); ++k) out.blocks[k] -= o.blocks[k];
  return out;
}

AlgElement AlgElement::operator*(const AlgElement& o) const {
  require_same_alg(*this, o);
  AlgElement out{alg, {}};
  for (size_t k = 0; k < blocks.size(); ++k)
    out.blocks.push_back(blocks[k] * o.blocks[k]);
  return out;
}

AlgElement AlgElement::operator*(cplx s) const {
  AlgElement out = *this;
  for (auto& b : out.blocks) b = b * s;
  return out;
}

AlgElement AlgElement::adjoint() const {
  AlgElement out{alg, {}};
  for (const auto& b : blocks) out.blocks.push_back(b.adjoint());
  return out;
}

double AlgElement::op_norm() const {
  double n = 0.0;
  for (const auto& b : blocks) n = std::max(n, b.operator_norm());
  return n;
}

double AlgElement::max_abs() const {
  double n = 0.0;
  for (const auto& b : blocks) n = std::max(n, b.max_abs());
  return n;
}

bool AlgElement::is_zero(double tol) const { return max_abs() <= tol; }

bool AlgElement::approx_equal(const AlgElement& o, double tol) const {
  require_same_alg(*this, o);
  for (size_t k = 0; k < blocks.size(); ++k)
    if (!blocks[k].approx_equal(o.blocks[k], tol)) return false;
  return true;
}

cplx AlgElement::block_trace(int k) const {
  return blocks.at(k).normalized_trace();
}

AlgElement random_alg_element(const FdAlgebra& a, Rng& rng) {
  AlgElement out = AlgElement::zero(a);
  for (auto& b : out.blocks) b = random_matrix(b.rows(), b.cols(), rng);
  return out;
}

AlgAutomorphism AlgAutomorphism::identity(const FdAlgebra& a) {
  require_alg(a);
  AlgAutomorphism out{a, {}, {}};
  for (int k = 0; k < a.num_blocks(); ++k) {
    out.sigma.push_back(k);
    out.u.push_back(CMatrix::identity(a.block_dims[k]));
  }
  return out;
}

void AlgAutomorphism::validate(double tol) const {
  require_alg(alg);
  const int m = alg.num_blocks();
  if (static_cast<int>(sigma.size()) != m || static_cast<int>(u.size()) != m)
    throw std::invalid_argument("automorphism table size mismatch");
  std::vector<bool> hit(m, false);
  for (int j = 0; j < m; ++j) {
    if (sigma[j] < 0 || sigma[j] >= m || hit[sigma[j]])
      throw std::invalid_argument("sigma is not a permutation");
    hit[sigma[j]] = true;
    if (alg.block_dims[sigma[j]] != alg.block_dims[j])
      throw std::invalid_argument("sigma pairs blocks of different sizes");
    if (u[j].rows() != alg.block_dims[j] || u[j].cols() != alg.block_dims[j] ||
        !u[j].is_unitary(tol))
      throw std::invalid_argument("implementing entries must be unitary");
  }
}

AlgElement AlgAutomorphism::apply(const AlgElement& a) const {
  if (!(a.alg == alg))
    throw std::invalid_argument("element lives in a different algebra");
  AlgElement out = AlgElement::zero(alg);
  for (int j = 0; j < alg.num_blocks(); ++j)
    out.blocks[sigma[j]] = u[j] * a.blocks[j] * u[j].adjoint();
  return out;
}

AlgAutomorphism AlgAutomorphism::after(const AlgAutomorphism& inner) const {
  if (!(alg == inner.alg))
    throw std::invalid_argument("automorphisms act on different algebras");
  AlgAutomorphism out{alg, {}, {}};
  for (int j = 0; j < alg.num_blocks(); ++j) {
    out.sigma.push_back(sigma[inner.sigma[j]]);
    out.u.push_back(u[inner.sigma[j]] * inner.u[j]);
  }
  return out;
}

AlgAutomorphism AlgAutomorphism::inverse() const {
  AlgAutomorphism out{alg, std::vector<int>(sigma.size()),
                      std::vector<CMatrix>(sigma.size(), CMatrix(1, 1))};
  for (int j = 0; j < alg.num_blocks(); ++j) {
    out.sigma[sigma[j]] = j;
    out.u[sigma[j]] = u[j].adjoint();
  }
  return out;
}

bool AlgAutomorphism::same_map(const AlgAutomorphism& o, double tol) const {
  if (!(alg == o.alg) || sigma != o.sigma) return false;
  for (int j = 0; j < alg.num_blocks(); ++j) {
    // Same conjugation iff o.u[j]^* u[j] is scalar of modulus one.
    const int n = alg.block_dims[j];
    const CMatrix w = o.u[j].adjoint() * u[j];
    const cplx s = w.trace() / static_cast<double>(n);
    if (std::abs(std::abs(s) - 1.0) > tol) return false;
    if (!(w - CMatrix::scalar(n, s)).approx_zero(tol)) return false;
  }
  return true;
}

GAlgebra::GAlgebra(FdAlgebra alg, FiniteGroup g,
                   std::vector<AlgAutomorphism> per_element)
    : alg_(std::move(alg)),
      grp_(DynGroup::finite(std::move(g))),
      table_(std::move(per_element)) {
  require_alg(alg_);
  const FiniteGroup& grp = grp_.group();
  if (static_cast<int>(table_.size()) != grp.order())
    throw std::invalid_argument("need one automorphism per group element");
  for (const auto& a : table_) {
    if (!(a.alg == alg_))
      throw std::invalid_argument("automorphism acts on the wrong algebra");
    a.validate(1e-8);
  }
  if (!table_[grp.identity()].same_map(AlgAutomorphism::identity(alg_), 1e-8))
    throw std::invalid_argument("identity must act trivially");
  for (int a = 0; a < grp.order(); ++a)
    for (int b = 0; b < grp.order(); ++b)
      if (!table_[a].after(table_[b]).same_map(table_[grp.mul(a, b)], 1e-7))
        throw std::invalid_argument("action is not a homomorphism");
}

GAlgebra::GAlgebra(FdAlgebra alg, AlgAutomorphism z_generator)
    : alg_(std::move(alg)), grp_(DynGroup::integers()) {
  require_alg(alg_);
  if (!(z_generator.alg == alg_))
    throw std::invalid_argument("automorphism acts on the wrong algebra");
  z_generator.validate(1e-8);
  table_.push_back(std::move(z_generator));
}

AlgAutomorphism GAlgebra::alpha(GElem g) const {
  if (grp_.is_finite()) {
    if (g < 0 || g >= grp_.group().order())
      throw std::invalid_argument("group element out of range");
    return table_[static_cast<size_t>(g)];
  }
  const AlgAutomorphism step = g >= 0 ? table_[0] : table_[0].inverse();
  AlgAutomorphism out = AlgAutomorphism::identity(alg_);
  for (GElem i = 0; i < std::llabs(g); ++i) out = step.after(out);
  return out;
}

std::vector<int> GAlgebra::block_action(GElem g) const {
  return alpha(g).sigma;
}

CrossedElement CrossedElement::zero(GAlgebraPtr s) {
  if (!s) throw std::invalid_argument("null system");
  return CrossedElement{std::move(s), {}};
}

CrossedElement CrossedElement::monomial(GAlgebraPtr s, const AlgElement& a,
                                        GElem g) {
  CrossedElement out = zero(std::move(s));
  out.add_term(g, a);
  return out;
}

CrossedElement& CrossedElement::add_term(GElem g, const AlgElement& a) {
  if (!(a.alg == sys->alg()))
    throw std::invalid_argument("coefficient lives in the wrong algebra");
  auto it = terms.find(g);
  if (it == terms.end()) {
    if (!a.is_zero()) terms.emplace(g, a);
  } else {
    it->second = it->second + a;
    if (it->second.is_zero()) terms.erase(it);
  }
  return *this;
}

AlgElement CrossedElement::coeff(GElem g) const {
  auto it = terms.find(g);
  return it == terms.end() ? AlgElement::zero(sys->alg()) : it->second;
}

std::vector<GElem> CrossedElement::support() const {
  std::vector<GElem> out;
  for (const auto& [g, a] : terms) out.push_back(g);
  return out;
}

bool CrossedElement::is_zero(double tol) const {
  for (const auto& [g, a] : terms)
    if (!a.is_zero(tol)) return false;
  return true;
}

namespace {

void require_same_sys(const CrossedElement& b, const CrossedElement& c) {
  if (b.sys != c.sys)
    throw std::invalid_argument("elements live over different systems");
}

}  // namespace

CrossedElement c_add(const CrossedElement& b, const CrossedElement& c) {
  require_same_sys(b, c);
  CrossedElement out = b;
  for (const auto& [g, a] : c.terms) out.add_term(g, a);
  return out;
}

CrossedElement convolve(const CrossedElement& b, const CrossedElement& c) {
  require_same_sys(b, c);
  const DynGroup& grp = b.sys->grp();
  CrossedElement out = CrossedElement::zero(b.sys);
  for (const auto& [h, bh] : b.terms) {
    const AlgAutomorphism ah = b.sys->alpha(h);
    for (const auto& [k, ck] : c.terms)
      out.add_term(grp.mul(h, k), bh * ah.apply(ck));
  }
  return out;
}

CrossedElement involution(const CrossedElement& b) {
  const DynGroup& grp = b.sys->grp();
  CrossedElement out = CrossedElement::zero(b.sys);
  for (const auto& [h, bh] : b.terms) {
    const GElem hi = grp.inv(h);
    out.add_term(hi, b.sys->alpha(hi).apply(bh.adjoint()));
  }
  return out;
}

AlgElement conditional_expectation(const CrossedElement& b) {
  return b.coeff(b.sys->grp().id());
}

bool BlockOrbit::in_stabilizer(GElem g) const {
  if (period > 0) return g % period == 0;
  return std::binary_search(stab_elements.begin(), stab_elements.end(), g);
}

std::pair<int, GElem> BlockOrbit::resolve(GElem g, int i) const {
  const DynGroup& grp = sys->grp();
  const GElem gs = grp.mul(g, cosets.at(i));
  if (period > 0) {
    const int n = size();
    const int j = static_cast<int>(((gs % n) + n) % n);
    return {j, gs - cosets[j]};
  }
  const std::vector<int> act = sys->block_action(gs);
  const int target = act[base_block];
  for (int j = 0; j < size(); ++j)
    if (blocks[j] == target) return {j, grp.mul(grp.inv(cosets[j]), gs)};
  throw std::logic_error("coset arithmetic failed to resolve");
}

const Subgroup& BlockOrbit::stab_subgroup() const {
  if (!sub) throw std::logic_error("stabilizer subgroup only exists for finite groups");
  return *sub;
}

BlockOrbit orbit_and_stabilizer(GAlgebraPtr sys, int block) {
  if (!sys) throw std::invalid_argument("null system");
  if (block < 0 || block >= sys->alg().num_blocks())
    throw std::invalid_argument("block index out of range");
  BlockOrbit out;
  out.sys = sys;
  out.base_block = block;
  const DynGroup& grp = sys->grp();
  if (grp.is_finite()) {
    const FiniteGroup& g = grp.group();
    std::vector<int> seen_block;
    out.blocks.push_back(block);
    out.cosets.push_back(g.identity());
    for (int e = 0; e < g.order(); ++e) {
      const int target = sys->block_action(e)[block];
      if (target == block) out.stab_elements.push_back(e);
      if (std::find(out.blocks.begin(), out.blocks.end(), target) ==
          out.blocks.end()) {
        out.blocks.push_back(target);
        out.cosets.push_back(e);
      }
    }
    std::vector<int> stab_int(out.stab_elements.begin(),
                              out.stab_elements.end());
    out.sub = std::make_shared<Subgroup>(subgroup_from_elements(g, stab_int));
  } else {
    const std::vector<int> sigma = sys->block_action(1);
    int k = block;
    do {
      out.blocks.push_back(k);
      k = sigma[k];
    } while (k != block);
    for (size_t i = 0; i < out.blocks.size(); ++i)
      out.cosets.push_back(static_cast<GElem>(i));
    out.period = static_cast<GElem>(out.blocks.size());
  }
  return out;
}

CMatrix StabilizerRep::eval(const BlockOrbit& orb, GElem t) const {
  if (orb.period > 0) {
    if (t % orb.period != 0)
      throw std::invalid_argument("element is not in the stabilizer");
    return matrix_power(z_gen, t / orb.period);
  }
  const int idx = orb.stab_subgroup().parent_to_sub.at(static_cast<size_t>(t));
  if (idx < 0) throw std::invalid_argument("element is not in the stabilizer");
  return sub_mats.at(idx);
}

StabilizerRep StabilizerRep::trivial(const BlockOrbit& orb) {
  StabilizerRep out;
  out.dim = 1;
  if (orb.period > 0) {
    out.z_gen = CMatrix::identity(1);
  } else {
    out.sub_mats.assign(orb.stab_subgroup().group.order(),
                        CMatrix::identity(1));
  }
  return out;
}

namespace {

// Unitary intertwiner from rho to rho(alpha(.)) on the base block, with the
// largest-modulus entry rotated to be real positive.
CMatrix lift_unitary(const GAlgebraPtr& sys, int block,
                     const AlgAutomorphism& auto_g) {
  const int d = sys->alg().block_dims[block];
  std::vector<CMatrix> a_mats, b_mats;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const AlgElement e = AlgElement::unit(sys->alg(), block, r, c);
      a_mats.push_back(e.blocks[block]);
      b_mats.push_back(auto_g.apply(e).blocks[block]);
    }
  const IntertwinerSpace space = intertwiner_space(a_mats, b_mats);
  if (space.dimension != 1)
    throw std::logic_error("implementing unitary is not unique up to scale");
  CMatrix t = space.basis[0];
  const double scale = t.frobenius_norm() / std::sqrt(static_cast<double>(d));
  t = t * cplx(1.0 / scale);
  int br = 0, bc = 0;
  double best = -1.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      if (std::abs(t.at(r, c)) > best + 1e-12) {
        best = std::abs(t.at(r, c));
        br = r;
        bc = c;
      }
  const cplx phase = t.at(br, bc) / std::abs(t.at(br, bc));
  t = t * std::conj(phase);
  if (!t.is_unitary(1e-8))
    throw std::logic_error("normalized intertwiner is not unitary");
  return t;
}

}  // namespace

LiftResult projective_lift(const BlockOrbit& orb) {
  LiftResult out;
  const int d = orb.sys->alg().block_dims[orb.base_block];
  out.v.dim = d * d;
  if (orb.period > 0) {
    const CMatrix vt = lift_unitary(orb.sys, orb.base_block,
                                    orb.sys->alpha(orb.period));
    out.vtilde.push_back(vt);
    out.v.z_gen = tensor(vt, conjugate(vt));
    return out;
  }
  const Subgroup& sub = orb.stab_subgroup();
  for (int k = 0; k < sub.group.order(); ++k) {
    const GElem parent = sub.embed[k];
    const CMatrix vt =
        lift_unitary(orb.sys, orb.base_block, orb.sys->alpha(parent));
    out.vtilde.push_back(vt);
    out.v.sub_mats.push_back(tensor(vt, conjugate(vt)));
  }
  // Phase cancellation makes V a genuine representation; verify.
  for (int a = 0; a < sub.group.order(); ++a)
    for (int b = 0; b < sub.group.order(); ++b) {
      const CMatrix prod = out.v.sub_mats[a] * out.v.sub_mats[b];
      if (!prod.approx_equal(out.v.sub_mats[sub.group.mul(a, b)], 1e-8))
        throw std::logic_error("de-projectivized lift is not multiplicative");
    }
  return out;
}

InducedRep::InducedRep(BlockOrbit orbit, StabilizerRep v, StabilizerRep u)
    : orbit_(std::move(orbit)), v_(std::move(v)), u_(std::move(u)) {
  d_ = orbit_.sys->alg().block_dims[orbit_.base_block];
  if (v_.dim != d_ * d_)
    throw std::invalid_argument("V must act on the doubled block");
  if (u_.dim <= 0) throw std::invalid_argument("U must have positive dimension");
  dim_ = orbit_.size() * d_ * d_ * u_.dim;
  const DynGroup& grp = orbit_.sys->grp();
  for (GElem s : orbit_.cosets)
    coset_inv_.push_back(orbit_.sys->alpha(grp.inv(s)));
  const double err = covariance_error();
  if (err > 1e-7)
    throw std::logic_error("induced pair fails covariance");
}

CMatrix InducedRep::pi(const AlgElement& a) const {
  const int cell = d_ * d_ * u_.dim;
  CMatrix out(dim_, dim_);
  for (int i = 0; i < orbit_.size(); ++i) {
    const CMatrix blk = tensor(
        tensor(coset_inv_[i].apply(a).blocks[orbit_.base_block],
               CMatrix::identity(d_)),
        CMatrix::identity(u_.dim));
    for (int r = 0; r < cell; ++r)
      for (int c = 0; c < cell; ++c)
        out.at(i * cell + r, i * cell + c) = blk.at(r, c);
  }
  return out;
}

CMatrix InducedRep::l_of(GElem g) const {
  const int cell = d_ * d_ * u_.dim;
  CMatrix out(dim_, dim_);
  for (int i = 0; i < orbit_.size(); ++i) {
    const auto [j, t] = orbit_.resolve(g, i);
    const CMatrix blk = tensor(v_.eval(orbit_, t), u_.eval(orbit_, t));
    for (int r = 0; r < cell; ++r)
      for (int c = 0; c < cell; ++c)
        out.at(j * cell + r, i * cell + c) = blk.at(r, c);
  }
  return out;
}

CMatrix InducedRep::eval(const CrossedElement& b) const {
  if (!(b.sys->alg() == orbit_.sys->alg()))
    throw std::invalid_argument("element lives over a different system");
  CMatrix out(dim_, dim_);
  for (const auto& [g, a] : b.terms) out += pi(a) * l_of(g);
  return out;
}

double InducedRep::covariance_error() const {
  const FdAlgebra& alg = orbit_.sys->alg();
  double err = 0.0;
  std::vector<GElem> gens = orbit_.sys->grp().generator_elems();
  if (dim_ <= 256) {
    for (GElem g : gens) {
      const CMatrix lg = l_of(g);
      const AlgAutomorphism ag = orbit_.sys->alpha(g);
      for (int k = 0; k < alg.num_blocks(); ++k)
        for (int r = 0; r < alg.block_dims[k]; ++r)
          for (int c = 0; c < alg.block_dims[k]; ++c) {
            const AlgElement e = AlgElement::unit(alg, k, r, c);
            err = std::max(err, (lg * pi(e) * lg.adjoint() - pi(ag.apply(e)))
                                    .max_abs());
          }
      // Representation property of L on the generator and its inverse.
      err = std::max(err,
                     (lg * l_of(orbit_.sys->grp().inv(g)) -
                      CMatrix::identity(dim_))
                         .max_abs());
    }
    return err;
  }
  // Large auxiliary factors: check covariance at the V level, where the
  // U slot is inert.
  std::vector<GElem> stab_gens;
  if (orbit_.period > 0) {
    stab_gens.push_back(orbit_.period);
  } else {
    const Subgroup& sub = orbit_.stab_subgroup();
    for (int k : sub.group.generators()) stab_gens.push_back(sub.embed[k]);
  }
  for (GElem t : stab_gens) {
    const CMatrix vt = v_.eval(orbit_, t);
    const AlgAutomorphism at = orbit_.sys->alpha(t);
    for (int r = 0; r < d_; ++r)
      for (int c = 0; c < d_; ++c) {
        const AlgElement e =
            AlgElement::unit(orbit_.sys->alg(), orbit_.base_block, r, c);
        const CMatrix lhs =
            vt * tensor(e.blocks[orbit_.base_block], CMatrix::identity(d_)) *
            vt.adjoint();
        const CMatrix rhs = tensor(at.apply(e).blocks[orbit_.base_block],
                                   CMatrix::identity(d_));
        err = std::max(err, (lhs - rhs).max_abs());
      }
  }
  return err;
}

cplx trace_formula(const InducedRep& rep, const AlgElement& a, GElem g) {
  const BlockOrbit& orb = rep.orbit();
  const DynGroup& grp = orb.sys->grp();
  const int d = rep.block_dim();
  cplx acc = 0.0;
  for (int i = 0; i < orb.size(); ++i) {
    const auto [j, t] = orb.resolve(g, i);
    if (j != i) continue;
    const CMatrix rho_a =
        orb.sys->alpha(grp.inv(orb.cosets[i])).apply(a).blocks[orb.base_block];
    const CMatrix left = tensor(rho_a, CMatrix::identity(d)) *
                         rep.v_rep().eval(orb, t);
    acc += (left.trace() / static_cast<double>(d * d)) *
           rep.u_rep().eval(orb, t).normalized_trace();
  }
  return acc / static_cast<double>(orb.size());
}

TraceMatchResult trace_matching_rep(const CrossedElement& b, int block,
                                    double epsilon, int max_dim) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  const GAlgebraPtr sys = b.sys;
  const DynGroup& grp = sys->grp();
  const GElem e = grp.id();
  BlockOrbit orbit = orbit_and_stabilizer(sys, block);
  LiftResult lift = projective_lift(orbit);

  const std::vector<GElem> supp = b.support();
  double big_m = 0.0;
  for (const auto& [g, a] : b.terms) big_m = std::max(big_m, a.op_norm());
  std::set<GElem> damped_set;
  for (GElem g : supp) {
    if (g == e) continue;
    for (int i = 0; i < orbit.size(); ++i) {
      const auto [j, t] = orbit.resolve(g, i);
      if (j == i) damped_set.insert(t);
    }
  }
  const std::vector<GElem> damped(damped_set.begin(), damped_set.end());

  double threshold = 0.0;
  std::string base_kind = "trivial";
  int power = 1;
  double bound = 0.0;
  StabilizerRep u = StabilizerRep::trivial(orbit);
  if (!damped.empty()) {
    const double num_e = static_cast<double>(supp.size()) +
                         (std::count(supp.begin(), supp.end(), e) ? 0.0 : 1.0);
    threshold = epsilon / (static_cast<double>(orbit.size()) * big_m * num_e);
    if (orbit.period > 0) {
      std::vector<std::int64_t> js{0};
      for (GElem t : damped) js.push_back(t / orbit.period);
      const ZModReduction red = quotient_search_Z(js);
      std::set<int> em;
      for (GElem t : damped)
        em.insert(static_cast<int>(red.map(t / orbit.period)));
      const AmplifiedChoice choice = separating_amplified(
          cyclic_group(static_cast<int>(red.modulus)),
          std::vector<int>(em.begin(), em.end()), threshold, max_dim);
      u.dim = choice.amplified.rep.dim;
      u.z_gen = choice.amplified.rep.mats[1];
      base_kind = choice.base_kind;
      power = choice.amplified.power;
      bound = choice.amplified.bound;
    } else {
      const Subgroup& sub = orbit.stab_subgroup();
      std::set<int> es;
      for (GElem t : damped) es.insert(sub.parent_to_sub[static_cast<size_t>(t)]);
      const AmplifiedChoice choice =
          separating_amplified(sub.group, std::vector<int>(es.begin(), es.end()),
                               threshold, max_dim);
      u.dim = choice.amplified.rep.dim;
      u.sub_mats = choice.amplified.rep.mats;
      base_kind = choice.base_kind;
      power = choice.amplified.power;
      bound = choice.amplified.bound;
    }
  }

  TraceMatchResult res{InducedRep(std::move(orbit), std::move(lift.v),
                                  std::move(u))};
  res.epsilon = epsilon;
  res.damped = damped;
  res.big_m = big_m;
  res.threshold = threshold;
  res.base_kind = base_kind;
  res.amplify_power = power;
  res.amplify_bound = bound;
  const double off_terms =
      static_cast<double>(supp.size()) -
      (std::count(supp.begin(), supp.end(), e) ? 1.0 : 0.0);
  res.certified_bound = off_terms * big_m * bound;
  res.phi_trace = trace_formula(res.rep, conditional_expectation(b), e);
  res.trace_value = res.rep.eval(b).normalized_trace();
  res.achieved = std::abs(res.phi_trace - res.trace_value);
  if (!damped.empty() && res.certified_bound >= epsilon)
    throw std::logic_error("certified bound fails the target");
  if (res.achieved > res.certified_bound + 1e-9)
    throw std::logic_error("measured trace misses the certified bound");
  return res;
}

CrossedCertificateData certify_separation(const CrossedElement& b, int max_dim,
                                          double epsilon_override) {
  if (b.terms.empty() || b.is_zero())
    throw std::invalid_argument("cannot separate zero");
  const GAlgebraPtr sys = b.sys;
  const CrossedElement x = convolve(involution(b), b);
  const AlgElement phi = conditional_expectation(x);

  double best_c = 0.0;
  int best_block = -1;
  std::vector<bool> seen(sys->alg().num_blocks(), false);
  for (int k = 0; k < sys->alg().num_blocks(); ++k) {
    if (seen[k]) continue;
    const BlockOrbit orb = orbit_and_stabilizer(sys, k);
    double c = 0.0;
    for (int kb : orb.blocks) {
      seen[kb] = true;
      c += phi.block_trace(kb).real();
    }
    c /= static_cast<double>(orb.size());
    if (c > best_c) {
      best_c = c;
      best_block = k;
    }
  }
  if (best_block < 0 || best_c <= 1e-14)
    throw std::logic_error("conditional expectation of b*b has no mass");

  double eps = best_c / 4.0;
  if (epsilon_override > 0.0) eps = std::min(eps, epsilon_override);
  CrossedCertificateData out{x, best_block, best_c, eps,
                             trace_matching_rep(x, best_block, eps, max_dim)};
  if (out.approx.trace_value.real() <= best_c / 2.0)
    throw std::logic_error("certified trace fell below half the expectation");
  out.witness_norm = out.approx.rep.eval(b).operator_norm();
  if (out.witness_norm <= 1e-9)
    throw std::logic_error("representation failed to move b away from zero");

  if (sys->grp().is_finite()) {
    out.finite_image = true;
    out.image_order = sys->grp().group().order();
  } else {
    const CMatrix l1 = out.approx.rep.l_of(1);
    const int limit = out.approx.rep.dim() <= 128 ? 720 : 48;
    CMatrix p = l1;
    for (int k = 1; k <= limit; ++k) {
      if ((p - CMatrix::identity(p.rows())).max_abs() < 1e-8) {
        out.finite_image = true;
        out.image_order = k;
        break;
      }
      p = p * l1;
    }
  }
  return out;
}

}  // namespace rfdlab
