#include "doctest.h"

#include <cmath>

#include "rfdlab/crossed.hpp"

using namespace rfdlab;

namespace {

// C + C with Z_2 swapping the two summands.
GAlgebraPtr c2_swap_system() {
  const FdAlgebra a{{1, 1}};
  AlgAutomorphism swap{a, {1, 0}, {CMatrix::identity(1), CMatrix::identity(1)}};
  return std::make_shared<GAlgebra>(
      a, cyclic_group(2),
      std::vector<AlgAutomorphism>{AlgAutomorphism::identity(a), swap});
}

// M_2 with Z_2 acting by conjugation with diag(1,-1).
GAlgebraPtr m2_inner_system(cplx gauge = 1.0) {
  const FdAlgebra a{{2}};
  CMatrix u(2, 2);
  u.at(0, 0) = gauge;
  u.at(1, 1) = -gauge;
  AlgAutomorphism inner{a, {0}, {u}};
  return std::make_shared<GAlgebra>(
      a, cyclic_group(2),
      std::vector<AlgAutomorphism>{AlgAutomorphism::identity(a), inner});
}

// Scalars with Z_3 acting trivially.
GAlgebraPtr z3_trivial_system() {
  const FdAlgebra a{{1}};
  return std::make_shared<GAlgebra>(
      a, cyclic_group(3),
      std::vector<AlgAutomorphism>(3, AlgAutomorphism::identity(a)));
}

// C^3 with Z cycling the summands.
GAlgebraPtr shift3_system() {
  const FdAlgebra a{{1, 1, 1}};
  AlgAutomorphism shift{a,
                        {1, 2, 0},
                        {CMatrix::identity(1), CMatrix::identity(1),
                         CMatrix::identity(1)}};
  return std::make_shared<GAlgebra>(a, shift);
}

// M_2 with Z acting by conjugation with a rotation (times optional phase).
GAlgebraPtr rotation_system(double theta, cplx gauge = 1.0) {
  const FdAlgebra a{{2}};
  CMatrix r(2, 2);
  r.at(0, 0) = std::cos(theta) * gauge;
  r.at(0, 1) = -std::sin(theta) * gauge;
  r.at(1, 0) = std::sin(theta) * gauge;
  r.at(1, 1) = std::cos(theta) * gauge;
  return std::make_shared<GAlgebra>(a, AlgAutomorphism{a, {0}, {r}});
}

AlgElement scalars(const FdAlgebra& a, const std::vector<cplx>& v) {
  AlgElement out = AlgElement::zero(a);
  for (size_t k = 0; k < v.size(); ++k) out.blocks[k].at(0, 0) = v[k];
  return out;
}

}  // namespace

TEST_CASE("multi-matrix algebra arithmetic") {
  const FdAlgebra a{{1, 2}};
  CHECK(a.dim() == 5);
  const AlgElement one = AlgElement::identity(a);
  CHECK(one.op_norm() == doctest::Approx(1.0));
  CHECK(one.block_trace(1) == cplx(1.0));

  AlgElement x = AlgElement::unit(a, 1, 0, 1) * cplx(3.0);
  CHECK(x.op_norm() == doctest::Approx(3.0));
  CHECK(x.block_trace(1) == cplx(0.0));
  CHECK((x * x).is_zero());
  CHECK((x.adjoint() * x).block_trace(1).real() == doctest::Approx(4.5));
  CHECK((x + x - x).approx_equal(x, 1e-15));
  CHECK_THROWS_AS(x + AlgElement::identity(FdAlgebra{{3}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AlgElement::zero(FdAlgebra{{}}), std::invalid_argument);
}

TEST_CASE("algebra automorphisms compose and invert") {
  const FdAlgebra a{{1, 1}};
  AlgAutomorphism swap{a, {1, 0}, {CMatrix::identity(1), CMatrix::identity(1)}};
  swap.validate();
  const AlgElement x = scalars(a, {2.0, cplx(0.0, 1.0)});
  const AlgElement sx = swap.apply(x);
  CHECK(sx.blocks[0].at(0, 0) == cplx(0.0, 1.0));
  CHECK(sx.blocks[1].at(0, 0) == cplx(2.0));
  CHECK(swap.after(swap).same_map(AlgAutomorphism::identity(a)));
  CHECK(swap.inverse().same_map(swap));

  const FdAlgebra m{{2}};
  CMatrix u(2, 2);
  u.at(0, 0) = 1.0;
  u.at(1, 1) = -1.0;
  AlgAutomorphism inner{m, {0}, {u}};
  inner.validate();
  AlgElement e12 = AlgElement::unit(m, 0, 0, 1);
  CHECK(inner.apply(e12).blocks[0].at(0, 1) == cplx(-1.0));
  // Phase on the unitary changes nothing as a map.
  AlgAutomorphism twisted{m, {0}, {u * cplx(0.36, 0.48) * (1.0 / 0.6)}};
  CHECK(inner.same_map(twisted));

  CHECK_THROWS_AS(
      AlgAutomorphism({FdAlgebra{{1, 2}}, {1, 0}, {CMatrix::identity(1),
                       CMatrix::identity(2)}}).validate(),
      std::invalid_argument);
  CMatrix bad(2, 2);
  bad.at(0, 0) = 2.0;
  CHECK_THROWS_AS(AlgAutomorphism({m, {0}, {bad}}).validate(),
                  std::invalid_argument);
}

TEST_CASE("dynamical systems validate their action") {
  CHECK_NOTHROW(c2_swap_system());
  CHECK_NOTHROW(m2_inner_system());
  const FdAlgebra a{{1, 1}};
  AlgAutomorphism swap{a, {1, 0}, {CMatrix::identity(1), CMatrix::identity(1)}};
  // Table claiming swap at the identity is not a homomorphism.
  CHECK_THROWS_AS(
      GAlgebra(a, cyclic_group(2), {swap, swap}),
      std::invalid_argument);
  // Z_2 table whose generator squares to swap, not the identity.
  CHECK_THROWS_AS(
      GAlgebra(a, cyclic_group(4),
               {AlgAutomorphism::identity(a), swap, swap, swap}),
      std::invalid_argument);

  const GAlgebraPtr zs = shift3_system();
  CHECK(!zs->grp().is_finite());
  CHECK(zs->block_action(1) == std::vector<int>{1, 2, 0});
  CHECK(zs->block_action(-1) == std::vector<int>{2, 0, 1});
  CHECK(zs->block_action(3) == std::vector<int>{0, 1, 2});
}

TEST_CASE("crossed product convolution and involution") {
  const GAlgebraPtr sys = m2_inner_system();
  const FdAlgebra& a = sys->alg();
  const CrossedElement b =
      CrossedElement::monomial(sys, AlgElement::unit(a, 0, 0, 1), 1);

  const CrossedElement bs = involution(b);
  CHECK(bs.support() == std::vector<GElem>{1});
  CHECK(bs.coeff(1).blocks[0].at(1, 0) == cplx(-1.0));

  const CrossedElement x = convolve(bs, b);
  CHECK(x.support() == std::vector<GElem>{0});
  const CMatrix x0 = x.coeff(0).blocks[0];
  CHECK(x0.at(1, 1) == cplx(1.0));
  CHECK(std::abs(x0.at(0, 0)) + std::abs(x0.at(0, 1)) + std::abs(x0.at(1, 0)) <
        1e-15);
  CHECK(conditional_expectation(x).approx_equal(x.coeff(0), 1e-15));
  CHECK(conditional_expectation(b).is_zero());

  // Positivity of Phi(b* b) for random elements.
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    CrossedElement c = CrossedElement::zero(sys);
    c.add_term(0, random_alg_element(a, rng));
    c.add_term(1, random_alg_element(a, rng));
    const AlgElement phi = conditional_expectation(convolve(involution(c), c));
    CHECK(phi.blocks[0].is_hermitian(1e-10));
    CHECK(phi.blocks[0].is_positive_semidefinite(1e-9));
  }
}

TEST_CASE("block orbits and stabilizers") {
  const BlockOrbit triv = orbit_and_stabilizer(m2_inner_system(), 0);
  CHECK(triv.blocks == std::vector<int>{0});
  CHECK(triv.cosets == std::vector<GElem>{0});
  CHECK(triv.stab_elements == std::vector<GElem>{0, 1});
  CHECK(triv.stab_subgroup().group.order() == 2);

  const BlockOrbit sw = orbit_and_stabilizer(c2_swap_system(), 0);
  CHECK(sw.blocks == std::vector<int>{0, 1});
  CHECK(sw.cosets == std::vector<GElem>{0, 1});
  CHECK(sw.stab_elements == std::vector<GElem>{0});
  CHECK(sw.resolve(1, 0) == std::pair<int, GElem>{1, 0});
  CHECK(sw.resolve(1, 1) == std::pair<int, GElem>{0, 0});

  const BlockOrbit sh = orbit_and_stabilizer(shift3_system(), 0);
  CHECK(sh.blocks == std::vector<int>{0, 1, 2});
  CHECK(sh.period == 3);
  CHECK(sh.in_stabilizer(-6));
  CHECK(!sh.in_stabilizer(2));
  CHECK(sh.resolve(1, 2) == std::pair<int, GElem>{0, 3});
  CHECK(sh.resolve(-1, 0) == std::pair<int, GElem>{2, -3});
}

TEST_CASE("projective lift de-projectivizes") {
  const BlockOrbit orb = orbit_and_stabilizer(m2_inner_system(), 0);
  const LiftResult lift = projective_lift(orb);
  const CMatrix vg = lift.v.sub_mats[1];
  CHECK(vg.rows() == 4);
  CHECK(std::abs(vg.at(0, 0) - cplx(1.0)) < 1e-10);
  CHECK(std::abs(vg.at(1, 1) - cplx(-1.0)) < 1e-10);
  CHECK(std::abs(vg.at(2, 2) - cplx(-1.0)) < 1e-10);
  CHECK(std::abs(vg.at(3, 3) - cplx(1.0)) < 1e-10);
  CHECK((vg * vg).approx_equal(CMatrix::identity(4), 1e-10));

  // Re-gauging the implementing unitary leaves V untouched.
  const LiftResult tilted =
      projective_lift(orbit_and_stabilizer(m2_inner_system(cplx(0.6, 0.8)), 0));
  CHECK((tilted.v.sub_mats[1] - vg).max_abs() < 1e-12);

  // One-dimensional blocks lift trivially.
  const LiftResult flat = projective_lift(orbit_and_stabilizer(c2_swap_system(), 0));
  CHECK(flat.v.dim == 1);
  CHECK(std::abs(flat.v.sub_mats[0].at(0, 0) - cplx(1.0)) < 1e-12);
}

TEST_CASE("induced representation on the swap system") {
  const GAlgebraPtr sys = c2_swap_system();
  const BlockOrbit orb = orbit_and_stabilizer(sys, 0);
  const InducedRep rep(orb, projective_lift(orb).v, StabilizerRep::trivial(orb));
  CHECK(rep.dim() == 2);
  CHECK(rep.covariance_error() < 1e-12);

  const AlgElement a = scalars(sys->alg(), {cplx(2.0), cplx(0.0, 3.0)});
  const CMatrix pa = rep.pi(a);
  CHECK(pa.at(0, 0) == cplx(2.0));
  CHECK(pa.at(1, 1) == cplx(0.0, 3.0));
  CHECK(std::abs(pa.at(0, 1)) + std::abs(pa.at(1, 0)) < 1e-15);

  const CMatrix lg = rep.l_of(1);
  CHECK(lg.at(0, 1) == cplx(1.0));
  CHECK(lg.at(1, 0) == cplx(1.0));
  CHECK(std::abs(lg.at(0, 0)) + std::abs(lg.at(1, 1)) < 1e-15);

  const CrossedElement be =
      CrossedElement::monomial(sys, AlgElement::identity(sys->alg()), 0);
  CHECK(rep.eval(be).approx_equal(CMatrix::identity(2), 1e-12));
}

TEST_CASE("induced representation over the trivial group is the block rep") {
  const FdAlgebra a{{2}};
  const GAlgebraPtr sys = std::make_shared<GAlgebra>(
      a, trivial_group(), std::vector<AlgAutomorphism>{AlgAutomorphism::identity(a)});
  const BlockOrbit orb = orbit_and_stabilizer(sys, 0);
  const InducedRep rep(orb, projective_lift(orb).v, StabilizerRep::trivial(orb));
  CHECK(rep.dim() == 4);
  Rng rng(9);
  const AlgElement x = random_alg_element(a, rng);
  CHECK(rep.pi(x).approx_equal(tensor(x.blocks[0], CMatrix::identity(2)), 1e-12));
}

TEST_CASE("trace formula matches the direct trace") {
  const GAlgebraPtr sw = c2_swap_system();
  const BlockOrbit orb = orbit_and_stabilizer(sw, 0);
  const InducedRep rep(orb, projective_lift(orb).v, StabilizerRep::trivial(orb));
  const AlgElement a = scalars(sw->alg(), {cplx(1.0), cplx(5.0)});
  CHECK(std::abs(trace_formula(rep, a, 0) - cplx(3.0)) < 1e-12);
  CHECK(std::abs(trace_formula(rep, a, 1)) < 1e-15);  // no fixed coset

  const GAlgebraPtr in = m2_inner_system();
  const BlockOrbit orb2 = orbit_and_stabilizer(in, 0);
  const InducedRep rep2(orb2, projective_lift(orb2).v,
                        StabilizerRep::trivial(orb2));

  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const AlgElement x = random_alg_element(in->alg(), rng);
    for (GElem g = 0; g < 2; ++g) {
      const CMatrix direct =
          rep2.eval(CrossedElement::monomial(in, x, g));
      CHECK(std::abs(trace_formula(rep2, x, g) - direct.normalized_trace()) <
            1e-12);
    }
  }
  // Same comparison on a Z-system along a window of group elements.
  const GAlgebraPtr sh = shift3_system();
  const BlockOrbit orb3 = orbit_and_stabilizer(sh, 0);
  const InducedRep rep3(orb3, projective_lift(orb3).v,
                        StabilizerRep::trivial(orb3));
  for (int trial = 0; trial < 10; ++trial) {
    const AlgElement x = random_alg_element(sh->alg(), rng);
    for (GElem g = -4; g <= 4; ++g) {
      const CMatrix direct = rep3.eval(CrossedElement::monomial(sh, x, g));
      CHECK(std::abs(trace_formula(rep3, x, g) - direct.normalized_trace()) <
            1e-12);
    }
  }
}

TEST_CASE("trace matching with amplified auxiliary representation") {
  const GAlgebraPtr sys = z3_trivial_system();
  CrossedElement b = CrossedElement::zero(sys);
  b.add_term(0, AlgElement::identity(sys->alg()));
  b.add_term(1, AlgElement::identity(sys->alg()) * cplx(0.5));
  b.add_term(2, AlgElement::identity(sys->alg()) * cplx(0.5));

  const TraceMatchResult res = trace_matching_rep(b, 0, 0.6);
  CHECK(res.damped == std::vector<GElem>{1, 2});
  CHECK(res.big_m == doctest::Approx(1.0));
  CHECK(res.threshold == doctest::Approx(0.2));
  CHECK(res.base_kind == "character");
  CHECK(res.amplify_power == 3);
  CHECK(res.rep.u_dim() == 8);
  CHECK(res.rep.dim() == 8);
  CHECK(res.amplify_bound == doctest::Approx(0.125));
  CHECK(res.certified_bound == doctest::Approx(0.25));
  CHECK(res.phi_trace.real() == doctest::Approx(1.0));
  CHECK(res.trace_value.real() == doctest::Approx(0.875));
  CHECK(res.achieved == doctest::Approx(0.125));
}

TEST_CASE("trace matching kills damped directions exactly when possible") {
  const GAlgebraPtr sys = m2_inner_system();
  CrossedElement x = CrossedElement::zero(sys);
  x.add_term(0, AlgElement::identity(sys->alg()));
  x.add_term(1, AlgElement::identity(sys->alg()) * cplx(0.5));

  const TraceMatchResult res = trace_matching_rep(x, 0, 0.2);
  CHECK(res.damped == std::vector<GElem>{1});
  CHECK(res.threshold == doctest::Approx(0.1));
  CHECK(res.amplify_power == 1);
  CHECK(res.amplify_bound == doctest::Approx(0.0));
  CHECK(res.certified_bound == doctest::Approx(0.0));
  CHECK(res.rep.u_dim() == 2);
  CHECK(res.trace_value.real() == doctest::Approx(1.0));
  CHECK(res.achieved < 1e-12);

  // Coefficients at the identity only: no damping at all.
  const CrossedElement be =
      CrossedElement::monomial(sys, AlgElement::identity(sys->alg()), 0);
  const TraceMatchResult plain = trace_matching_rep(be, 0, 0.1);
  CHECK(plain.damped.empty());
  CHECK(plain.base_kind == "trivial");
  CHECK(plain.rep.u_dim() == 1);
  CHECK(plain.achieved < 1e-12);

  CHECK_THROWS_AS(trace_matching_rep(be, 0, 0.0), std::invalid_argument);
}

TEST_CASE("separation certificate on the swap system") {
  const GAlgebraPtr sys = c2_swap_system();
  const CrossedElement b =
      CrossedElement::monomial(sys, scalars(sys->alg(), {1.0, 0.0}), 0);
  const CrossedCertificateData cert = certify_separation(b);
  CHECK(cert.block == 0);
  CHECK(cert.lower == doctest::Approx(0.5));
  CHECK(cert.epsilon == doctest::Approx(0.125));
  CHECK(cert.approx.trace_value.real() == doctest::Approx(0.5));
  CHECK(cert.witness_norm == doctest::Approx(1.0));
  CHECK(cert.finite_image);
  CHECK(cert.image_order == 2);
}

TEST_CASE("separation certificate on the inner system") {
  const GAlgebraPtr sys = m2_inner_system();
  const CrossedElement b =
      CrossedElement::monomial(sys, AlgElement::unit(sys->alg(), 0, 0, 1), 1);
  const CrossedCertificateData cert = certify_separation(b);
  CHECK(cert.lower == doctest::Approx(0.5));
  CHECK(cert.approx.trace_value.real() == doctest::Approx(0.5));
  CHECK(cert.approx.damped.empty());
  CHECK(cert.witness_norm == doctest::Approx(1.0));
}

TEST_CASE("separation certificate over Z factors through finite quotients") {
  const GAlgebraPtr sys = shift3_system();
  const CrossedElement b =
      CrossedElement::monomial(sys, scalars(sys->alg(), {1.0, 0.0, 0.0}), 0);
  const CrossedCertificateData cert = certify_separation(b);
  CHECK(cert.lower == doctest::Approx(1.0 / 3.0));
  CHECK(cert.approx.trace_value.real() == doctest::Approx(1.0 / 3.0));
  CHECK(cert.finite_image);
  CHECK(cert.image_order == 3);

  const GAlgebraPtr rot = rotation_system(std::acos(-1.0) / 4.0);
  const CrossedElement c =
      CrossedElement::monomial(rot, AlgElement::unit(rot->alg(), 0, 0, 1), 1);
  const CrossedCertificateData cr = certify_separation(c);
  CHECK(cr.lower == doctest::Approx(0.5));
  CHECK(cr.approx.trace_value.real() == doctest::Approx(0.5));
  CHECK(cr.witness_norm == doctest::Approx(1.0));
  CHECK(cr.finite_image);
  CHECK(cr.image_order == 4);
}

TEST_CASE("separation rejects zero") {
  const GAlgebraPtr sys = c2_swap_system();
  CHECK_THROWS_AS(certify_separation(CrossedElement::zero(sys)),
                  std::invalid_argument);
}

TEST_CASE("random crossed elements always separate") {
  const GAlgebraPtr sw = c2_swap_system();
  const GAlgebraPtr in = m2_inner_system();
  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    for (const GAlgebraPtr& sys : {sw, in}) {
      CrossedElement b = CrossedElement::zero(sys);
      b.add_term(0, random_alg_element(sys->alg(), rng));
      b.add_term(1, random_alg_element(sys->alg(), rng));
      const CrossedCertificateData cert = certify_separation(b);
      CHECK(cert.approx.trace_value.real() > cert.lower / 2.0);
      CHECK(cert.witness_norm > 1e-9);
      CHECK(cert.approx.achieved <= cert.approx.certified_bound + 1e-9);
    }
  }
}
