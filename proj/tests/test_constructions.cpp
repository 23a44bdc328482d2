#include "doctest.h"

#include <cmath>

#include "rfdlab/constructions.hpp"

using namespace rfdlab;

namespace {

// Z_3 with Z_2 acting by inversion.
SemidirectSystem inversion_system() {
  return {cyclic_group(3), cyclic_group(2), {{0, 1, 2}, {0, 2, 1}}};
}

int order_n_element(const FiniteGroup& g, int n) {
  for (int x = 0; x < g.order(); ++x)
    if (g.element_order(x) == n) return x;
  throw std::logic_error("no element of the requested order");
}

}  // namespace

TEST_CASE("semidirect systems validate their action") {
  CHECK_NOTHROW(inversion_system());
  // Table claiming inversion at the identity is not a homomorphism.
  CHECK_THROWS_AS(
      SemidirectSystem(cyclic_group(3), cyclic_group(2),
                       {{0, 2, 1}, {0, 2, 1}}),
      std::invalid_argument);
  // The 3-cycle rotation of element indices is not multiplicative.
  CHECK_THROWS_AS(
      SemidirectSystem(cyclic_group(3), cyclic_group(2),
                       {{0, 1, 2}, {1, 2, 0}}),
      std::invalid_argument);

  const SemidirectSystem z{cyclic_group(3), {0, 2, 1}};
  CHECK(!z.g.is_finite());
  CHECK(z.act(1) == std::vector<int>{0, 2, 1});
  CHECK(z.act(2) == std::vector<int>{0, 1, 2});
  CHECK(z.act(-1) == std::vector<int>{0, 2, 1});
}

TEST_CASE("group algebra model carries the action blockwise") {
  const SemidirectSystem s = inversion_system();
  const GroupAlgebraModel model = group_algebra_model(s);
  CHECK(model.sys->alg().block_dims == std::vector<int>{1, 1, 1});
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK((model.image(a) * model.image(b))
                .approx_equal(model.image(s.h.mul(a, b)), 1e-9));
  // alpha_g(image(h)) = image(g.h) for the inversion generator.
  for (int h = 0; h < 3; ++h)
    CHECK(model.sys->alpha(1)
              .apply(model.image(h))
              .approx_equal(model.image(s.act(1)[h]), 1e-8));

  // A nonabelian base with a two-dimensional block, acted on by conjugation.
  const FiniteGroup s3 = symmetric_group(3);
  const int t = order_n_element(s3, 2);
  std::vector<int> conj(6);
  for (int x = 0; x < 6; ++x) conj[x] = s3.mul(s3.mul(t, x), t);
  std::vector<int> id(6);
  for (int x = 0; x < 6; ++x) id[x] = x;
  const SemidirectSystem cs{s3, cyclic_group(2), {id, conj}};
  const GroupAlgebraModel cmodel = group_algebra_model(cs);
  std::vector<int> dims = cmodel.sys->alg().block_dims;
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<int>{1, 1, 2});
  for (int h = 0; h < 6; ++h)
    CHECK(cmodel.sys->alpha(1)
              .apply(cmodel.image(h))
              .approx_equal(cmodel.image(conj[h]), 1e-8));
}

TEST_CASE("semidirect separation on the triangle group") {
  const SemidirectSystem s = inversion_system();

  const SemidirectSeparation rot = semidirect_map_separate(s, 1, 0);
  CHECK(rot.block_dims == std::vector<int>{1, 1, 1});
  CHECK(rot.cert.lower == doctest::Approx(3.0));
  CHECK(rot.cert.epsilon == doctest::Approx(0.75));
  CHECK(rot.cert.approx.trace_value.real() == doctest::Approx(3.0));
  CHECK(rot.cert.approx.damped.empty());
  CHECK(rot.cert.approx.rep.dim() == 2);
  CHECK(rot.cert.witness_norm == doctest::Approx(std::sqrt(3.0)));
  CHECK(rot.cert.finite_image);
  CHECK(rot.cert.image_order == 2);

  const SemidirectSeparation flip = semidirect_map_separate(s, 0, 1);
  CHECK(flip.cert.lower == doctest::Approx(2.0));
  CHECK(flip.cert.approx.trace_value.real() == doctest::Approx(2.0));
  CHECK(flip.cert.witness_norm == doctest::Approx(2.0));

  const SemidirectSeparation both = semidirect_map_separate(s, 1, 1);
  CHECK(both.cert.lower == doctest::Approx(2.0));
  CHECK(both.cert.approx.trace_value.real() == doctest::Approx(2.0));
  CHECK(both.cert.witness_norm == doctest::Approx(2.0));

  CHECK_THROWS_AS(semidirect_map_separate(s, 0, 0), std::invalid_argument);

  // Every nonidentity element is separated.
  for (int h = 0; h < 3; ++h)
    for (GElem g = 0; g < 2; ++g) {
      if (h == 0 && g == 0) continue;
      const SemidirectSeparation sep = semidirect_map_separate(s, h, g);
      CHECK(sep.cert.approx.trace_value.real() > sep.cert.lower / 2.0);
      CHECK(sep.cert.witness_norm > 1e-9);
    }
}

TEST_CASE("semidirect separation through a two-dimensional block") {
  const FiniteGroup s3 = symmetric_group(3);
  const int t = order_n_element(s3, 2);
  const int r = order_n_element(s3, 3);
  std::vector<int> conj(6), id(6);
  for (int x = 0; x < 6; ++x) {
    conj[x] = s3.mul(s3.mul(t, x), t);
    id[x] = x;
  }
  const SemidirectSystem cs{s3, cyclic_group(2), {id, conj}};

  const SemidirectSeparation sep = semidirect_map_separate(cs, r, 0);
  CHECK(sep.cert.lower == doctest::Approx(3.0));
  CHECK(sep.cert.approx.trace_value.real() == doctest::Approx(3.0));
  CHECK(sep.cert.approx.rep.dim() == 4);
  CHECK(sep.cert.witness_norm == doctest::Approx(std::sqrt(3.0)));
  CHECK(sep.cert.finite_image);
}

TEST_CASE("semidirect separation over the integers") {
  const SemidirectSystem z{cyclic_group(3), {0, 2, 1}};

  const SemidirectSeparation rot = semidirect_map_separate(z, 1, 0);
  CHECK(rot.cert.lower == doctest::Approx(3.0));
  CHECK(rot.cert.approx.trace_value.real() == doctest::Approx(3.0));
  CHECK(rot.cert.approx.rep.dim() == 2);  // two cosets of the period
  CHECK(rot.cert.finite_image);
  CHECK(rot.cert.image_order == 2);

  const SemidirectSeparation shift = semidirect_map_separate(z, 0, 1);
  CHECK(shift.cert.lower == doctest::Approx(2.0));
  // The trace hits the expectation up to the certified damping error.
  CHECK(std::abs(shift.cert.approx.trace_value.real() - 2.0) <=
        shift.cert.approx.certified_bound + 1e-9);
  CHECK(shift.cert.approx.trace_value.real() > 1.0);
  CHECK(shift.cert.witness_norm > 1e-9);
  CHECK(shift.cert.finite_image);
  CHECK(shift.cert.image_order >= 2);
}

TEST_CASE("wreath products of finite groups") {
  const FiniteGroup w = wreath_product(cyclic_group(2), cyclic_group(2));
  CHECK(w.order() == 8);
  CHECK(!w.is_abelian());

  const SemidirectSystem sys =
      wreath_semidirect_system(cyclic_group(2), cyclic_group(2));
  CHECK(sys.h.order() == 4);

  // Base tuple (1, 0) at mixed-radix index 1.
  const SemidirectSeparation sep = semidirect_map_separate(sys, 1, 0);
  CHECK(sep.cert.lower == doctest::Approx(4.0));
  CHECK(sep.cert.epsilon == doctest::Approx(1.0));
  CHECK(sep.cert.approx.trace_value.real() == doctest::Approx(4.0));
  CHECK(sep.cert.approx.rep.dim() == 1);
  CHECK(sep.cert.witness_norm == doctest::Approx(2.0));
  CHECK(sep.cert.image_order == 2);

  for (int h = 0; h < 4; ++h)
    for (GElem g = 0; g < 2; ++g) {
      if (h == 0 && g == 0) continue;
      const SemidirectSeparation each = semidirect_map_separate(sys, h, g);
      CHECK(each.cert.approx.trace_value.real() > each.cert.lower / 2.0);
      CHECK(each.cert.witness_norm > 1e-9);
    }
}

TEST_CASE("wreath elements normalize their support") {
  const WreathElement x{cyclic_group(2), DynGroup::integers(), {{0, 1}, {3, 0}}};
  CHECK(x.entries.size() == 1);
  CHECK(x.entries.count(0) == 1);
  CHECK(WreathElement(cyclic_group(2), DynGroup::integers(), {{5, 0}})
            .is_identity());
  CHECK_THROWS_AS(
      WreathElement(cyclic_group(2), DynGroup::integers(), {{0, 2}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      WreathElement(cyclic_group(2), DynGroup::finite(cyclic_group(2)),
                    {{4, 1}}),
      std::invalid_argument);
}

TEST_CASE("product character representations") {
  const FiniteGroup z2 = cyclic_group(2);
  const FiniteQuotientHom gamma = mod_reduction_hom(2);
  const std::vector<cplx> triv{1.0, 1.0};
  const std::vector<cplx> sign{1.0, -1.0};

  const WreathCharRep rep(z2, gamma, {triv, sign});
  const WreathElement at0{z2, DynGroup::integers(), {{0, 1}}};
  const WreathElement at1{z2, DynGroup::integers(), {{1, 1}}};
  const WreathElement pair{z2, DynGroup::integers(), {{1, 1}, {3, 1}}};
  CHECK(rep.value(at0) == cplx(1.0));
  CHECK(rep.value(at1) == cplx(-1.0));
  CHECK(rep.value(pair) == cplx(1.0));  // positions 1 and 3 share a class
  CHECK(rep.shifted(1).value(at0) == cplx(-1.0));
  CHECK(rep.orbit_size() == 2);

  const WreathCharRep flat(z2, gamma, {triv, triv});
  CHECK(flat.orbit_size() == 1);
  CHECK(flat.value(pair) == cplx(1.0));

  CHECK_THROWS_AS(WreathCharRep(z2, gamma, {triv}), std::invalid_argument);
  CHECK_THROWS_AS(WreathCharRep(z2, gamma, {triv, {1.0, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(WreathCharRep(symmetric_group(3), identity_hom(z2),
                                {{1, 1, 1, 1, 1, 1}, {1, 1, 1, 1, 1, 1}}),
                  std::invalid_argument);
}

TEST_CASE("wreath separation marks one quotient class") {
  const FiniteGroup z2 = cyclic_group(2);

  const WreathSeparation one =
      wreath_separate({z2, DynGroup::integers(), {{0, 1}}});
  CHECK(one.position == 0);
  CHECK(one.modulus == 1);
  CHECK(std::abs(one.value - cplx(-1.0)) < 1e-12);
  CHECK(one.orbit_size == 1);

  const WreathSeparation spread =
      wreath_separate({z2, DynGroup::integers(), {{0, 1}, {3, 1}}});
  CHECK(spread.modulus == 4);
  CHECK(std::abs(spread.value - cplx(-1.0)) < 1e-12);
  CHECK(spread.orbit_size == 4);
  // Shifts of the representation still take unimodular values.
  for (GElem s = 0; s < 4; ++s) {
    const cplx v = spread.rep.shifted(s).value(
        {z2, DynGroup::integers(), {{0, 1}, {3, 1}}});
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
  }

  const WreathSeparation third =
      wreath_separate({cyclic_group(3), DynGroup::integers(), {{2, 2}}});
  CHECK(third.position == 2);
  CHECK(third.modulus == 1);
  CHECK(third.value.real() == doctest::Approx(-0.5));

  const WreathSeparation fin =
      wreath_separate({z2, DynGroup::finite(cyclic_group(2)), {{1, 1}}});
  CHECK(fin.modulus == 2);
  CHECK(std::abs(fin.value - cplx(-1.0)) < 1e-12);
  CHECK(fin.orbit_size == 2);

  CHECK_THROWS_AS(wreath_separate({z2, DynGroup::integers(), {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(wreath_separate({z2, DynGroup::integers(), {{2, 0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      wreath_separate({symmetric_group(3), DynGroup::integers(), {{0, 1}}}),
      std::invalid_argument);
}

TEST_CASE("wreath decision table") {
  const GroupFlags z2 = flags_of(cyclic_group(2), "Z2");
  const GroupFlags s3 = flags_of(symmetric_group(3), "S3");
  const GroupFlags one = flags_of(trivial_group(), "1");
  const GroupFlags z = integer_flags();

  CHECK(wreath_map_decide(z2, z).map);
  CHECK(wreath_map_decide(z2, z).branch ==
        "abelian base, residually finite acting group");
  CHECK(!wreath_map_decide(s3, z).map);
  CHECK(wreath_map_decide(s3, z).branch ==
        "infinite acting group over a nonabelian base");
  CHECK(wreath_map_decide(s3, z2).map);
  CHECK(wreath_map_decide(s3, z2).branch ==
        "almost periodic base, finite acting group");
  CHECK(wreath_map_decide(one, z).map);
  CHECK(wreath_map_decide(one, z).branch == "trivial base");

  const GroupFlags free{"free", false, false, false, true, true};
  CHECK(wreath_map_decide(z2, free).map);
  const GroupFlags opaque{"opaque", false, false, false, false, false};
  CHECK(!wreath_map_decide(z2, opaque).map);
  CHECK(wreath_map_decide(z2, opaque).branch ==
        "acting group is not almost periodic");

  GroupFlags broken = z2;
  broken.rf = false;
  CHECK_THROWS_AS(wreath_map_decide(broken, z2), std::invalid_argument);
}

TEST_CASE("periodic points of the full shift") {
  const PeriodicConfig empty = shift_periodic_point(3, {});
  CHECK(empty.period() == 1);
  CHECK(empty.at(7) == 0);
  CHECK(empty.at(-7) == 0);

  const PeriodicConfig c = shift_periodic_point(2, {{-1, 0}, {0, 1}, {1, 0}});
  CHECK(c.period() == 3);
  CHECK(c.at(-1) == 0);
  CHECK(c.at(0) == 1);
  CHECK(c.at(1) == 0);
  for (std::int64_t i = -6; i <= 6; ++i) CHECK(c.at(i) == c.at(i + 3));

  const PeriodicConfig gap = shift_periodic_point(2, {{0, 1}, {2, 1}});
  CHECK(gap.period() == 3);
  CHECK(gap.at(1) == 0);
  CHECK(gap.at(2) == 1);

  CHECK(shift_periodic_point(1, {{0, 0}}).at(5) == 0);
  CHECK_THROWS_AS(shift_periodic_point(2, {{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(shift_periodic_point(0, {}), std::invalid_argument);
}
