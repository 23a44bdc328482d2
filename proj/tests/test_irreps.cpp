#include "doctest.h"

#include "rfdlab/irreps.hpp"

using namespace rfdlab;

TEST_CASE("characters of cyclic groups") {
  const CharacterTable ct = characters(cyclic_group(4));
  CHECK(ct.phase_den == 4);
  REQUIRE(ct.angles.size() == 4);
  // Each character is determined by its angle at the generator; all four
  // residues appear exactly once.
  std::vector<int> at_gen;
  for (const auto& a : ct.angles) {
    CHECK(a[0] == 0);
    at_gen.push_back(a[1]);
  }
  std::sort(at_gen.begin(), at_gen.end());
  CHECK(at_gen == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("characters of the klein group separate points") {
  const FiniteGroup v4 = direct_product(cyclic_group(2), cyclic_group(2));
  const CharacterTable ct = characters(v4);
  CHECK(ct.phase_den == 2);
  REQUIRE(ct.angles.size() == 4);
  for (int h = 1; h < 4; ++h) {
    bool separated = false;
    for (const auto& a : ct.angles)
      if (a[h] != 0) separated = true;
    CHECK(separated);
  }
}

TEST_CASE("characters of S3 see only the abelianization") {
  const CharacterTable ct = characters(symmetric_group(3));
  CHECK(ct.angles.size() == 2);  // trivial and sign
}

TEST_CASE("character_rep validates") {
  const FiniteGroup z6 = cyclic_group(6);
  const CharacterTable ct = characters(z6);
  REQUIRE(ct.angles.size() == 6);
  for (const auto& a : ct.angles)
    CHECK(character_rep(z6, a, ct.phase_den).validation_error() < 1e-12);
}

TEST_CASE("distinct irreps of abelian groups are the characters") {
  const auto irr = distinct_irreps(cyclic_group(5), 3);
  REQUIRE(irr.size() == 5);
  for (const auto& r : irr) CHECK(r.dim == 1);
}

TEST_CASE("distinct irreps of S3") {
  const auto irr = distinct_irreps(symmetric_group(3), 5);
  REQUIRE(irr.size() == 3);
  CHECK(irr[0].dim == 1);
  CHECK(irr[1].dim == 1);
  CHECK(irr[2].dim == 2);
  for (const auto& r : irr) {
    CHECK(r.validation_error() < 1e-9);
    CHECK(commutant_dimension(r.mats) == 1);
  }
  // Pairwise inequivalent.
  CHECK(intertwiner_space(irr[0].mats, irr[1].mats).dimension == 0);
  CHECK(intertwiner_space(irr[0].mats, irr[2].mats).dimension == 0);
}

TEST_CASE("distinct irreps of D4") {
  const auto irr = distinct_irreps(dihedral_group(4), 7);
  REQUIRE(irr.size() == 5);
  int one = 0, two = 0;
  for (const auto& r : irr) {
    if (r.dim == 1) ++one;
    if (r.dim == 2) ++two;
  }
  CHECK(one == 4);
  CHECK(two == 1);
}

TEST_CASE("distinct irreps are deterministic in the seed") {
  const auto a = distinct_irreps(symmetric_group(3), 42);
  const auto b = distinct_irreps(symmetric_group(3), 42);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(a[i].mats[3].approx_equal(b[i].mats[3], 0.0));
}
