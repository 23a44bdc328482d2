#pragma once

#include "rfdlab/group.hpp"

namespace rfdlab {

/// One-dimensional representations with exact root-of-unity values, stored as
/// integer angles: chi(g) = exp(2 pi i angle[g] / phase_den).
struct CharacterTable {
  int phase_den = 1;
  std::vector<std::vector<int>> angles;  // one row per character
};

/// Enumerates all one-dimensional reps by assigning root-of-unity angles to a
/// generating sequence and extending multiplicatively; exact integer
/// arithmetic throughout. For abelian groups this is the full dual.
CharacterTable characters(const FiniteGroup& g);

UnitaryRep character_rep(const FiniteGroup& g, const std::vector<int>& angles,
                         int phase_den);

/// Pairwise inequivalent irreducible summands of the left regular
/// representation, obtained by commutant splitting. Deterministic for a fixed
/// seed; sum of squared dimensions equals the group order.
std::vector<UnitaryRep> distinct_irreps(const FiniteGroup& g,
                                        std::uint64_t seed = 0);

}  // namespace rfdlab
