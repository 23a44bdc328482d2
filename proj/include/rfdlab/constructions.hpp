#pragma once

// Separation for composite groups built from finite pieces: semidirect
// products handled through the group algebra of the normal part, wreath
// products of abelian groups handled through product characters, and periodic
// points of full shifts.

#include <cstdint>
#include <map>

#include "rfdlab/crossed.hpp"
#include "rfdlab/irreps.hpp"

namespace rfdlab {

// H with an action of G (finite or Z) by automorphisms, each stored as a
// permutation of the element indices of H.
struct SemidirectSystem {
  FiniteGroup h;
  DynGroup g;
  std::vector<std::vector<int>> action;  // finite G: one permutation per element
  std::vector<int> gen_action;           // Z: permutation for the generator

  SemidirectSystem(FiniteGroup base, FiniteGroup acting,
                   std::vector<std::vector<int>> per_element);
  SemidirectSystem(FiniteGroup base, std::vector<int> generator_perm);
  std::vector<int> act(GElem t) const;
};

// The group algebra of the normal part as a block algebra carrying the
// induced action: one block per irreducible class, with the action matched
// across blocks by intertwiners.
struct GroupAlgebraModel {
  std::vector<UnitaryRep> irreps;
  GAlgebraPtr sys;

  AlgElement image(int h) const;  // blockwise irrep images of a group element
};

GroupAlgebraModel group_algebra_model(const SemidirectSystem& s);

struct SemidirectSeparation {
  int h;
  GElem g;
  std::vector<int> block_dims;
  // witness_norm inside is the distance of the represented element from the
  // identity operator.
  CrossedCertificateData cert;
};

// Finite-dimensional representation separating (h, g) from the identity.
SemidirectSeparation semidirect_map_separate(const SemidirectSystem& s, int h,
                                             GElem g, int max_dim = 4096);

// Finitely supported tuple over G with entries in H; identity entries are
// dropped on construction.
struct WreathElement {
  FiniteGroup h;
  DynGroup g;
  std::map<GElem, int> entries;

  WreathElement(FiniteGroup base, DynGroup grp, std::map<GElem, int> vals);
  bool is_identity() const { return entries.empty(); }
};

// Homomorphism onto a finite group: a full image table for finite sources,
// the image of the generator for Z.
struct FiniteQuotientHom {
  DynGroup source;
  FiniteGroup target;
  std::vector<int> images;  // finite case, one entry per source element
  int gen_image = 0;        // Z case

  int apply(GElem t) const;
  void validate() const;
};

FiniteQuotientHom mod_reduction_hom(std::int64_t m);
FiniteQuotientHom identity_hom(const FiniteGroup& g);

// Product-of-characters representation of a direct sum of copies of an
// abelian group, constant on fibers of a finite quotient of the index group.
class WreathCharRep {
 public:
  // char_table[f][h] is the character value assigned to quotient class f.
  WreathCharRep(FiniteGroup base, FiniteQuotientHom gamma,
                std::vector<std::vector<cplx>> char_table);

  cplx value(const WreathElement& x) const;
  // Precomposes positions with translation by s.
  WreathCharRep shifted(GElem s) const;
  // Distinct translates of the assignment; at most the target order.
  int orbit_size() const;

  const FiniteGroup& base() const { return h_; }
  const FiniteQuotientHom& hom() const { return gamma_; }
  const std::vector<std::vector<cplx>>& table() const { return chars_; }

 private:
  FiniteGroup h_;
  FiniteQuotientHom gamma_;
  std::vector<std::vector<cplx>> chars_;
};

struct WreathSeparation {
  WreathCharRep rep;
  GElem position;        // support point carrying the nontrivial character
  cplx value;            // rep value at the input, away from 1
  std::int64_t modulus;  // order of the finite quotient used
  int orbit_size = 0;
};

// One-dimensional representation with finite shift orbit whose value at x
// differs from 1. Requires an abelian base.
WreathSeparation wreath_separate(const WreathElement& x);

// Declared properties of a group used by the wreath decision table.
struct GroupFlags {
  std::string name;
  bool trivial = false;
  bool abelian = false;
  bool finite = false;
  bool map = false;  // finite-dimensional unitaries separate elements
  bool rf = false;   // finite quotients separate elements
  void validate() const;
};

GroupFlags flags_of(const FiniteGroup& g, std::string name);
GroupFlags integer_flags();

struct WreathVerdict {
  bool map = false;
  std::string branch;  // the applicable case, or the violated necessity
};

// Decision table for whether the wreath product of base by acting admits
// enough finite-dimensional unitary representations.
WreathVerdict wreath_map_decide(const GroupFlags& base,
                                const GroupFlags& acting);

// The full wreath product of finite groups as a Cayley table: base tuples
// indexed mixed-radix over the acting group's elements, pair (t, g) at
// t * |G| + g.
FiniteGroup wreath_product(const FiniteGroup& h, const FiniteGroup& g);
// The same data presented as the acting group permuting tuple coordinates.
SemidirectSystem wreath_semidirect_system(const FiniteGroup& h,
                                          const FiniteGroup& g);

struct PeriodicConfig {
  int alphabet = 1;
  std::int64_t base = 0;  // window start
  std::vector<int> word;  // one full period

  int period() const { return static_cast<int>(word.size()); }
  int at(std::int64_t i) const;
};

// Periodic configuration agreeing with the pattern on its window; gaps are
// filled with letter 0 and the period is the window length.
PeriodicConfig shift_periodic_point(int alphabet,
                                    const std::map<std::int64_t, int>& pattern);

}  // namespace rfdlab
