#include "rfdlab/irreps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rfdlab {

namespace {

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

}  // namespace

CharacterTable characters(const FiniteGroup& g) {
  int phase_den = 1;
  for (int x = 0; x < g.order(); ++x)
    phase_den = lcm_int(phase_den, g.element_order(x));
  const std::vector<int> gens = g.generators();
  CharacterTable out;
  out.phase_den = phase_den;
  if (gens.empty()) {
    out.angles.push_back(std::vector<int>(g.order(), 0));
    return out;
  }
  std::vector<int> gen_orders;
  for (int gen : gens) gen_orders.push_back(g.element_order(gen));
  std::vector<int> choice(gens.size(), 0);
  while (true) {
    // Candidate: gens[i] -> angle (phase_den/ord_i) * choice[i]; extend by
    // breadth-first multiplication and reject on any inconsistency.
    std::vector<int> angle(g.order(), -1);
    angle[g.identity()] = 0;
    std::vector<int> frontier{g.identity()};
    bool ok = true;
    while (!frontier.empty() && ok) {
      std::vector<int> next;
      for (int x : frontier)
        for (size_t i = 0; i < gens.size() && ok; ++i) {
          const int y = g.mul(gens[i], x);
          const int a =
              (angle[x] + (phase_den / gen_orders[i]) * choice[i]) % phase_den;
          if (angle[y] < 0) {
            angle[y] = a;
            next.push_back(y);
          } else if (angle[y] != a) {
            ok = false;
          }
        }
      frontier = std::move(next);
    }
    if (ok) {
      for (int x = 0; x < g.order() && ok; ++x)
        for (int y = 0; y < g.order() && ok; ++y)
          if (angle[g.mul(x, y)] != (angle[x] + angle[y]) % phase_den) ok = false;
    }
    if (ok) out.angles.push_back(std::move(angle));
    // Next choice tuple.
    size_t pos = 0;
    while (pos < choice.size()) {
      if (++choice[pos] < gen_orders[pos]) break;
      choice[pos] = 0;
      ++pos;
    }
    if (pos == choice.size()) break;
  }
  return out;
}

UnitaryRep character_rep(const FiniteGroup& g, const std::vector<int>& angles,
                         int phase_den) {
  return UnitaryRep::character(g, angles, phase_den);
}

namespace {

// Recursively splits a unitary rep along its commutant until irreducible.
void split_rep(const UnitaryRep& rep, Rng& rng, std::vector<UnitaryRep>& out,
               int depth) {
  if (depth > 16) throw std::logic_error("irrep splitting recursion too deep");
  const IntertwinerSpace comm = intertwiner_space(rep.mats, rep.mats);
  if (comm.dimension == 1) {
    out.push_back(rep);
    return;
  }
  for (int attempt = 0; attempt < 16; ++attempt) {
    CMatrix t(rep.dim, rep.dim);
    for (const auto& b : comm.basis) t += b * random_cplx(rng);
    t = (t + t.adjoint()) * cplx(0.5, 0.0);
    auto [evals, vecs] = t.hermitian_eigensystem();
    const double spread = evals.back() - evals.front();
    if (spread < 1e-8) continue;  // unlucky scalar draw
    // Cluster eigenvalues; each cluster spans an invariant subspace.
    std::vector<std::pair<int, int>> clusters;
    int start = 0;
    for (int i = 1; i <= rep.dim; ++i) {
      if (i == rep.dim || evals[i] - evals[i - 1] > 1e-6 * std::max(1.0, spread)) {
        clusters.emplace_back(start, i);
        start = i;
      }
    }
    if (clusters.size() < 2) continue;
    for (auto [lo, hi] : clusters) {
      const int d = hi - lo;
      CMatrix q(rep.dim, d);
      for (int i = 0; i < rep.dim; ++i)
        for (int j = 0; j < d; ++j) q.at(i, j) = vecs.at(i, lo + j);
      std::vector<CMatrix> sub;
      for (const auto& m : rep.mats) sub.push_back(q.adjoint() * m * q);
      split_rep(UnitaryRep{rep.group, d, std::move(sub)}, rng, out, depth + 1);
    }
    return;
  }
  throw std::logic_error("failed to split a reducible representation");
}

}  // namespace

std::vector<UnitaryRep> distinct_irreps(const FiniteGroup& g,
                                        std::uint64_t seed) {
  Rng rng(seed ^ 0x5eedf00dULL);
  std::vector<UnitaryRep> pieces;
  split_rep(UnitaryRep::regular(g), rng, pieces, 0);
  // Keep one representative per equivalence class.
  std::vector<UnitaryRep> distinct;
  for (auto& p : pieces) {
    bool fresh = true;
    for (const auto& q : distinct) {
      if (p.dim != q.dim) continue;
      if (intertwiner_space(p.mats, q.mats).dimension > 0) {
        fresh = false;
        break;
      }
    }
    if (fresh) distinct.push_back(std::move(p));
  }
  std::stable_sort(distinct.begin(), distinct.end(),
                   [](const UnitaryRep& a, const UnitaryRep& b) {
                     if (a.dim != b.dim) return a.dim < b.dim;
                     for (int x = 0; x < a.group.order(); ++x) {
                       const cplx ta = a.mats[x].trace(), tb = b.mats[x].trace();
                       if (std::abs(ta - tb) > 1e-6) {
                         if (std::abs(ta.real() - tb.real()) > 1e-6)
                           return ta.real() < tb.real();
                         return ta.imag() < tb.imag();
                       }
                     }
                     return false;
                   });
  int sumsq = 0;
  for (const auto& r : distinct) {
    r.validate(1e-8);
    sumsq += r.dim * r.dim;
  }
  if (sumsq != g.order())
    throw std::logic_error("irrep dimensions do not exhaust the group order");
  return distinct;
}

}  // namespace rfdlab
