#include "rfdlab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rfdlab {

namespace {

std::vector<int> compose_perm(const std::vector<int>& outer,
                              const std::vector<int>& inner) {
  std::vector<int> out(inner.size());
  for (size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

std::vector<int> invert_perm(const std::vector<int>& p) {
  std::vector<int> out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
  return out;
}

void check_automorphism(const FiniteGroup& h, const std::vector<int>& perm) {
  const int n = h.order();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v])
      throw std::invalid_argument("not a permutation");
    seen[v] = true;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (perm[h.mul(a, b)] != h.mul(perm[a], perm[b]))
        throw std::invalid_argument("permutation is not multiplicative");
}

// Scales the one-dimensional intertwiner space to a unitary with a fixed
// phase gauge: the largest-modulus entry becomes real positive.
CMatrix gauge_unitary(const CMatrix& t) {
  const int d = t.rows();
  CMatrix out = t * std::sqrt(static_cast<double>(d));
  double best = -1.0;
  cplx pivot = 1.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const double mag = std::abs(out.at(r, c));
      if (mag > best + 1e-12) {
        best = mag;
        pivot = out.at(r, c);
      }
    }
  out = out * (std::abs(pivot) / pivot);
  if (!out.is_unitary(1e-8))
    throw std::logic_error("intertwiner did not normalize to a unitary");
  return out;
}

}  // namespace

SemidirectSystem::SemidirectSystem(FiniteGroup base, FiniteGroup acting,
                                   std::vector<std::vector<int>> per_element)
    : h(std::move(base)),
      g(DynGroup::finite(acting)),
      action(std::move(per_element)) {
  if (static_cast<int>(action.size()) != acting.order())
    throw std::invalid_argument("one permutation per acting element required");
  for (const std::vector<int>& perm : action) check_automorphism(h, perm);
  for (int a = 0; a < acting.order(); ++a)
    for (int b = 0; b < acting.order(); ++b)
      if (action[acting.mul(a, b)] != compose_perm(action[a], action[b]))
        throw std::invalid_argument("action is not a homomorphism");
}

SemidirectSystem::SemidirectSystem(FiniteGroup base,
                                   std::vector<int> generator_perm)
    : h(std::move(base)),
      g(DynGroup::integers()),
      gen_action(std::move(generator_perm)) {
  check_automorphism(h, gen_action);
}

std::vector<int> SemidirectSystem::act(GElem t) const {
  if (g.is_finite()) return action[static_cast<size_t>(t)];
  std::vector<int> out(h.order());
  for (int i = 0; i < h.order(); ++i) out[i] = i;
  const std::vector<int> step = t >= 0 ? gen_action : invert_perm(gen_action);
  for (GElem i = 0; i < (t >= 0 ? t : -t); ++i) out = compose_perm(step, out);
  return out;
}

AlgElement GroupAlgebraModel::image(int h) const {
  AlgElement out = AlgElement::zero(sys->alg());
  for (size_t k = 0; k < irreps.size(); ++k) out.blocks[k] = irreps[k].mats[h];
  return out;
}

GroupAlgebraModel group_algebra_model(const SemidirectSystem& s) {
  GroupAlgebraModel out;
  out.irreps = distinct_irreps(s.h);
  std::vector<int> dims;
  for (const UnitaryRep& r : out.irreps) dims.push_back(r.dim);
  const FdAlgebra alg{dims};
  const int nb = static_cast<int>(dims.size());

  // The automorphism of the block algebra induced by a group automorphism:
  // each block is matched to the class of its composition with beta.
  const auto auto_of = [&](const std::vector<int>& beta) {
    std::vector<int> sigma(nb, -1);
    std::vector<CMatrix> u;
    for (int j = 0; j < nb; ++j) {
      bool found = false;
      for (int i = 0; i < nb && !found; ++i) {
        if (dims[i] != dims[j]) continue;
        std::vector<CMatrix> composed;
        composed.reserve(s.h.order());
        for (int x = 0; x < s.h.order(); ++x)
          composed.push_back(out.irreps[i].mats[beta[x]]);
        const IntertwinerSpace sp =
            intertwiner_space(out.irreps[j].mats, composed);
        if (sp.dimension == 1) {
          sigma[j] = i;
          u.push_back(gauge_unitary(sp.basis[0]));
          found = true;
        }
      }
      if (!found)
        throw std::logic_error("block has no image class under the action");
    }
    return AlgAutomorphism{alg, std::move(sigma), std::move(u)};
  };

  if (s.g.is_finite()) {
    std::vector<AlgAutomorphism> per;
    per.reserve(s.action.size());
    for (const std::vector<int>& beta : s.action) per.push_back(auto_of(beta));
    out.sys = std::make_shared<GAlgebra>(alg, s.g.group(), std::move(per));
  } else {
    out.sys = std::make_shared<GAlgebra>(alg, auto_of(s.gen_action));
  }
  return out;
}

SemidirectSeparation semidirect_map_separate(const SemidirectSystem& s, int h,
                                             GElem g, int max_dim) {
  if (h < 0 || h >= s.h.order())
    throw std::invalid_argument("base element out of range");
  if (s.g.is_finite() && (g < 0 || g >= s.g.group().order()))
    throw std::invalid_argument("acting element out of range");
  if (h == s.h.identity() && g == s.g.id())
    throw std::invalid_argument("cannot separate the identity");

  const GroupAlgebraModel model = group_algebra_model(s);
  CrossedElement b = CrossedElement::zero(model.sys);
  b.add_term(g, model.image(h));
  b.add_term(s.g.id(), AlgElement::identity(model.sys->alg()) * cplx(-1.0));

  SemidirectSeparation out{h, g, model.sys->alg().block_dims,
                           certify_separation(b, max_dim)};
  return out;
}

WreathElement::WreathElement(FiniteGroup base, DynGroup grp,
                             std::map<GElem, int> vals)
    : h(std::move(base)), g(std::move(grp)), entries(std::move(vals)) {
  for (auto it = entries.begin(); it != entries.end();) {
    const auto& [pos, val] = *it;
    if (g.is_finite() && (pos < 0 || pos >= g.group().order()))
      throw std::invalid_argument("position out of range");
    if (val < 0 || val >= h.order())
      throw std::invalid_argument("entry out of range");
    it = val == h.identity() ? entries.erase(it) : std::next(it);
  }
}

int FiniteQuotientHom::apply(GElem t) const {
  if (source.is_finite()) return images[static_cast<size_t>(t)];
  int out = target.identity();
  const int step = t >= 0 ? gen_image : target.inv(gen_image);
  for (GElem i = 0; i < (t >= 0 ? t : -t); ++i) out = target.mul(out, step);
  return out;
}

void FiniteQuotientHom::validate() const {
  if (source.is_finite()) {
    const FiniteGroup& s = source.group();
    if (static_cast<int>(images.size()) != s.order())
      throw std::invalid_argument("image table size mismatch");
    for (int v : images)
      if (v < 0 || v >= target.order())
        throw std::invalid_argument("image out of range");
    for (int a = 0; a < s.order(); ++a)
      for (int b = 0; b < s.order(); ++b)
        if (images[s.mul(a, b)] != target.mul(images[a], images[b]))
          throw std::invalid_argument("table is not a homomorphism");
  } else if (gen_image < 0 || gen_image >= target.order()) {
    throw std::invalid_argument("generator image out of range");
  }
}

FiniteQuotientHom mod_reduction_hom(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("modulus must be positive");
  FiniteQuotientHom out{DynGroup::integers(), cyclic_group(static_cast<int>(m)),
                        {}, m == 1 ? 0 : 1};
  return out;
}

FiniteQuotientHom identity_hom(const FiniteGroup& g) {
  std::vector<int> images(g.order());
  for (int i = 0; i < g.order(); ++i) images[i] = i;
  return {DynGroup::finite(g), g, std::move(images), 0};
}

WreathCharRep::WreathCharRep(FiniteGroup base, FiniteQuotientHom gamma,
                             std::vector<std::vector<cplx>> char_table)
    : h_(std::move(base)), gamma_(std::move(gamma)), chars_(std::move(char_table)) {
  if (!h_.is_abelian())
    throw std::invalid_argument("base group must be abelian");
  gamma_.validate();
  if (static_cast<int>(chars_.size()) != gamma_.target.order())
    throw std::invalid_argument("one character per quotient class required");
  for (const std::vector<cplx>& row : chars_) {
    if (static_cast<int>(row.size()) != h_.order())
      throw std::invalid_argument("character length mismatch");
    for (int a = 0; a < h_.order(); ++a) {
      if (std::abs(std::abs(row[a]) - 1.0) > 1e-9)
        throw std::invalid_argument("character value is not unimodular");
      for (int b = 0; b < h_.order(); ++b)
        if (std::abs(row[h_.mul(a, b)] - row[a] * row[b]) > 1e-9)
          throw std::invalid_argument("row is not multiplicative");
    }
  }
}

cplx WreathCharRep::value(const WreathElement& x) const {
  if (!(x.h == h_)) throw std::invalid_argument("element base group mismatch");
  cplx out = 1.0;
  for (const auto& [pos, val] : x.entries) out *= chars_[gamma_.apply(pos)][val];
  return out;
}

WreathCharRep WreathCharRep::shifted(GElem s) const {
  const int t = gamma_.apply(s);
  std::vector<std::vector<cplx>> table(chars_.size());
  for (size_t f = 0; f < chars_.size(); ++f)
    table[f] = chars_[gamma_.target.mul(static_cast<int>(f), t)];
  return {h_, gamma_, std::move(table)};
}

int WreathCharRep::orbit_size() const {
  std::vector<std::vector<std::vector<cplx>>> seen;
  for (int t = 0; t < gamma_.target.order(); ++t) {
    std::vector<std::vector<cplx>> table(chars_.size());
    for (size_t f = 0; f < chars_.size(); ++f)
      table[f] = chars_[gamma_.target.mul(static_cast<int>(f), t)];
    if (std::find(seen.begin(), seen.end(), table) == seen.end())
      seen.push_back(std::move(table));
  }
  return static_cast<int>(seen.size());
}

WreathSeparation wreath_separate(const WreathElement& x) {
  if (x.is_identity())
    throw std::invalid_argument("cannot separate the identity");
  if (!x.h.is_abelian())
    throw std::invalid_argument("base group must be abelian");

  const GElem position = x.entries.begin()->first;
  const int h0 = x.entries.begin()->second;

  // A character of the base not vanishing at h0; exists because characters
  // of an abelian group separate its elements.
  const CharacterTable ct = characters(x.h);
  std::vector<cplx> chi;
  for (const std::vector<int>& angles : ct.angles) {
    if (angles[h0] % ct.phase_den != 0) {
      const UnitaryRep rep = character_rep(x.h, angles, ct.phase_den);
      for (const CMatrix& m : rep.mats) chi.push_back(m.at(0, 0));
      break;
    }
  }
  if (chi.empty()) throw std::logic_error("no character separates the entry");

  FiniteQuotientHom gamma =
      x.g.is_finite()
          ? identity_hom(x.g.group())
          : mod_reduction_hom([&] {
              std::vector<std::int64_t> keys;
              for (const auto& [pos, val] : x.entries) keys.push_back(pos);
              return quotient_search_Z(keys).modulus;
            }());
  const std::int64_t modulus = gamma.target.order();

  const int marked = gamma.apply(position);
  std::vector<std::vector<cplx>> table(
      gamma.target.order(), std::vector<cplx>(x.h.order(), 1.0));
  table[marked] = chi;

  WreathSeparation out{WreathCharRep(x.h, std::move(gamma), std::move(table)),
                       position, 0.0, modulus, 0};
  out.value = out.rep.value(x);
  if (std::abs(out.value - chi[h0]) > 1e-12)
    throw std::logic_error("quotient failed to isolate the marked position");
  if (std::abs(out.value - 1.0) < 1e-9)
    throw std::logic_error("separating value collapsed to one");
  out.orbit_size = out.rep.orbit_size();
  if (out.orbit_size > modulus)
    throw std::logic_error("orbit exceeds the quotient order");
  return out;
}

void GroupFlags::validate() const {
  if (trivial && !(abelian && finite))
    throw std::invalid_argument(name + ": trivial group must be abelian and finite");
  if (finite && !(map && rf))
    throw std::invalid_argument(name + ": finite group must be MAP and RF");
  if (rf && !map)
    throw std::invalid_argument(name + ": RF group must be MAP");
  if (abelian && !map)
    throw std::invalid_argument(name + ": abelian group must be MAP");
}

GroupFlags flags_of(const FiniteGroup& g, std::string name) {
  return {std::move(name), g.order() == 1, g.is_abelian(), true, true, true};
}

GroupFlags integer_flags() { return {"Z", false, true, false, true, true}; }

WreathVerdict wreath_map_decide(const GroupFlags& base,
                                const GroupFlags& acting) {
  base.validate();
  acting.validate();
  if (base.trivial && acting.map) return {true, "trivial base"};
  if (base.map && acting.finite)
    return {true, "almost periodic base, finite acting group"};
  if (base.abelian && acting.rf)
    return {true, "abelian base, residually finite acting group"};
  if (!base.map) return {false, "base is not almost periodic"};
  if (!acting.map) return {false, "acting group is not almost periodic"};
  if (!acting.rf) return {false, "acting group is not residually finite"};
  return {false, "infinite acting group over a nonabelian base"};
}

SemidirectSystem wreath_semidirect_system(const FiniteGroup& h,
                                          const FiniteGroup& g) {
  const int n = g.order();
  const FiniteGroup base = direct_power(h, n);
  std::vector<std::vector<int>> theta(n, std::vector<int>(base.order()));
  for (int a = 0; a < n; ++a) {
    for (int t = 0; t < base.order(); ++t) {
      const std::vector<int> digits = power_digits(t, h.order(), n);
      std::vector<int> moved(n);
      for (int x = 0; x < n; ++x) moved[x] = digits[g.mul(g.inv(a), x)];
      theta[a][t] = static_cast<int>(power_index(moved, h.order()));
    }
  }
  return {base, g, std::move(theta)};
}

FiniteGroup wreath_product(const FiniteGroup& h, const FiniteGroup& g) {
  const SemidirectSystem sys = wreath_semidirect_system(h, g);
  return semidirect_product(sys.h, g, sys.action);
}

int PeriodicConfig::at(std::int64_t i) const {
  const std::int64_t p = period();
  return word[static_cast<size_t>(((i - base) % p + p) % p)];
}

PeriodicConfig shift_periodic_point(
    int alphabet, const std::map<std::int64_t, int>& pattern) {
  if (alphabet < 1) throw std::invalid_argument("alphabet must be nonempty");
  for (const auto& [pos, letter] : pattern)
    if (letter < 0 || letter >= alphabet)
      throw std::invalid_argument("letter outside the alphabet");
  PeriodicConfig out{alphabet, 0, {0}};
  if (pattern.empty()) return out;
  out.base = pattern.begin()->first;
  const std::int64_t span = pattern.rbegin()->first - out.base + 1;
  out.word.assign(static_cast<size_t>(span), 0);
  for (const auto& [pos, letter] : pattern)
    out.word[static_cast<size_t>(pos - out.base)] = letter;
  return out;
}

}  // namespace rfdlab
