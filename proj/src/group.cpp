#include "rfdlab/group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace rfdlab {

FiniteGroup::FiniteGroup(int order, std::vector<int> table)
    : order_(order), table_(std::move(table)) {
  if (order <= 0) throw std::invalid_argument("group order must be positive");
  if (table_.size() != static_cast<size_t>(order) * order)
    throw std::invalid_argument("cayley table size mismatch");
  for (int v : table_)
    if (v < 0 || v >= order)
      throw std::invalid_argument("cayley table entry out of range");
  // Locate the two-sided identity.
  identity_ = -1;
  for (int e = 0; e < order; ++e) {
    bool ok = true;
    for (int a = 0; a < order && ok; ++a)
      ok = mul(e, a) == a && mul(a, e) == a;
    if (ok) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) throw std::invalid_argument("no identity element");
  inverse_.assign(order, -1);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b)
      if (mul(a, b) == identity_ && mul(b, a) == identity_) {
        inverse_[a] = b;
        break;
      }
    if (inverse_[a] < 0) throw std::invalid_argument("missing inverse");
  }
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      for (int c = 0; c < order; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw std::invalid_argument("non-associative table");
}

int FiniteGroup::element_order(int g) const {
  int x = g, n = 1;
  while (x != identity_) {
    x = mul(x, g);
    ++n;
    if (n > order_) throw std::logic_error("order computation diverged");
  }
  return n;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < order_; ++a)
    for (int b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::optional<int> FiniteGroup::cyclic_generator() const {
  for (int g = 0; g < order_; ++g)
    if (element_order(g) == order_) return g;
  return std::nullopt;
}

std::vector<int> FiniteGroup::generated_subgroup(
    const std::vector<int>& gens) const {
  std::vector<bool> in(order_, false);
  in[identity_] = true;
  std::vector<int> elems{identity_};
  for (size_t head = 0; head < elems.size(); ++head)
    for (int g : gens) {
      for (int x : {mul(elems[head], g), mul(g, elems[head])})
        if (!in[x]) {
          in[x] = true;
          elems.push_back(x);
        }
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

std::vector<int> FiniteGroup::generators() const {
  std::vector<int> gens;
  std::vector<int> span = generated_subgroup(gens);
  while (static_cast<int>(span.size()) < order_) {
    int next = -1;
    for (int g = 0; g < order_; ++g)
      if (!std::binary_search(span.begin(), span.end(), g)) {
        next = g;
        break;
      }
    gens.push_back(next);
    span = generated_subgroup(gens);
  }
  return gens;
}

FiniteGroup trivial_group() { return FiniteGroup(1, {0}); }

FiniteGroup cyclic_group(int n) {
  std::vector<int> t(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[static_cast<size_t>(a) * n + b] = (a + b) % n;
  return FiniteGroup(n, std::move(t));
}

FiniteGroup symmetric_group(int n) {
  if (n < 1 || n > 5) throw std::invalid_argument("symmetric_group needs 1<=n<=5");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);
  const int order = static_cast<int>(perms.size());
  std::vector<int> t(static_cast<size_t>(order) * order);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) {
      std::vector<int> c(n);
      for (int x = 0; x < n; ++x) c[x] = perms[a][perms[b][x]];
      t[static_cast<size_t>(a) * order + b] = index[c];
    }
  return FiniteGroup(order, std::move(t));
}

FiniteGroup dihedral_group(int n) {
  if (n < 1) throw std::invalid_argument("dihedral_group needs n>=1");
  const int order = 2 * n;
  auto idx = [n](int i, int j) { return i + n * j; };
  std::vector<int> t(static_cast<size_t>(order) * order);
  for (int i1 = 0; i1 < n; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j2 = 0; j2 < 2; ++j2) {
          // (r^i1 s^j1)(r^i2 s^j2) = r^{i1 + (-1)^{j1} i2} s^{j1+j2}
          const int i = ((i1 + (j1 ? n - i2 : i2)) % n + n) % n;
          const int j = (j1 + j2) % 2;
          t[static_cast<size_t>(idx(i1, j1)) * order + idx(i2, j2)] = idx(i, j);
        }
  return FiniteGroup(order, std::move(t));
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const int order = a.order() * b.order();
  std::vector<int> t(static_cast<size_t>(order) * order);
  auto idx = [&](int x, int y) { return x * b.order() + y; };
  for (int x1 = 0; x1 < a.order(); ++x1)
    for (int y1 = 0; y1 < b.order(); ++y1)
      for (int x2 = 0; x2 < a.order(); ++x2)
        for (int y2 = 0; y2 < b.order(); ++y2)
          t[static_cast<size_t>(idx(x1, y1)) * order + idx(x2, y2)] =
              idx(a.mul(x1, x2), b.mul(y1, y2));
  return FiniteGroup(order, std::move(t));
}

std::vector<int> power_digits(std::int64_t index, int base, int k) {
  std::vector<int> d(k);
  for (int i = 0; i < k; ++i) {
    d[i] = static_cast<int>(index % base);
    index /= base;
  }
  return d;
}

std::int64_t power_index(const std::vector<int>& digits, int base) {
  std::int64_t idx = 0;
  for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i)
    idx = idx * base + digits[i];
  return idx;
}

FiniteGroup direct_power(const FiniteGroup& h, int k) {
  if (k < 1) throw std::invalid_argument("direct_power needs k>=1");
  std::int64_t order64 = 1;
  for (int i = 0; i < k; ++i) order64 *= h.order();
  if (order64 > 4096) throw std::invalid_argument("direct_power too large");
  const int order = static_cast<int>(order64);
  std::vector<int> t(static_cast<size_t>(order) * order);
  for (int a = 0; a < order; ++a) {
    const auto da = power_digits(a, h.order(), k);
    for (int b = 0; b < order; ++b) {
      const auto db = power_digits(b, h.order(), k);
      std::vector<int> dc(k);
      for (int i = 0; i < k; ++i) dc[i] = h.mul(da[i], db[i]);
      t[static_cast<size_t>(a) * order + b] =
          static_cast<int>(power_index(dc, h.order()));
    }
  }
  return FiniteGroup(order, std::move(t));
}

FiniteGroup semidirect_product(const FiniteGroup& h, const FiniteGroup& g,
                               const std::vector<std::vector<int>>& theta) {
  if (static_cast<int>(theta.size()) != g.order())
    throw std::invalid_argument("need one automorphism per group element");
  for (const auto& t : theta) {
    if (static_cast<int>(t.size()) != h.order())
      throw std::invalid_argument("automorphism domain mismatch");
    std::vector<bool> seen(h.order(), false);
    for (int v : t) {
      if (v < 0 || v >= h.order() || seen[v])
        throw std::invalid_argument("automorphism is not a bijection");
      seen[v] = true;
    }
    for (int a = 0; a < h.order(); ++a)
      for (int b = 0; b < h.order(); ++b)
        if (t[h.mul(a, b)] != h.mul(t[a], t[b]))
          throw std::invalid_argument("theta entry is not an automorphism");
  }
  for (int x = 0; x < h.order(); ++x) {
    if (theta[g.identity()][x] != x)
      throw std::invalid_argument("theta at identity must be trivial");
  }
  for (int g1 = 0; g1 < g.order(); ++g1)
    for (int g2 = 0; g2 < g.order(); ++g2)
      for (int x = 0; x < h.order(); ++x)
        if (theta[g.mul(g1, g2)][x] != theta[g1][theta[g2][x]])
          throw std::invalid_argument("theta is not an action");
  const int order = h.order() * g.order();
  auto idx = [&](int hh, int gg) { return hh * g.order() + gg; };
  std::vector<int> t(static_cast<size_t>(order) * order);
  for (int h1 = 0; h1 < h.order(); ++h1)
    for (int g1 = 0; g1 < g.order(); ++g1)
      for (int h2 = 0; h2 < h.order(); ++h2)
        for (int g2 = 0; g2 < g.order(); ++g2)
          t[static_cast<size_t>(idx(h1, g1)) * order + idx(h2, g2)] =
              idx(h.mul(h1, theta[g1][h2]), g.mul(g1, g2));
  return FiniteGroup(order, std::move(t));
}

PermGroup group_from_permutations(int degree,
                                  const std::vector<std::vector<int>>& gens) {
  std::vector<int> id(degree);
  std::iota(id.begin(), id.end(), 0);
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> elems{id};
  index[id] = 0;
  for (size_t head = 0; head < elems.size(); ++head)
    for (const auto& g : gens) {
      if (static_cast<int>(g.size()) != degree)
        throw std::invalid_argument("generator degree mismatch");
      std::vector<int> prod(degree);
      for (int x = 0; x < degree; ++x) prod[x] = g[elems[head][x]];
      if (!index.count(prod)) {
        index[prod] = static_cast<int>(elems.size());
        elems.push_back(prod);
        if (elems.size() > 5040)
          throw std::invalid_argument("permutation closure too large");
      }
    }
  const int order = static_cast<int>(elems.size());
  std::vector<int> t(static_cast<size_t>(order) * order);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) {
      std::vector<int> c(degree);
      for (int x = 0; x < degree; ++x) c[x] = elems[a][elems[b][x]];
      t[static_cast<size_t>(a) * order + b] = index.at(c);
    }
  return PermGroup{FiniteGroup(order, std::move(t)), std::move(elems)};
}

Subgroup subgroup_from_elements(const FiniteGroup& g,
                                const std::vector<int>& elems) {
  std::vector<int> sorted = elems;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> parent_to_sub(g.order(), -1);
  for (size_t i = 0; i < sorted.size(); ++i) parent_to_sub[sorted[i]] = static_cast<int>(i);
  const int n = static_cast<int>(sorted.size());
  std::vector<int> t(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int p = g.mul(sorted[a], sorted[b]);
      if (parent_to_sub[p] < 0)
        throw std::invalid_argument("subset is not closed under multiplication");
      t[static_cast<size_t>(a) * n + b] = parent_to_sub[p];
    }
  return Subgroup{FiniteGroup(n, std::move(t)), std::move(sorted),
                  std::move(parent_to_sub)};
}

void GroupHom::validate() const {
  if (static_cast<int>(image.size()) != source.order())
    throw std::invalid_argument("hom image table size mismatch");
  for (int v : image)
    if (v < 0 || v >= target.order())
      throw std::invalid_argument("hom image out of range");
  for (int a = 0; a < source.order(); ++a)
    for (int b = 0; b < source.order(); ++b)
      if (image[source.mul(a, b)] != target.mul(image[a], image[b]))
        throw std::invalid_argument("not a homomorphism");
}

void GroupAction::validate() const {
  if (static_cast<int>(images.size()) != group.order())
    throw std::invalid_argument("action table size mismatch");
  for (const auto& p : images) {
    if (static_cast<int>(p.size()) != set_size)
      throw std::invalid_argument("action permutation size mismatch");
    std::vector<bool> seen(set_size, false);
    for (int v : p) {
      if (v < 0 || v >= set_size || seen[v])
        throw std::invalid_argument("action image is not a permutation");
      seen[v] = true;
    }
  }
  for (int x = 0; x < set_size; ++x)
    if (images[group.identity()][x] != x)
      throw std::invalid_argument("identity must act trivially");
  for (int a = 0; a < group.order(); ++a)
    for (int b = 0; b < group.order(); ++b)
      for (int x = 0; x < set_size; ++x)
        if (images[group.mul(a, b)][x] != images[a][images[b][x]])
          throw std::invalid_argument("action is not a homomorphism");
}

GroupAction action_from_images(const FiniteGroup& g,
                               const std::vector<int>& gens,
                               const std::vector<std::vector<int>>& gen_perms,
                               int set_size) {
  if (gens.size() != gen_perms.size())
    throw std::invalid_argument("generator/permutation count mismatch");
  std::vector<std::vector<int>> images(g.order());
  std::vector<int> id(set_size);
  std::iota(id.begin(), id.end(), 0);
  images[g.identity()] = id;
  std::vector<int> frontier{g.identity()};
  std::vector<bool> known(g.order(), false);
  known[g.identity()] = true;
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int cur : frontier)
      for (size_t k = 0; k < gens.size(); ++k) {
        const int prod = g.mul(gens[k], cur);
        if (known[prod]) continue;
        std::vector<int> perm(set_size);
        for (int x = 0; x < set_size; ++x) perm[x] = gen_perms[k][images[cur][x]];
        images[prod] = std::move(perm);
        known[prod] = true;
        next.push_back(prod);
      }
    frontier = std::move(next);
  }
  for (bool k : known)
    if (!k) throw std::invalid_argument("given elements do not generate the group");
  GroupAction action{g, set_size, std::move(images)};
  action.validate();
  return action;
}

std::vector<std::vector<int>> orbits(const GroupAction& action) {
  std::vector<bool> seen(action.set_size, false);
  std::vector<std::vector<int>> out;
  for (int x = 0; x < action.set_size; ++x) {
    if (seen[x]) continue;
    std::vector<int> orb;
    std::queue<int> q;
    q.push(x);
    seen[x] = true;
    while (!q.empty()) {
      const int y = q.front();
      q.pop();
      orb.push_back(y);
      for (int g = 0; g < action.group.order(); ++g) {
        const int z = action.apply(g, y);
        if (!seen[z]) {
          seen[z] = true;
          q.push(z);
        }
      }
    }
    std::sort(orb.begin(), orb.end());
    out.push_back(std::move(orb));
  }
  return out;
}

Subgroup stabilizer(const GroupAction& action, int x) {
  if (x < 0 || x >= action.set_size)
    throw std::invalid_argument("stabilizer point out of range");
  std::vector<int> elems;
  for (int g = 0; g < action.group.order(); ++g)
    if (action.apply(g, x) == x) elems.push_back(g);
  return subgroup_from_elements(action.group, elems);
}

double UnitaryRep::validation_error() const {
  if (static_cast<int>(mats.size()) != group.order())
    throw std::invalid_argument("rep table size mismatch");
  double err = 0.0;
  const CMatrix id = CMatrix::identity(dim);
  for (const auto& m : mats) {
    if (m.rows() != dim || m.cols() != dim)
      throw std::invalid_argument("rep matrix dimension mismatch");
    err = std::max(err, ((m.adjoint() * m) - id).max_abs());
  }
  err = std::max(err, (mats[group.identity()] - id).max_abs());
  for (int a = 0; a < group.order(); ++a)
    for (int b = 0; b < group.order(); ++b)
      err = std::max(err,
                     (mats[group.mul(a, b)] - mats[a] * mats[b]).max_abs());
  return err;
}

void UnitaryRep::validate(double tol) const {
  if (validation_error() > tol)
    throw std::invalid_argument("unitary representation check failed");
}

UnitaryRep UnitaryRep::trivial(const FiniteGroup& g) {
  return UnitaryRep{g, 1,
                    std::vector<CMatrix>(g.order(), CMatrix::identity(1))};
}

UnitaryRep UnitaryRep::regular(const FiniteGroup& g) {
  std::vector<CMatrix> mats;
  mats.reserve(g.order());
  for (int a = 0; a < g.order(); ++a) {
    CMatrix m(g.order(), g.order());
    for (int h = 0; h < g.order(); ++h) m.at(g.mul(a, h), h) = 1.0;
    mats.push_back(std::move(m));
  }
  return UnitaryRep{g, g.order(), std::move(mats)};
}

UnitaryRep UnitaryRep::character(const FiniteGroup& g,
                                 const std::vector<int>& angles,
                                 int phase_den) {
  if (static_cast<int>(angles.size()) != g.order() || phase_den <= 0)
    throw std::invalid_argument("character table mismatch");
  std::vector<CMatrix> mats;
  for (int a = 0; a < g.order(); ++a) {
    const double th = 2.0 * std::numbers::pi * angles[a] / phase_den;
    mats.push_back(CMatrix::scalar(1, cplx(std::cos(th), std::sin(th))));
  }
  return UnitaryRep{g, 1, std::move(mats)};
}

UnitaryRep rep_direct_sum(const UnitaryRep& a, const UnitaryRep& b) {
  if (!(a.group == b.group))
    throw std::invalid_argument("direct sum needs a common group");
  std::vector<CMatrix> mats;
  for (int g = 0; g < a.group.order(); ++g)
    mats.push_back(direct_sum(a.mats[g], b.mats[g]));
  return UnitaryRep{a.group, a.dim + b.dim, std::move(mats)};
}

UnitaryRep rep_tensor(const UnitaryRep& a, const UnitaryRep& b) {
  if (!(a.group == b.group))
    throw std::invalid_argument("tensor needs a common group");
  std::vector<CMatrix> mats;
  for (int g = 0; g < a.group.order(); ++g)
    mats.push_back(tensor(a.mats[g], b.mats[g]));
  return UnitaryRep{a.group, a.dim * b.dim, std::move(mats)};
}

UnitaryRep rep_tensor_power(const UnitaryRep& a, int n) {
  if (n < 1) throw std::invalid_argument("tensor power needs n>=1");
  UnitaryRep out = a;
  for (int k = 1; k < n; ++k) out = rep_tensor(out, a);
  return out;
}

UnitaryRep rep_restrict(const UnitaryRep& a, const Subgroup& s) {
  std::vector<CMatrix> mats;
  for (int idx = 0; idx < s.group.order(); ++idx)
    mats.push_back(a.mats[s.embed[idx]]);
  return UnitaryRep{s.group, a.dim, std::move(mats)};
}

UnitaryRep separating_rep(const FiniteGroup& g, const std::vector<int>& e) {
  for (int h : e) {
    if (h < 0 || h >= g.order())
      throw std::invalid_argument("separating_rep element out of range");
    if (h == g.identity())
      throw std::invalid_argument("cannot separate the identity from itself");
  }
  if (e.empty()) return UnitaryRep::trivial(g);
  if (auto gen = g.cyclic_generator()) {
    // Faithful character: powers of the generator pick up a primitive root.
    std::vector<int> angles(g.order());
    int x = g.identity();
    for (int k = 0; k < g.order(); ++k) {
      angles[x] = k;
      x = g.mul(x, *gen);
    }
    return UnitaryRep::character(g, angles, g.order());
  }
  return UnitaryRep::regular(g);
}

Amplified amplify(const UnitaryRep& u, const std::vector<int>& e,
                  double threshold, int max_dim) {
  if (threshold <= 0.0) throw std::invalid_argument("threshold must be positive");
  for (int h : e)
    if (h == u.group.identity())
      throw std::invalid_argument("cannot damp the identity trace");
  const UnitaryRep w = rep_direct_sum(u, UnitaryRep::trivial(u.group));
  double maxt = 0.0;
  for (int h : e) maxt = std::max(maxt, std::abs(w.mats[h].normalized_trace()));
  if (maxt >= 1.0 - 1e-12)
    throw std::invalid_argument("some element acts as the identity; cannot amplify");
  int n = 1;
  double pw = maxt;
  while (pw >= threshold) {
    ++n;
    pw *= maxt;
    if (n > 64) throw SearchLimitError("amplification power exceeds budget");
  }
  double dim = 1.0;
  for (int k = 0; k < n; ++k) {
    dim *= w.dim;
    if (dim > max_dim)
      throw SearchLimitError("amplified dimension exceeds budget");
  }
  Amplified out;
  out.rep = rep_tensor_power(w, n);
  out.power = n;
  out.threshold = threshold;
  out.base_trace = maxt;
  double bound = 0.0;
  for (int h : e)
    bound = std::max(bound, std::abs(out.rep.mats[h].normalized_trace()));
  out.bound = bound;
  return out;
}

AmplifiedChoice separating_amplified(const FiniteGroup& g,
                                     const std::vector<int>& e,
                                     double threshold, int max_dim) {
  const UnitaryRep small = separating_rep(g, e);
  if (e.empty())
    return AmplifiedChoice{
        Amplified{rep_direct_sum(small, UnitaryRep::trivial(g)), 1, 0.0,
                  threshold, 0.0},
        small, "trivial"};
  auto required_power = [&](const UnitaryRep& u) -> std::pair<int, double> {
    const UnitaryRep w = rep_direct_sum(u, UnitaryRep::trivial(u.group));
    double maxt = 0.0;
    for (int h : e) maxt = std::max(maxt, std::abs(w.mats[h].normalized_trace()));
    if (maxt >= 1.0 - 1e-12) return {-1, 0.0};
    int n = 1;
    double pw = maxt;
    while (pw >= threshold && n <= 64) {
      ++n;
      pw *= maxt;
    }
    return {n, std::pow(static_cast<double>(u.dim + 1), n)};
  };
  std::vector<std::pair<UnitaryRep, std::string>> candidates;
  candidates.emplace_back(small, small.dim == 1 ? "character" : "regular");
  if (small.dim != g.order())
    candidates.emplace_back(UnitaryRep::regular(g), "regular");
  int best = -1;
  double best_dim = 0.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    auto [n, fd] = required_power(candidates[i].first);
    if (n < 0 || n > 64 || fd > max_dim) continue;
    if (best < 0 || fd < best_dim) {
      best = static_cast<int>(i);
      best_dim = fd;
    }
  }
  if (best < 0)
    throw SearchLimitError("no separating representation fits the dimension budget");
  return AmplifiedChoice{amplify(candidates[best].first, e, threshold, max_dim),
                         candidates[best].first, candidates[best].second};
}

ZModReduction quotient_search_Z(const std::vector<std::int64_t>& s) {
  if (s.empty()) throw std::invalid_argument("quotient_search_Z needs a nonempty set");
  const auto [lo_it, hi_it] = std::minmax_element(s.begin(), s.end());
  const std::int64_t lo = *lo_it, hi = *hi_it;
  for (std::int64_t m = 1;; ++m) {
    bool injective = true;
    std::vector<bool> seen(static_cast<size_t>(m), false);
    for (std::int64_t x = lo; x <= hi && injective; ++x) {
      std::int64_t r = x % m;
      if (r < 0) r += m;
      if (seen[static_cast<size_t>(r)]) injective = false;
      seen[static_cast<size_t>(r)] = true;
    }
    if (injective) return ZModReduction{m, lo, hi};
  }
}

DynGroup DynGroup::finite(FiniteGroup g) {
  DynGroup d;
  d.finite_ = std::move(g);
  return d;
}

DynGroup DynGroup::integers() { return DynGroup{}; }

const FiniteGroup& DynGroup::group() const {
  if (!finite_) throw std::logic_error("not a finite group");
  return *finite_;
}

DynGroup::Elem DynGroup::mul(Elem a, Elem b) const {
  return is_finite() ? group().mul(static_cast<int>(a), static_cast<int>(b))
                     : a + b;
}

DynGroup::Elem DynGroup::inv(Elem a) const {
  return is_finite() ? group().inv(static_cast<int>(a)) : -a;
}

std::vector<DynGroup::Elem> DynGroup::elements() const {
  if (!is_finite())
    throw std::logic_error("cannot enumerate an infinite group");
  std::vector<Elem> out(group().order());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::vector<DynGroup::Elem> DynGroup::generator_elems() const {
  if (!is_finite()) return {1};
  std::vector<Elem> out;
  for (int g : group().generators()) out.push_back(g);
  if (out.empty()) out.push_back(group().identity());
  return out;
}

}  // namespace rfdlab
