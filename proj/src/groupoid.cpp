#include "rfdlab/groupoid.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace rfdlab {

FiniteGroupoid::FiniteGroupoid(int num_units, std::vector<int> source,
                               std::vector<int> range, std::vector<int> inverse,
                               std::vector<int> unit_arrows,
                               std::vector<int> compose_table)
    : num_units_(num_units),
      num_arrows_(static_cast<int>(source.size())),
      source_(std::move(source)),
      range_(std::move(range)),
      inverse_(std::move(inverse)),
      unit_arrows_(std::move(unit_arrows)),
      compose_table_(std::move(compose_table)) {
  const int na = num_arrows_;
  if (num_units_ <= 0 || na <= 0)
    throw std::invalid_argument("groupoid needs units and arrows");
  if (static_cast<int>(range_.size()) != na ||
      static_cast<int>(inverse_.size()) != na ||
      static_cast<int>(unit_arrows_.size()) != num_units_ ||
      compose_table_.size() != static_cast<size_t>(na) * na)
    throw std::invalid_argument("groupoid table size mismatch");
  auto check_unit = [&](int u) {
    if (u < 0 || u >= num_units_)
      throw std::invalid_argument("unit index out of range");
  };
  auto check_arrow = [&](int a) {
    if (a < 0 || a >= na) throw std::invalid_argument("arrow index out of range");
  };
  for (int a = 0; a < na; ++a) {
    check_unit(source_[a]);
    check_unit(range_[a]);
    check_arrow(inverse_[a]);
  }
  for (int u = 0; u < num_units_; ++u) {
    check_arrow(unit_arrows_[u]);
    const int e = unit_arrows_[u];
    if (source_[e] != u || range_[e] != u)
      throw std::invalid_argument("unit arrow must sit at its unit");
  }
  for (int a = 0; a < na; ++a) {
    const int b = inverse_[a];
    if (inverse_[b] != a || source_[b] != range_[a] || range_[b] != source_[a])
      throw std::invalid_argument("inverse maps are inconsistent");
  }
  for (int f = 0; f < na; ++f)
    for (int s = 0; s < na; ++s) {
      const int c = compose(f, s);
      if (composable(f, s)) {
        if (c < 0 || c >= na)
          throw std::invalid_argument("missing composite for composable pair");
        if (source_[c] != source_[s] || range_[c] != range_[f])
          throw std::invalid_argument("composite endpoints mismatch");
      } else if (c != -1) {
        throw std::invalid_argument("composite defined for non-composable pair");
      }
    }
  for (int a = 0; a < na; ++a) {
    if (compose(unit_arrows_[range_[a]], a) != a ||
        compose(a, unit_arrows_[source_[a]]) != a)
      throw std::invalid_argument("unit arrows must act neutrally");
    if (compose(a, inverse_[a]) != unit_arrows_[range_[a]] ||
        compose(inverse_[a], a) != unit_arrows_[source_[a]])
      throw std::invalid_argument("inverses must compose to units");
  }
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b) {
      if (!composable(a, b)) continue;
      for (int c = 0; c < na; ++c) {
        if (!composable(b, c)) continue;
        if (compose(compose(a, b), c) != compose(a, compose(b, c)))
          throw std::invalid_argument("composition is not associative");
      }
    }
  by_range_.assign(num_units_, {});
  for (int a = 0; a < na; ++a) by_range_[range_[a]].push_back(a);
}

std::vector<int> FiniteGroupoid::hom_set(int src, int rng) const {
  std::vector<int> out;
  for (int a : by_range_[rng])
    if (source_[a] == src) out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> FiniteGroupoid::unit_orbits() const {
  std::vector<bool> seen(num_units_, false);
  std::vector<std::vector<int>> out;
  for (int u = 0; u < num_units_; ++u) {
    if (seen[u]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(u);
    seen[u] = true;
    while (!q.empty()) {
      const int x = q.front();
      q.pop();
      comp.push_back(x);
      for (int a : by_range_[x])
        if (!seen[source_[a]]) {
          seen[source_[a]] = true;
          q.push(source_[a]);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool FiniteGroupoid::operator==(const FiniteGroupoid& o) const {
  return num_units_ == o.num_units_ && source_ == o.source_ &&
         range_ == o.range_ && inverse_ == o.inverse_ &&
         unit_arrows_ == o.unit_arrows_ && compose_table_ == o.compose_table_;
}

GroupoidPtr groupoid_from_action(const GroupAction& action) {
  action.validate();
  const int ng = action.group.order();
  const int nx = action.set_size;
  const int na = ng * nx;
  auto idx = [nx](int g, int x) { return g * nx + x; };
  std::vector<int> src(na), rng(na), inv(na), units(nx);
  for (int g = 0; g < ng; ++g)
    for (int x = 0; x < nx; ++x) {
      src[idx(g, x)] = x;
      rng[idx(g, x)] = action.apply(g, x);
      inv[idx(g, x)] = idx(action.group.inv(g), action.apply(g, x));
    }
  for (int x = 0; x < nx; ++x) units[x] = idx(action.group.identity(), x);
  std::vector<int> comp(static_cast<size_t>(na) * na, -1);
  for (int g = 0; g < ng; ++g)
    for (int x = 0; x < nx; ++x)
      for (int h = 0; h < ng; ++h) {
        // (g, h.x) after (h, x) gives (gh, x).
        const int second = idx(h, x);
        const int first = idx(g, action.apply(h, x));
        comp[static_cast<size_t>(first) * na + second] =
            idx(action.group.mul(g, h), x);
      }
  return std::make_shared<FiniteGroupoid>(nx, std::move(src), std::move(rng),
                                          std::move(inv), std::move(units),
                                          std::move(comp));
}

GroupoidPtr group_bundle(const std::vector<FiniteGroup>& groups) {
  if (groups.empty()) throw std::invalid_argument("bundle needs at least one group");
  const int nx = static_cast<int>(groups.size());
  std::vector<int> offset(nx, 0);
  int na = 0;
  for (int x = 0; x < nx; ++x) {
    offset[x] = na;
    na += groups[x].order();
  }
  std::vector<int> src(na), rng(na), inv(na), units(nx);
  std::vector<int> comp(static_cast<size_t>(na) * na, -1);
  for (int x = 0; x < nx; ++x) {
    const FiniteGroup& g = groups[x];
    for (int a = 0; a < g.order(); ++a) {
      src[offset[x] + a] = x;
      rng[offset[x] + a] = x;
      inv[offset[x] + a] = offset[x] + g.inv(a);
    }
    units[x] = offset[x] + g.identity();
    for (int a = 0; a < g.order(); ++a)
      for (int b = 0; b < g.order(); ++b)
        comp[static_cast<size_t>(offset[x] + a) * na + (offset[x] + b)] =
            offset[x] + g.mul(a, b);
  }
  return std::make_shared<FiniteGroupoid>(nx, std::move(src), std::move(rng),
                                          std::move(inv), std::move(units),
                                          std::move(comp));
}

namespace {

void require_same_gpd(const GroupoidFunction& f, const GroupoidFunction& h) {
  if (f.gpd == h.gpd) return;
  if (f.gpd && h.gpd && *f.gpd == *h.gpd) return;
  throw std::invalid_argument("functions live on different groupoids");
}

}  // namespace

GroupoidFunction GroupoidFunction::zero(GroupoidPtr g) {
  if (!g) throw std::invalid_argument("null groupoid");
  return GroupoidFunction{g, std::vector<cplx>(g->num_arrows(), cplx(0.0))};
}

GroupoidFunction GroupoidFunction::indicator(GroupoidPtr g, int arrow) {
  GroupoidFunction f = zero(std::move(g));
  f.values.at(arrow) = 1.0;
  return f;
}

GroupoidFunction& GroupoidFunction::set(int arrow, cplx v) {
  values.at(arrow) = v;
  return *this;
}

bool GroupoidFunction::is_zero(double tol) const {
  for (const auto& v : values)
    if (std::abs(v) > tol) return false;
  return true;
}

std::vector<int> GroupoidFunction::support(double tol) const {
  std::vector<int> out;
  for (int a = 0; a < static_cast<int>(values.size()); ++a)
    if (std::abs(values[a]) > tol) out.push_back(a);
  return out;
}

GroupoidFunction convolve(const GroupoidFunction& f, const GroupoidFunction& h) {
  require_same_gpd(f, h);
  const FiniteGroupoid& g = *f.gpd;
  GroupoidFunction out = GroupoidFunction::zero(f.gpd);
  for (int a = 0; a < g.num_arrows(); ++a) {
    cplx acc = 0.0;
    for (int k : g.arrows_with_range(g.range(a))) {
      const cplx fv = f.values[k];
      if (fv == cplx(0.0)) continue;
      acc += fv * h.values[g.compose(g.inverse(k), a)];
    }
    out.values[a] = acc;
  }
  return out;
}

GroupoidFunction involution(const GroupoidFunction& f) {
  GroupoidFunction out = GroupoidFunction::zero(f.gpd);
  for (int a = 0; a < f.gpd->num_arrows(); ++a)
    out.values[a] = std::conj(f.values[f.gpd->inverse(a)]);
  return out;
}

std::vector<cplx> conditional_expectation(const GroupoidFunction& f) {
  std::vector<cplx> out(f.gpd->num_units());
  for (int u = 0; u < f.gpd->num_units(); ++u)
    out[u] = f.values[f.gpd->unit_arrow(u)];
  return out;
}

OrbitData orbit_data(const GroupoidPtr& gpd, int unit_in_orbit) {
  if (!gpd) throw std::invalid_argument("null groupoid");
  if (unit_in_orbit < 0 || unit_in_orbit >= gpd->num_units())
    throw std::invalid_argument("unit out of range");
  int base = unit_in_orbit;
  for (const auto& orb : gpd->unit_orbits())
    if (std::find(orb.begin(), orb.end(), unit_in_orbit) != orb.end()) {
      base = orb.front();
      break;
    }
  OrbitData od;
  std::vector<int> connector_of(gpd->num_units(), -1);
  connector_of[base] = gpd->unit_arrow(base);
  od.units.push_back(base);
  od.connectors.push_back(gpd->unit_arrow(base));
  std::queue<int> q;
  q.push(base);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    // Arrows out of u in ascending index order keep the walk deterministic.
    for (int a = 0; a < gpd->num_arrows(); ++a) {
      if (gpd->source(a) != u) continue;
      const int v = gpd->range(a);
      if (connector_of[v] >= 0) continue;
      connector_of[v] = gpd->compose(a, connector_of[u]);
      od.units.push_back(v);
      od.connectors.push_back(connector_of[v]);
      q.push(v);
    }
  }
  // Isotropy at the base point, realized on its arrow set.
  const std::vector<int> iso_arrows = gpd->hom_set(base, base);
  const int n = static_cast<int>(iso_arrows.size());
  std::vector<int> arrow_to_idx(gpd->num_arrows(), -1);
  for (int i = 0; i < n; ++i) arrow_to_idx[iso_arrows[i]] = i;
  std::vector<int> table(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      table[static_cast<size_t>(i) * n + j] =
          arrow_to_idx[gpd->compose(iso_arrows[i], iso_arrows[j])];
  od.iso = IsotropyGroup{FiniteGroup(n, std::move(table)), iso_arrows,
                         std::move(arrow_to_idx)};
  return od;
}

FdRepData fd_rep_data(GroupoidPtr gpd, int base_unit, UnitaryRep rho,
                      std::vector<CMatrix> z) {
  OrbitData od = orbit_data(gpd, base_unit);
  if (z.empty())
    z.assign(od.units.size(), CMatrix::identity(rho.dim));
  return FdRepData{std::move(gpd), std::move(od), std::move(rho), std::move(z)};
}

GroupoidRep::GroupoidRep(FdRepData data) : data_(std::move(data)) {
  const auto& od = data_.orbit;
  if (!data_.gpd) throw std::invalid_argument("null groupoid");
  if (od.units.empty() || od.units.size() != od.connectors.size())
    throw std::invalid_argument("orbit data is inconsistent");
  if (!(data_.rho.group == od.iso.group))
    throw std::invalid_argument("rho must represent the orbit isotropy group");
  const int d = data_.rho.dim;
  if (d <= 128) {
    data_.rho.validate(1e-7);
  } else {
    // Full multiplicativity is cubic in d; amplified reps arrive validated
    // by construction, so only unitarity is rechecked here.
    for (const auto& m : data_.rho.mats)
      if (!m.is_unitary(1e-7))
        throw std::invalid_argument("rho entries must be unitary");
  }
  if (data_.z.size() != od.units.size())
    throw std::invalid_argument("need one twisting unitary per orbit unit");
  z_id_.clear();
  for (const auto& zi : data_.z) {
    if (zi.rows() != d || zi.cols() != d || !zi.is_unitary(1e-7))
      throw std::invalid_argument("twisting entries must be unitaries of rho's size");
    z_id_.push_back((zi - CMatrix::identity(d)).max_abs() == 0.0);
  }
  if (!data_.z[0].approx_equal(CMatrix::identity(d), 1e-10))
    throw std::invalid_argument("base twisting unitary must be the identity");
  for (size_t i = 0; i < od.units.size(); ++i) {
    const int c = od.connectors[i];
    if (data_.gpd->source(c) != od.units[0] || data_.gpd->range(c) != od.units[i])
      throw std::invalid_argument("connector endpoints mismatch");
  }
  unit_pos_.assign(data_.gpd->num_units(), -1);
  for (size_t i = 0; i < od.units.size(); ++i)
    unit_pos_[od.units[i]] = static_cast<int>(i);
  dim_ = static_cast<int>(od.units.size()) * d;
}

CMatrix GroupoidRep::eval(const GroupoidFunction& f) const {
  if (!(f.gpd == data_.gpd) && !(*f.gpd == *data_.gpd))
    throw std::invalid_argument("function lives on a different groupoid");
  const FiniteGroupoid& g = *data_.gpd;
  const int d = data_.rho.dim;
  CMatrix out(dim_, dim_);
  for (int a = 0; a < g.num_arrows(); ++a) {
    const cplx fv = f.values[a];
    if (fv == cplx(0.0)) continue;
    const int i = unit_pos_[g.range(a)];
    const int j = unit_pos_[g.source(a)];
    if (i < 0 || j < 0) continue;
    // conn_i^{-1} a conn_j is an isotropy arrow at the base.
    const int mid = g.compose(g.inverse(data_.orbit.connectors[i]), a);
    const int iso_arrow = g.compose(mid, data_.orbit.connectors[j]);
    const int k = data_.orbit.iso.arrow_to_idx[iso_arrow];
    CMatrix blk = data_.rho.mats[k];
    if (!z_id_[i]) blk = data_.z[i] * blk;
    if (!z_id_[j]) blk = blk * data_.z[j].adjoint();
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        out.at(i * d + r, j * d + c) += fv * blk.at(r, c);
  }
  return out;
}

CMatrix GroupoidRep::arrow_matrix(int arrow) const {
  return eval(GroupoidFunction::indicator(data_.gpd, arrow));
}

CMatrix ArrowRep::eval(const GroupoidFunction& f) const {
  CMatrix out(dim, dim);
  for (int a = 0; a < gpd->num_arrows(); ++a)
    if (f.values[a] != cplx(0.0)) out += mats[a] * f.values[a];
  return out;
}

ArrowRep materialize(const GroupoidRep& rep) {
  ArrowRep out{rep.data().gpd, rep.dim(), {}};
  for (int a = 0; a < out.gpd->num_arrows(); ++a)
    out.mats.push_back(rep.arrow_matrix(a));
  return out;
}

VerifyReport verify_rep(const ArrowRep& rep, int samples, Rng& rng) {
  const FiniteGroupoid& g = *rep.gpd;
  if (static_cast<int>(rep.mats.size()) != g.num_arrows())
    throw std::invalid_argument("need one matrix per arrow");
  VerifyReport rpt;
  const CMatrix zero(rep.dim, rep.dim);
  for (int a = 0; a < g.num_arrows(); ++a)
    for (int b = 0; b < g.num_arrows(); ++b) {
      const CMatrix prod = rep.mats[a] * rep.mats[b];
      const CMatrix& expect = g.composable(a, b) ? rep.mats[g.compose(a, b)] : zero;
      rpt.indicator_mult =
          std::max(rpt.indicator_mult, (prod - expect).max_abs());
    }
  for (int a = 0; a < g.num_arrows(); ++a)
    rpt.indicator_star = std::max(
        rpt.indicator_star,
        (rep.mats[a].adjoint() - rep.mats[g.inverse(a)]).max_abs());
  CMatrix unit_sum(rep.dim, rep.dim);
  for (int u = 0; u < g.num_units(); ++u) unit_sum += rep.mats[g.unit_arrow(u)];
  rpt.unital = (unit_sum - CMatrix::identity(rep.dim)).max_abs();
  for (int s = 0; s < samples; ++s) {
    GroupoidFunction f = GroupoidFunction::zero(rep.gpd);
    GroupoidFunction h = GroupoidFunction::zero(rep.gpd);
    for (auto& v : f.values) v = random_cplx(rng);
    for (auto& v : h.values) v = random_cplx(rng);
    const CMatrix pf = rep.eval(f), ph = rep.eval(h);
    rpt.sampled_mult = std::max(
        rpt.sampled_mult, (rep.eval(convolve(f, h)) - pf * ph).max_abs());
    rpt.sampled_star = std::max(
        rpt.sampled_star, (rep.eval(involution(f)) - pf.adjoint()).max_abs());
  }
  rpt.max_violation =
      std::max({rpt.indicator_mult, rpt.indicator_star, rpt.unital,
                rpt.sampled_mult, rpt.sampled_star});
  return rpt;
}

FdRepData analyze_irreducible(const ArrowRep& rep, double tol) {
  const FiniteGroupoid& g = *rep.gpd;
  Rng rng(12345);
  const VerifyReport rpt = verify_rep(rep, 3, rng);
  if (!rpt.ok(tol))
    throw std::invalid_argument("input fails the representation axioms");
  if (commutant_dimension(rep.mats) != 1)
    throw std::invalid_argument("representation is reducible");
  // Supporting units carry nonzero unit projections.
  std::vector<int> support_units;
  for (int u = 0; u < g.num_units(); ++u)
    if (rep.mats[g.unit_arrow(u)].max_abs() > tol) support_units.push_back(u);
  if (support_units.empty())
    throw std::invalid_argument("no supporting units");
  OrbitData od = orbit_data(rep.gpd, support_units.front());
  {
    std::vector<int> sorted = od.units;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != support_units)
      throw std::invalid_argument("support is not a single orbit");
  }
  const CMatrix& p1 = rep.mats[g.unit_arrow(od.units[0])];
  const int d = static_cast<int>(std::lround(p1.trace().real()));
  if (d <= 0 || od.units.size() * d != static_cast<size_t>(rep.dim))
    throw std::invalid_argument("unit projections have inconsistent ranks");
  // Orthonormal columns spanning the base block: top eigenvectors of p1.
  auto [evals, vecs] = p1.hermitian_eigensystem();
  CMatrix q1(rep.dim, d);
  for (int j = 0; j < d; ++j) {
    const int col = rep.dim - d + j;  // eigenvalues ascend; the ones are last
    if (std::abs(evals[col] - 1.0) > 1e-6)
      throw std::invalid_argument("unit projection is not a projection");
    for (int i = 0; i < rep.dim; ++i) q1.at(i, j) = vecs.at(i, col);
  }
  std::vector<CMatrix> rho_mats;
  for (int arrow : od.iso.arrows)
    rho_mats.push_back(q1.adjoint() * rep.mats[arrow] * q1);
  UnitaryRep rho{od.iso.group, d, std::move(rho_mats)};
  rho.validate(1e-6);
  // Using the connector images of the base block as bases for the other
  // blocks makes every twisting unitary the identity.
  std::vector<CMatrix> z(od.units.size(), CMatrix::identity(d));
  return FdRepData{rep.gpd, std::move(od), std::move(rho), std::move(z)};
}

TraceApproxResult trace_approx(const GroupoidFunction& f, int base_unit,
                               double epsilon, int max_dim) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  const GroupoidPtr gpd = f.gpd;
  const FiniteGroupoid& g = *gpd;
  OrbitData od = orbit_data(gpd, base_unit);
  // Damped set: non-identity isotropy elements whose conjugates meet supp f.
  std::vector<int> damped;
  double big_m = 0.0;
  const int iso_id = od.iso.group.identity();
  for (int k = 0; k < od.iso.group.order(); ++k) {
    if (k == iso_id) continue;
    bool hit = false;
    double local = 0.0;
    for (size_t i = 0; i < od.units.size(); ++i) {
      const int conn = od.connectors[i];
      const int conj_arrow =
          g.compose(g.compose(conn, od.iso.arrows[k]), g.inverse(conn));
      const double mag = std::abs(f.values[conj_arrow]);
      if (mag > 0.0) hit = true;
      local = std::max(local, mag);
    }
    if (hit) {
      damped.push_back(k);
      big_m = std::max(big_m, local);
    }
  }
  TraceApproxResult res{GroupoidRep(fd_rep_data(gpd, base_unit,
                                                UnitaryRep::trivial(od.iso.group)))};
  res.epsilon = epsilon;
  res.damped = damped;
  res.big_m = big_m;
  if (!damped.empty()) {
    res.threshold = epsilon / (static_cast<double>(damped.size()) * big_m);
    const AmplifiedChoice choice =
        separating_amplified(od.iso.group, damped, res.threshold, max_dim);
    res.base_kind = choice.base_kind;
    res.amplify_power = choice.amplified.power;
    res.amplify_bound = choice.amplified.bound;
    res.certified_bound =
        static_cast<double>(damped.size()) * big_m * choice.amplified.bound;
    res.rep = GroupoidRep(fd_rep_data(gpd, base_unit, choice.amplified.rep));
  } else {
    res.base_kind = "trivial";
    res.amplify_power = 1;
  }
  const std::vector<cplx> phi = conditional_expectation(f);
  cplx avg = 0.0;
  for (int u : od.units) avg += phi[u];
  avg /= static_cast<double>(od.units.size());
  res.phi_average = avg;
  res.trace_value = res.rep.eval(f).normalized_trace();
  res.achieved = std::abs(res.phi_average - res.trace_value);
  if (res.certified_bound >= epsilon)
    throw std::logic_error("certified bound fails the target");
  if (res.achieved >= epsilon)
    throw std::logic_error("measured trace misses the certified bound");
  return res;
}

RfdCertificateData certify_rfd(const GroupoidFunction& f, int max_dim,
                               double epsilon_override) {
  if (!f.gpd) throw std::invalid_argument("null groupoid");
  if (f.is_zero()) throw std::invalid_argument("cannot separate zero");
  {
    const GroupoidFunction star = involution(f);
    for (int a = 0; a < f.gpd->num_arrows(); ++a)
      if (std::abs(star.values[a] - f.values[a]) > 1e-8)
        throw std::invalid_argument("certify_rfd needs a hermitian function");
  }
  const std::vector<cplx> phi = conditional_expectation(f);
  double best_c = 0.0;
  int best_unit = -1;
  std::vector<int> best_orbit;
  for (const auto& orb : f.gpd->unit_orbits()) {
    double c = 0.0;
    for (int u : orb) c += phi[u].real();
    c /= static_cast<double>(orb.size());
    if (c > best_c) {
      best_c = c;
      best_unit = orb.front();
      best_orbit = orb;
    }
  }
  if (best_unit < 0 || best_c <= 1e-12)
    throw std::invalid_argument(
        "conditional expectation has no positive orbit average");
  double eps = best_c / 4.0;
  if (epsilon_override > 0.0) eps = std::min(eps, epsilon_override);
  RfdCertificateData out{best_orbit, best_c, eps,
                         trace_approx(f, best_unit, eps, max_dim)};
  if (out.approx.trace_value.real() <= best_c / 2.0)
    throw std::logic_error("certified trace fell below half the orbit average");
  return out;
}

}  // namespace rfdlab
