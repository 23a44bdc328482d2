#include "rfdlab/driver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace rfdlab {
namespace {

double effective_tol(const DriverOptions& opt, const InstanceSpec& spec) {
  if (opt.tolerance) return *opt.tolerance;
  if (spec.params.tolerance) return *spec.params.tolerance;
  return kDefaultTol;
}

double effective_eps(const DriverOptions& opt, const InstanceSpec& spec) {
  if (opt.epsilon) return *opt.epsilon;
  if (spec.params.epsilon) return *spec.params.epsilon;
  return 0.0;
}

Json cplx_json(cplx v) { return Json::array({v.real(), v.imag()}); }

Json int_vec_json(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x);
  return out;
}

std::int64_t echo_int(const Json& j, const char* what) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ParseError(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

cplx echo_cplx(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

/// Shared base of every certificate: the instance commitment and tolerance.
SeparationCertificate cert_base(const InstanceSpec& spec, double tol) {
  SeparationCertificate c;
  c.instance_kind = kind_name(spec.kind);
  c.instance = instance_json(spec);
  c.digest = instance_digest(spec);
  c.tolerance = std::min(tol, kMaxCertTol);
  c.quantities = Json::object();
  c.witness = Json::object();
  c.element = Json::object();
  return c;
}

Json approx_quantities_json(double lower, double epsilon, double threshold,
                            int power, double amplify_bound,
                            double certified_bound, cplx phi, cplx trace,
                            double achieved, double witness_norm) {
  Json q;
  q["lower"] = lower;
  q["epsilon"] = epsilon;
  q["threshold"] = threshold;
  q["power"] = power;
  q["amplify_bound"] = amplify_bound;
  q["certified_bound"] = certified_bound;
  q["phi"] = cplx_json(phi);
  q["trace"] = cplx_json(trace);
  q["achieved"] = achieved;
  q["witness_norm"] = witness_norm;
  return q;
}

Json automorphism_to_json(const AlgAutomorphism& a) {
  Json out;
  out["sigma"] = int_vec_json(a.sigma);
  Json us = Json::array();
  for (const auto& u : a.u) us.push_back(matrix_json(u));
  out["unitaries"] = us;
  return out;
}

Json model_json(const GAlgebraPtr& sys) {
  Json m;
  m["blocks"] = int_vec_json(sys->alg().block_dims);
  if (sys->grp().is_finite()) {
    Json as = Json::array();
    for (GElem g : sys->grp().elements())
      as.push_back(automorphism_to_json(sys->alpha(g)));
    m["automorphisms"] = as;
  } else {
    m["generator"] = automorphism_to_json(sys->alpha(1));
  }
  return m;
}

Json coeffs_json(const CrossedElement& b) {
  Json out = Json::array();
  for (const auto& [g, a] : b.terms) {
    Json t;
    t["g"] = g;
    Json bs = Json::array();
    for (const auto& m : a.blocks) bs.push_back(matrix_json(m));
    t["blocks"] = bs;
    out.push_back(t);
  }
  return out;
}

SeparationCertificate make_induced_cert(const InstanceSpec& spec,
                                        Json element_echo, bool with_model,
                                        const GAlgebraPtr& sys,
                                        const CrossedElement& b,
                                        const CrossedCertificateData& cd,
                                        double tol) {
  SeparationCertificate c = cert_base(spec, tol);
  c.construction = with_model ? "semidirect-induced" : "crossed-induced";
  c.element = std::move(element_echo);
  c.finite_image = cd.finite_image;
  c.image_order = cd.image_order;
  const InducedRep& rep = cd.approx.rep;
  c.quantities = approx_quantities_json(
      cd.lower, cd.epsilon, cd.approx.threshold, cd.approx.amplify_power,
      cd.approx.amplify_bound, cd.approx.certified_bound, cd.approx.phi_trace,
      cd.approx.trace_value, cd.approx.achieved, cd.witness_norm);

  Json w;
  w["block"] = cd.block;
  w["orbit_blocks"] = int_vec_json(rep.orbit().blocks);
  w["base_kind"] = cd.approx.base_kind;
  w["udim"] = rep.u_dim();
  w["dim"] = rep.dim();
  if (with_model) w["model"] = model_json(sys);
  w["coeffs"] = coeffs_json(b);
  const FdAlgebra& alg = sys->alg();
  if (sys->grp().is_finite()) {
    Json ls = Json::array();
    for (GElem g : sys->grp().elements()) {
      Json e;
      e["g"] = g;
      e["mat"] = matrix_json(rep.l_of(g));
      ls.push_back(e);
    }
    w["l"] = ls;
  } else {
    w["l_generator"] = matrix_json(rep.l_of(1));
  }
  Json pis = Json::array();
  for (int k = 0; k < alg.num_blocks(); ++k)
    for (int r = 0; r < alg.block_dims[k]; ++r)
      for (int col = 0; col < alg.block_dims[k]; ++col)
        pis.push_back(matrix_json(rep.pi(AlgElement::unit(alg, k, r, col))));
  w["pi"] = pis;
  w["value"] = matrix_json(rep.eval(b));
  c.witness = std::move(w);
  return c;
}

SeparationCertificate separate_crossed(const InstanceSpec& spec,
                                       const GAlgebraPtr& sys,
                                       const CrossedElement& b, double tol,
                                       double eps, int max_dim) {
  const CrossedCertificateData cd = certify_separation(b, max_dim, eps);
  Json echo;
  echo["terms"] = coeffs_json(b);
  return make_induced_cert(spec, std::move(echo), false, sys, b, cd, tol);
}

SeparationCertificate separate_model_element(const InstanceSpec& spec,
                                             const GroupAlgebraModel& model,
                                             int h, GElem g, Json echo,
                                             double tol, double eps,
                                             int max_dim) {
  const GAlgebraPtr sys = model.sys;
  const bool id_g = g == sys->grp().id();
  const FiniteGroup& base = model.irreps.front().group;
  if (h == base.identity() && id_g)
    throw std::invalid_argument("cannot separate the identity");
  CrossedElement b = CrossedElement::zero(sys);
  b.add_term(g, model.image(h));
  b.add_term(sys->grp().id(),
             AlgElement::identity(sys->alg()) * cplx(-1.0, 0.0));
  const CrossedCertificateData cd = certify_separation(b, max_dim, eps);
  return make_induced_cert(spec, std::move(echo), true, sys, b, cd, tol);
}

Json semidirect_echo(int h, GElem g) {
  Json e;
  e["h"] = h;
  e["g"] = g;
  return e;
}

Json wreath_echo(const std::map<GElem, int>& entries, GElem g) {
  Json cfg = Json::array();
  for (const auto& [pos, val] : entries) {
    Json e;
    e["pos"] = pos;
    e["val"] = val;
    cfg.push_back(e);
  }
  Json e;
  e["config"] = cfg;
  e["g"] = g;
  return e;
}

SeparationCertificate separate_groupoid(const InstanceSpec& spec,
                                        const GroupoidPtr& gpd,
                                        const GroupoidFunction& f, double tol,
                                        double eps, int max_dim) {
  const GroupoidFunction x = convolve(involution(f), f);
  const RfdCertificateData rd = certify_rfd(x, max_dim, eps);
  SeparationCertificate c = cert_base(spec, tol);
  c.construction = "groupoid-trace-amplification";
  Json arrows = Json::array();
  Json values = Json::array();
  for (int a : f.support()) {
    arrows.push_back(a);
    values.push_back(cplx_json(f.values[a]));
  }
  c.element["arrows"] = arrows;
  c.element["values"] = values;
  c.quantities = approx_quantities_json(
      rd.lower, rd.epsilon, rd.approx.threshold, rd.approx.amplify_power,
      rd.approx.amplify_bound, rd.approx.certified_bound, rd.approx.phi_average,
      rd.approx.trace_value, rd.approx.achieved,
      rd.approx.rep.eval(f).operator_norm());
  const ArrowRep mats = materialize(rd.approx.rep);
  Json w;
  w["orbit_units"] = int_vec_json(rd.orbit_units);
  w["dim"] = mats.dim;
  Json ms = Json::array();
  for (const auto& m : mats.mats) ms.push_back(matrix_json(m));
  w["mats"] = ms;
  c.witness = std::move(w);
  return c;
}

SeparationCertificate separate_wreath_char(const InstanceSpec& spec,
                                           const WreathElement& x, double tol) {
  const WreathSeparation ws = wreath_separate(x);
  SeparationCertificate c = cert_base(spec, tol);
  c.construction = "wreath-character";
  c.element = wreath_echo(x.entries, x.g.id());
  c.finite_image = true;
  c.image_order = ws.modulus;
  Json w;
  w["modulus"] = ws.modulus;
  w["orbit_size"] = ws.orbit_size;
  w["position"] = ws.position;
  w["value"] = cplx_json(ws.value);
  Json rows = Json::array();
  for (const auto& row : ws.rep.table()) {
    Json r = Json::array();
    for (cplx v : row) r.push_back(cplx_json(v));
    rows.push_back(r);
  }
  w["char_rows"] = rows;
  c.witness = std::move(w);
  return c;
}

SeparationCertificate separate_zp(const InstanceSpec& spec, double tol) {
  const auto& p = std::get<ZpInstance>(spec.payload);
  const ZpWitness w = rf_witness_zp(p.build());
  SeparationCertificate c = cert_base(spec, tol);
  c.construction = "zp-residue";
  c.element["num"] = p.num;
  c.element["powm"] = p.powm;
  c.finite_image = true;
  c.image_order = w.q.convert_to<std::int64_t>();
  c.witness["q"] = w.q.convert_to<std::int64_t>();
  c.witness["residue"] = w.residue.convert_to<std::int64_t>();
  return c;
}

SeparationCertificate separate_slnp(const InstanceSpec& spec, double tol) {
  const auto& p = std::get<SlnpInstance>(spec.payload);
  const SlWitness w = sl_reduction_witness(p.build());
  SeparationCertificate c = cert_base(spec, tol);
  c.construction = "slnp-residue";
  Json entries = Json::array();
  for (const auto& e : p.entries) {
    Json entry;
    entry["num"] = e.num;
    entry["powm"] = e.powm;
    entries.push_back(entry);
  }
  c.element["entries"] = entries;
  const std::int64_t q = w.q.convert_to<std::int64_t>();
  c.finite_image = true;
  // Order of SL_n over the q-element field, left at zero if it overflows.
  long double est = 1.0L;
  for (int k = 2; k <= p.n; ++k)
    est *= static_cast<long double>(std::pow(static_cast<double>(q), k) - 1.0);
  for (int k = 1; k < p.n; ++k)
    est *= static_cast<long double>(std::pow(static_cast<double>(q), k));
  if (est < 9e18L) {
    std::int64_t order = 1;
    for (int k = 2; k <= p.n; ++k) {
      std::int64_t qk = 1;
      for (int i = 0; i < k; ++i) qk *= q;
      order *= qk - 1;
    }
    for (int k = 1; k < p.n; ++k)
      for (int i = 0; i < k; ++i) order *= q;
    c.image_order = order;
  }
  c.witness["q"] = q;
  Json image = Json::array();
  for (const auto& row : w.image)
    for (const auto& v : row) image.push_back(v.convert_to<std::int64_t>());
  c.witness["image"] = image;
  return c;
}

SeparationCertificate separate_shift(const InstanceSpec& spec, double tol) {
  const auto& p = std::get<ShiftInstance>(spec.payload);
  std::map<std::int64_t, int> pattern;
  for (size_t i = 0; i < p.pattern.size(); ++i)
    pattern[static_cast<std::int64_t>(i)] = p.pattern[i];
  const PeriodicConfig cfg = shift_periodic_point(p.alphabet, pattern);
  SeparationCertificate c = cert_base(spec, tol);
  c.construction = "shift-periodic";
  c.element["pattern"] = int_vec_json(p.pattern);
  c.finite_image = true;
  c.image_order = cfg.period();
  c.witness["base"] = cfg.base;
  c.witness["period"] = cfg.period();
  c.witness["word"] = int_vec_json(cfg.word);
  return c;
}

struct SelectorError : ParseError {
  using ParseError::ParseError;
};

std::pair<int, GElem> parse_pair_selector(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw SelectorError("element selector must be \"h,g\" or \"all\"");
  try {
    return {std::stoi(s.substr(0, comma)), std::stoll(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw SelectorError("cannot parse element selector \"" + s + "\"");
  }
}

/// "k", "-k" or "k/p^m" with the denominator an exact power of p.
std::pair<std::int64_t, int> parse_zp_selector(const std::string& s, int p) {
  try {
    const auto slash = s.find('/');
    const std::int64_t num =
        std::stoll(slash == std::string::npos ? s : s.substr(0, slash));
    int powm = 0;
    if (slash != std::string::npos) {
      std::int64_t den = std::stoll(s.substr(slash + 1));
      if (den <= 0) throw SelectorError("denominator must be positive");
      while (den % p == 0) {
        den /= p;
        ++powm;
      }
      if (den != 1)
        throw SelectorError("denominator must be a power of " + std::to_string(p));
    }
    return {num, powm};
  } catch (const SelectorError&) {
    throw;
  } catch (const std::exception&) {
    throw SelectorError("cannot parse element selector \"" + s + "\"");
  }
}

using CertTask = std::function<SeparationCertificate()>;

std::vector<SeparationCertificate> run_tasks(const std::vector<CertTask>& tasks,
                                             bool parallel) {
  std::vector<SeparationCertificate> out;
  out.reserve(tasks.size());
  if (parallel && tasks.size() > 1) {
    std::vector<std::future<SeparationCertificate>> futs;
    futs.reserve(tasks.size());
    for (const auto& t : tasks)
      futs.push_back(std::async(std::launch::async, t));
    for (auto& f : futs) out.push_back(f.get());
  } else {
    for (const auto& t : tasks) out.push_back(t());
  }
  return out;
}

std::string summary_line(const SeparationCertificate& c) {
  std::ostringstream os;
  os << c.construction;
  if (c.construction == "zp-residue") {
    os << ": q=" << c.witness["q"].get<std::int64_t>()
       << " residue=" << c.witness["residue"].get<std::int64_t>();
  } else if (c.construction == "slnp-residue") {
    os << ": q=" << c.witness["q"].get<std::int64_t>();
  } else if (c.construction == "shift-periodic") {
    os << ": period=" << c.witness["period"].get<std::int64_t>();
  } else if (c.construction == "wreath-character") {
    os << ": modulus=" << c.witness["modulus"].get<std::int64_t>()
       << " orbit=" << c.witness["orbit_size"].get<std::int64_t>();
  } else {
    os << ": dim=" << c.witness["dim"].get<std::int64_t>()
       << " lower=" << c.quantities["lower"].get<double>()
       << " trace=" << c.quantities["trace"][0].get<double>();
  }
  if (c.finite_image) os << " image_order=" << c.image_order;
  return os.str();
}

}  // namespace

VerifyOutcome run_verify(const InstanceSpec& spec, const DriverOptions& opt) {
  VerifyOutcome out;
  const double tol = effective_tol(opt, spec);
  try {
    if (spec.kind != InstanceKind::groupoid)
      throw ParseError("verify needs a groupoid instance with a representation");
    const auto& p = std::get<GroupoidInstance>(spec.payload);
    if (!p.has_rep)
      throw ParseError("verify needs a representation payload");
    const GroupoidPtr gpd = p.groupoid.build();
    const ArrowRep rep = p.build_rep(gpd);
    Rng rng(spec.params.seed.value_or(2024));
    const VerifyReport report = verify_rep(rep, 16, rng);
    out.max_violation = report.max_violation;
    out.report["ok"] = report.ok(tol);
    out.report["max_violation"] = report.max_violation;
    out.report["indicator_mult"] = report.indicator_mult;
    out.report["indicator_star"] = report.indicator_star;
    out.report["unital"] = report.unital;
    out.report["sampled_mult"] = report.sampled_mult;
    out.report["sampled_star"] = report.sampled_star;
    out.report["tolerance"] = tol;
    if (report.ok(tol)) {
      out.exit = kExitOk;
      std::ostringstream os;
      os << "axiom suite passed; max violation " << report.max_violation;
      out.message = os.str();
    } else {
      out.exit = kExitFailure;
      std::ostringstream os;
      os << "axiom violation " << report.max_violation << " exceeds tolerance "
         << tol;
      out.message = os.str();
    }
  } catch (const ParseError& e) {
    out.exit = kExitBadInput;
    out.message = e.what();
  } catch (const std::exception& e) {
    out.exit = kExitFailure;
    out.message = e.what();
  }
  return out;
}

SeparateOutcome run_separate(const InstanceSpec& spec,
                             const DriverOptions& opt) {
  SeparateOutcome out;
  const double tol = effective_tol(opt, spec);
  const double eps = effective_eps(opt, spec);
  const std::string& sel = opt.element_selector;
  try {
    std::vector<CertTask> tasks;
    switch (spec.kind) {
      case InstanceKind::groupoid: {
        const auto& p = std::get<GroupoidInstance>(spec.payload);
        const GroupoidPtr gpd = p.groupoid.build();
        GroupoidFunction f = GroupoidFunction::zero(gpd);
        if (sel.rfind("arrow:", 0) == 0) {
          const int a = std::stoi(sel.substr(6));
          if (a < 0 || a >= gpd->num_arrows())
            throw ParseError("selector arrow out of range");
          f.set(a, 1.0);
        } else if (sel.empty()) {
          f = p.build_element(gpd);
        } else {
          throw ParseError("groupoid selectors are \"arrow:N\"");
        }
        tasks.push_back([=, &spec] {
          return separate_groupoid(spec, gpd, f, tol, eps, opt.max_dim);
        });
        break;
      }
      case InstanceKind::crossed: {
        if (!sel.empty())
          throw ParseError("crossed elements are matrix-valued; "
                           "embed them in the instance");
        const auto& p = std::get<CrossedInstance>(spec.payload);
        const GAlgebraPtr sys = p.build_system();
        const CrossedElement b = p.build_element(sys);
        tasks.push_back([=, &spec] {
          return separate_crossed(spec, sys, b, tol, eps, opt.max_dim);
        });
        break;
      }
      case InstanceKind::semidirect: {
        const auto& p = std::get<SemidirectInstance>(spec.payload);
        const SemidirectSystem sys = p.build();
        const GroupAlgebraModel model = group_algebra_model(sys);
        auto task = [=, &spec](int h, GElem g) -> CertTask {
          return [=, &spec] {
            return separate_model_element(spec, model, h, g,
                                          semidirect_echo(h, g), tol, eps,
                                          opt.max_dim);
          };
        };
        if (sel == "all") {
          if (!sys.g.is_finite())
            throw ParseError("\"all\" needs a finite acting group");
          for (int h = 0; h < sys.h.order(); ++h)
            for (GElem g = 0; g < sys.g.group().order(); ++g)
              if (h != sys.h.identity() || g != sys.g.group().identity())
                tasks.push_back(task(h, g));
        } else if (!sel.empty()) {
          const auto [h, g] = parse_pair_selector(sel);
          if (h < 0 || h >= sys.h.order()) throw ParseError("selector h out of range");
          if (sys.g.is_finite() && (g < 0 || g >= sys.g.group().order()))
            throw ParseError("selector g out of range");
          tasks.push_back(task(h, g));
        } else {
          if (!p.has_element) throw ParseError("instance has no element");
          tasks.push_back(task(p.elem_h, p.elem_g));
        }
        break;
      }
      case InstanceKind::wreath: {
        const auto& p = std::get<WreathInstance>(spec.payload);
        const FiniteGroup h = p.base.build();
        const DynGroup g = p.acting.build_dyn();
        if (g.is_finite()) {
          const SemidirectSystem sys = wreath_semidirect_system(h, g.group());
          const GroupAlgebraModel model = group_algebra_model(sys);
          const int n = g.group().order();
          auto task = [=, &spec](const std::vector<int>& digits,
                                 GElem gg) -> CertTask {
            std::map<GElem, int> entries;
            for (int i = 0; i < n; ++i)
              if (digits[i] != h.identity()) entries[i] = digits[i];
            const int hidx = static_cast<int>(power_index(digits, h.order()));
            return [=, &spec] {
              return separate_model_element(spec, model, hidx, gg,
                                            wreath_echo(entries, gg), tol, eps,
                                            opt.max_dim);
            };
          };
          if (sel == "all") {
            const std::int64_t total = sys.h.order();
            for (std::int64_t hh = 0; hh < total; ++hh)
              for (GElem gg = 0; gg < n; ++gg) {
                if (hh == sys.h.identity() && gg == g.group().identity())
                  continue;
                tasks.push_back(task(power_digits(hh, h.order(), n), gg));
              }
          } else if (!sel.empty()) {
            throw ParseError("wreath selectors are \"all\" or the embedded element");
          } else {
            if (!p.has_element) throw ParseError("instance has no element");
            std::vector<int> digits(n, h.identity());
            for (const auto& e : p.config) digits[e.pos] = e.val;
            tasks.push_back(task(digits, p.elem_g));
          }
        } else {
          if (!sel.empty())
            throw ParseError("integer-acting wreath instances use the embedded element");
          if (!p.has_element) throw ParseError("instance has no element");
          if (p.elem_g != 0)
            throw std::invalid_argument(
                "a nonzero acting coordinate is separated through the acting "
                "group; only base-coordinate elements are in scope");
          std::map<GElem, int> entries;
          for (const auto& e : p.config) entries[e.pos] = e.val;
          const WreathElement x(h, g, entries);
          tasks.push_back([=, &spec] { return separate_wreath_char(spec, x, tol); });
        }
        break;
      }
      case InstanceKind::zp: {
        InstanceSpec working = spec;
        if (!sel.empty()) {
          auto& zp = std::get<ZpInstance>(working.payload);
          const auto [num, powm] = parse_zp_selector(sel, zp.p);
          zp.num = num;
          zp.powm = powm;
          working = parse_instance(canonical_dump(instance_json(working)));
        }
        tasks.push_back([=] { return separate_zp(working, tol); });
        break;
      }
      case InstanceKind::slnp: {
        if (!sel.empty()) throw ParseError("slnp instances embed their element");
        tasks.push_back([=, &spec] { return separate_slnp(spec, tol); });
        break;
      }
      case InstanceKind::shift: {
        if (!sel.empty()) throw ParseError("shift instances embed their pattern");
        tasks.push_back([=, &spec] { return separate_shift(spec, tol); });
        break;
      }
    }
    out.certificates = run_tasks(tasks, opt.parallel);
  } catch (const SearchLimitError& e) {
    out.exit = kExitExhausted;
    out.message = e.what();
    return out;
  } catch (const ParseError& e) {
    out.exit = kExitBadInput;
    out.message = e.what();
    return out;
  } catch (const std::exception& e) {
    out.exit = kExitFailure;
    out.message = e.what();
    return out;
  }
  Json summaries = Json::array();
  std::ostringstream os;
  for (const auto& c : out.certificates) {
    Json s;
    s["digest"] = c.digest;
    s["construction"] = c.construction;
    s["element"] = c.element;
    s["finite_image"] = c.finite_image;
    s["image_order"] = c.image_order;
    summaries.push_back(s);
    os << summary_line(c) << "\n";
  }
  out.report["count"] = out.certificates.size();
  out.report["certificates"] = summaries;
  out.message = os.str();
  return out;
}

namespace {

bool json_close(const Json& a, const Json& b, double tol, std::string& where) {
  if (a.is_number() && b.is_number()) {
    if (std::abs(a.get<double>() - b.get<double>()) <= tol) return true;
    where += " (numeric drift)";
    return false;
  }
  if (a.type() != b.type()) {
    where += " (type mismatch)";
    return false;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) {
      where += " (key count)";
      return false;
    }
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) {
        where += "." + it.key() + " (missing)";
        return false;
      }
      std::string sub = where + "." + it.key();
      if (!json_close(it.value(), b[it.key()], tol, sub)) {
        where = sub;
        return false;
      }
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      where += " (length)";
      return false;
    }
    for (size_t i = 0; i < a.size(); ++i) {
      std::string sub = where + "[" + std::to_string(i) + "]";
      if (!json_close(a[i], b[i], tol, sub)) {
        where = sub;
        return false;
      }
    }
    return true;
  }
  if (a == b) return true;
  where += " (value mismatch)";
  return false;
}

/// Re-runs the separation recorded in the certificate from its embedded
/// instance, using the same epsilon target.
SeparationCertificate replay_certificate(const SeparationCertificate& c,
                                         const DriverOptions& opt) {
  const InstanceSpec spec = parse_instance(canonical_dump(c.instance));
  const double tol = c.tolerance;
  double eps = 0.0;
  if (c.quantities.contains("epsilon"))
    eps = c.quantities["epsilon"].get<double>();
  const int max_dim = opt.max_dim;

  if (c.construction == "zp-residue") return separate_zp(spec, tol);
  if (c.construction == "slnp-residue") return separate_slnp(spec, tol);
  if (c.construction == "shift-periodic") return separate_shift(spec, tol);

  if (c.construction == "wreath-character") {
    const auto& p = std::get<WreathInstance>(spec.payload);
    const FiniteGroup h = p.base.build();
    const DynGroup g = p.acting.build_dyn();
    std::map<GElem, int> entries;
    for (const auto& e : c.element["config"])
      entries[echo_int(e["pos"], "pos")] =
          static_cast<int>(echo_int(e["val"], "val"));
    return separate_wreath_char(spec, WreathElement(h, g, entries), tol);
  }
  if (c.construction == "groupoid-trace-amplification") {
    const auto& p = std::get<GroupoidInstance>(spec.payload);
    const GroupoidPtr gpd = p.groupoid.build();
    GroupoidFunction f = GroupoidFunction::zero(gpd);
    const Json& arrows = c.element["arrows"];
    const Json& values = c.element["values"];
    if (!arrows.is_array() || !values.is_array() ||
        arrows.size() != values.size())
      throw ParseError("malformed element echo");
    for (size_t i = 0; i < arrows.size(); ++i) {
      const int a = static_cast<int>(echo_int(arrows[i], "arrow"));
      if (a < 0 || a >= gpd->num_arrows())
        throw ParseError("element echo arrow out of range");
      f.set(a, echo_cplx(values[i]));
    }
    return separate_groupoid(spec, gpd, f, tol, eps, max_dim);
  }
  if (c.construction == "crossed-induced") {
    const auto& p = std::get<CrossedInstance>(spec.payload);
    const GAlgebraPtr sys = p.build_system();
    CrossedElement b = CrossedElement::zero(sys);
    for (const auto& t : c.element["terms"]) {
      const GElem g = echo_int(t["g"], "g");
      const Json& bs = t["blocks"];
      if (!bs.is_array() || bs.size() != p.blocks.size())
        throw ParseError("malformed element echo term");
      AlgElement a{sys->alg(), {}};
      for (size_t k = 0; k < bs.size(); ++k)
        a.blocks.push_back(matrix_from_json(bs[k], p.blocks[k], p.blocks[k]));
      b.add_term(g, a);
    }
    return separate_crossed(spec, sys, b, tol, eps, max_dim);
  }
  if (c.construction == "semidirect-induced") {
    if (spec.kind == InstanceKind::semidirect) {
      const auto& p = std::get<SemidirectInstance>(spec.payload);
      const SemidirectSystem sys = p.build();
      const GroupAlgebraModel model = group_algebra_model(sys);
      const int h = static_cast<int>(echo_int(c.element["h"], "h"));
      const GElem g = echo_int(c.element["g"], "g");
      if (h < 0 || h >= sys.h.order()) throw ParseError("element echo h out of range");
      return separate_model_element(spec, model, h, g, semidirect_echo(h, g),
                                    tol, eps, max_dim);
    }
    if (spec.kind == InstanceKind::wreath) {
      const auto& p = std::get<WreathInstance>(spec.payload);
      const FiniteGroup h = p.base.build();
      const DynGroup dg = p.acting.build_dyn();
      if (!dg.is_finite())
        throw ParseError("induced wreath certificates need a finite acting group");
      const SemidirectSystem sys = wreath_semidirect_system(h, dg.group());
      const GroupAlgebraModel model = group_algebra_model(sys);
      const int n = dg.group().order();
      std::vector<int> digits(n, h.identity());
      std::map<GElem, int> entries;
      for (const auto& e : c.element["config"]) {
        const GElem pos = echo_int(e["pos"], "pos");
        const int val = static_cast<int>(echo_int(e["val"], "val"));
        if (pos < 0 || pos >= n) throw ParseError("element echo position out of range");
        if (val < 0 || val >= h.order()) throw ParseError("element echo value out of range");
        digits[static_cast<size_t>(pos)] = val;
        entries[pos] = val;
      }
      const GElem g = echo_int(c.element["g"], "g");
      const int hidx = static_cast<int>(power_index(digits, h.order()));
      return separate_model_element(spec, model, hidx, g,
                                    wreath_echo(entries, g), tol, eps, max_dim);
    }
    throw ParseError("unsupported instance kind for an induced certificate");
  }
  throw ParseError("unknown construction \"" + c.construction + "\"");
}

}  // namespace

CheckOutcome run_check(const std::string& text, const DriverOptions& opt) {
  CheckOutcome out;
  std::vector<SeparationCertificate> certs;
  try {
    const Json j = Json::parse(text);
    if (j.is_array()) {
      for (const auto& e : j) certs.push_back(parse_certificate(canonical_dump(e)));
      if (certs.empty()) throw ParseError("empty certificate array");
    } else {
      certs.push_back(parse_certificate(text));
    }
  } catch (const ParseError& e) {
    out.exit = kExitBadInput;
    out.message = e.what();
    return out;
  } catch (const std::exception& e) {
    out.exit = kExitBadInput;
    out.message = std::string("json parse error: ") + e.what();
    return out;
  }

  Json results = Json::array();
  bool all_ok = true;
  std::ostringstream os;
  for (auto cert : certs) {
    if (opt.tolerance) cert.tolerance = *opt.tolerance;
    CheckReport stored = check_certificate(cert);
    bool replay_ok = true;
    std::string replay_msg;
    try {
      const SeparationCertificate again = replay_certificate(cert, opt);
      std::string where = "certificate";
      // The replay must reproduce the whole certificate within tolerance.
      Json a = certificate_json(cert);
      Json b = certificate_json(again);
      a.erase("tolerance");
      b.erase("tolerance");
      if (!json_close(a, b, cert.tolerance, where)) {
        replay_ok = false;
        replay_msg = "replay diverged at " + where;
      }
    } catch (const std::exception& e) {
      replay_ok = false;
      replay_msg = std::string("replay failed: ") + e.what();
    }
    const bool ok = stored.ok && replay_ok;
    all_ok = all_ok && ok;
    out.max_violation = std::max(out.max_violation, stored.max_violation);
    Json r;
    r["digest"] = cert.digest;
    r["construction"] = cert.construction;
    r["ok"] = ok;
    r["max_violation"] = stored.max_violation;
    Json fails = Json::array();
    for (const auto& f : stored.failures) fails.push_back(f);
    if (!replay_ok) fails.push_back(replay_msg);
    r["failures"] = fails;
    results.push_back(r);
    os << cert.construction << " " << cert.digest << ": "
       << (ok ? "ok" : "FAILED") << "\n";
    if (!stored.ok) os << "  " << stored.summary() << "\n";
    if (!replay_ok) os << "  " << replay_msg << "\n";
  }
  out.report["count"] = certs.size();
  out.report["results"] = results;
  out.exit = all_ok ? kExitOk : kExitFailure;
  out.message = os.str();
  return out;
}

}  // namespace rfdlab
