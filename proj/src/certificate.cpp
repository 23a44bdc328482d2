#include "rfdlab/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

namespace rfdlab {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing certificate field \"") + key + "\"");
  return *it;
}

double get_num(const Json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + " must be a number");
  return j.get<double>();
}

std::int64_t get_int(const Json& j, const char* what) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    fail(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

cplx get_cplx(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    fail(std::string(what) + " must be a [re, im] pair");
  return {get_num(j[0], what), get_num(j[1], what)};
}

std::vector<int> get_int_vector(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  std::vector<int> out;
  for (const auto& v : j) out.push_back(static_cast<int>(get_int(v, what)));
  return out;
}

}  // namespace

Json certificate_json(const SeparationCertificate& c) {
  Json out;
  out["version"] = 1;
  out["kind"] = "certificate";
  out["instance_kind"] = c.instance_kind;
  out["construction"] = c.construction;
  out["digest"] = c.digest;
  out["instance"] = c.instance;
  out["element"] = c.element;
  out["quantities"] = c.quantities;
  out["finite_image"] = c.finite_image;
  out["image_order"] = c.image_order;
  out["witness"] = c.witness;
  out["tolerance"] = c.tolerance;
  return out;
}

std::string canonical_certificate(const SeparationCertificate& c) {
  return canonical_dump(certificate_json(c));
}

SeparationCertificate parse_certificate(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    fail(std::string("json parse error: ") + e.what());
  }
  if (!j.is_object()) fail("certificate must be a json object");
  if (get_int(field(j, "version"), "version") != 1) fail("unsupported version");
  if (field(j, "kind").get<std::string>() != "certificate")
    fail("not a certificate file");
  SeparationCertificate c;
  c.instance_kind = field(j, "instance_kind").get<std::string>();
  c.construction = field(j, "construction").get<std::string>();
  c.digest = field(j, "digest").get<std::string>();
  c.instance = field(j, "instance");
  c.element = field(j, "element");
  c.quantities = field(j, "quantities");
  const Json& fi = field(j, "finite_image");
  if (!fi.is_boolean()) fail("finite_image must be a boolean");
  c.finite_image = fi.get<bool>();
  c.image_order = get_int(field(j, "image_order"), "image_order");
  c.witness = field(j, "witness");
  c.tolerance = get_num(field(j, "tolerance"), "tolerance");
  // Bounded above so a corrupted tolerance cannot mask corrupted data.
  if (c.tolerance <= 0 || c.tolerance > kMaxCertTol)
    fail("tolerance must be in (0, 1e-4]");
  return c;
}

SeparationCertificate parse_certificate_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_certificate(buf.str());
}

void CheckReport::measure(const std::string& what, double violation, double tol) {
  max_violation = std::max(max_violation, violation);
  if (!(violation <= tol)) {
    ok = false;
    failures.push_back(what + " (violation " + std::to_string(violation) + ")");
  }
}

void CheckReport::require(bool cond, const std::string& what) {
  if (!cond) {
    ok = false;
    failures.push_back(what);
  }
}

std::string CheckReport::summary() const {
  if (ok) return "all checks passed";
  std::string out = "failed:";
  for (const auto& f : failures) out += "\n  " + f;
  return out;
}

namespace {

struct ApproxQuantities {
  double lower = 0.0;
  double epsilon = 0.0;
  double threshold = 0.0;
  int power = 0;
  double amplify_bound = 0.0;
  double certified_bound = 0.0;
  cplx phi;
  cplx trace;
  double achieved = 0.0;
  double witness_norm = -1.0;  // absent for the groupoid path
};

ApproxQuantities read_quantities(const Json& q, bool with_norm) {
  ApproxQuantities out;
  out.lower = get_num(field(q, "lower"), "lower");
  out.epsilon = get_num(field(q, "epsilon"), "epsilon");
  out.threshold = get_num(field(q, "threshold"), "threshold");
  out.power = static_cast<int>(get_int(field(q, "power"), "power"));
  out.amplify_bound = get_num(field(q, "amplify_bound"), "amplify_bound");
  out.certified_bound = get_num(field(q, "certified_bound"), "certified_bound");
  out.phi = get_cplx(field(q, "phi"), "phi");
  out.trace = get_cplx(field(q, "trace"), "trace");
  out.achieved = get_num(field(q, "achieved"), "achieved");
  if (with_norm)
    out.witness_norm = get_num(field(q, "witness_norm"), "witness_norm");
  return out;
}

/// Shared inequality chain: the trace sits within the certified error of the
/// expectation average and therefore stays above half of it.
void check_inequalities(const ApproxQuantities& q, double tol, CheckReport& r) {
  r.require(q.lower > tol, "certified lower bound must be positive");
  r.measure("epsilon exceeds a quarter of the lower bound",
            q.epsilon - q.lower / 4.0, tol);
  r.measure("expectation average drifts from the lower bound",
            std::abs(q.phi.real() - q.lower), tol);
  r.measure("expectation average has an imaginary part", std::abs(q.phi.imag()),
            tol);
  r.measure("trace misses the certified window",
            std::abs(q.trace - q.phi) - q.certified_bound, tol);
  r.measure("achieved error exceeds epsilon", q.achieved - q.epsilon, tol);
  r.measure("recorded achieved error disagrees with the stored trace",
            std::abs(std::abs(q.trace - q.phi) - q.achieved), tol);
  r.require(q.trace.real() > q.lower / 2.0 - tol,
            "trace does not clear half the lower bound");
}

InstanceSpec embedded_instance(const SeparationCertificate& c, CheckReport& r) {
  const InstanceSpec spec = parse_instance(canonical_dump(c.instance));
  r.require(instance_digest(spec) == c.digest,
            "digest does not match the embedded instance");
  r.require(kind_name(spec.kind) == c.instance_kind,
            "instance kind disagrees with the certificate");
  return spec;
}

void check_zp(const SeparationCertificate& c, CheckReport& r) {
  const InstanceSpec spec = embedded_instance(c, r);
  const auto& p = std::get<ZpInstance>(spec.payload);
  r.require(get_int(field(c.element, "num"), "num") == p.num &&
                get_int(field(c.element, "powm"), "powm") == p.powm,
            "element echo disagrees with the instance");
  const PAdicRational x = p.build();
  r.require(!x.is_zero(), "zero admits no residue witness");
  const std::int64_t q = get_int(field(c.witness, "q"), "q");
  const std::int64_t residue = get_int(field(c.witness, "residue"), "residue");
  r.require(q >= 2 && is_prime(BigInt(q)), "witness modulus must be prime");
  r.require(q % p.p != 0, "witness modulus must avoid the inverted prime");
  if (!r.ok) return;
  r.require(residue > 0 && residue < q, "residue out of range");
  r.require(BigInt(residue) == mod_residue(x, BigInt(q)),
            "residue does not reproduce");
}

void check_slnp(const SeparationCertificate& c, CheckReport& r) {
  const InstanceSpec spec = embedded_instance(c, r);
  const auto& p = std::get<SlnpInstance>(spec.payload);
  const PMatrix a = p.build();
  const std::int64_t q = get_int(field(c.witness, "q"), "q");
  r.require(q >= 2 && is_prime(BigInt(q)), "witness modulus must be prime");
  r.require(q % p.p != 0, "witness modulus must avoid the inverted prime");
  const std::vector<int> image = get_int_vector(field(c.witness, "image"), "image");
  if (static_cast<int>(image.size()) != p.n * p.n) {
    r.require(false, "image size does not match the matrix");
    return;
  }
  if (!r.ok) return;
  bool differs = false;
  for (int i = 0; i < p.n; ++i)
    for (int k = 0; k < p.n; ++k) {
      const std::int64_t v = image[static_cast<size_t>(i) * p.n + k];
      r.require(v >= 0 && v < q, "image entry out of range");
      r.require(BigInt(v) == mod_residue(a.at(i, k), BigInt(q)),
                "image entry does not reproduce");
      if (v != (i == k ? 1 : 0)) differs = true;
    }
  r.require(differs, "image equals the identity, separating nothing");
  // Exact determinant of the residue matrix, reduced mod q.
  std::vector<BigInt> m;
  for (int v : image) m.emplace_back(v);
  std::function<BigInt(const std::vector<BigInt>&, int)> det =
      [&](const std::vector<BigInt>& vals, int n) -> BigInt {
    if (n == 1) return vals[0];
    BigInt acc = 0;
    int sign = 1;
    for (int col = 0; col < n; ++col) {
      std::vector<BigInt> minor;
      for (int i = 1; i < n; ++i)
        for (int k = 0; k < n; ++k)
          if (k != col) minor.push_back(vals[static_cast<size_t>(i) * n + k]);
      acc += sign * vals[col] * det(minor, n - 1);
      sign = -sign;
    }
    return acc;
  };
  BigInt d = det(m, p.n) % q;
  if (d < 0) d += q;
  r.require(d == 1, "image determinant is not 1 mod q");
}

void check_shift(const SeparationCertificate& c, CheckReport& r) {
  const InstanceSpec spec = embedded_instance(c, r);
  const auto& p = std::get<ShiftInstance>(spec.payload);
  const std::vector<int> pattern =
      get_int_vector(field(c.element, "pattern"), "pattern");
  r.require(pattern == p.pattern, "element echo disagrees with the instance");
  PeriodicConfig cfg;
  cfg.alphabet = p.alphabet;
  cfg.base = get_int(field(c.witness, "base"), "base");
  cfg.word = get_int_vector(field(c.witness, "word"), "word");
  const std::int64_t period = get_int(field(c.witness, "period"), "period");
  r.require(period == cfg.period() && period > 0,
            "stored period disagrees with the witness word");
  for (int s : cfg.word)
    r.require(s >= 0 && s < p.alphabet, "witness letter outside the alphabet");
  if (!r.ok) return;
  for (size_t i = 0; i < p.pattern.size(); ++i)
    r.require(cfg.at(static_cast<std::int64_t>(i)) == p.pattern[i],
              "periodic point does not reproduce the pattern");
  for (std::int64_t i = -2 * period; i <= 2 * period; ++i)
    r.require(cfg.at(i) == cfg.at(i + period), "witness is not periodic");
}

void check_wreath_character(const SeparationCertificate& c, CheckReport& r) {
  const InstanceSpec spec = embedded_instance(c, r);
  const auto& p = std::get<WreathInstance>(spec.payload);
  const FiniteGroup h = p.base.build();
  const DynGroup g = p.acting.build_dyn();
  const double tol = c.tolerance;

  const std::int64_t modulus = get_int(field(c.witness, "modulus"), "modulus");
  const int orbit_size =
      static_cast<int>(get_int(field(c.witness, "orbit_size"), "orbit_size"));
  const GElem position = get_int(field(c.witness, "position"), "position");
  const cplx value = get_cplx(field(c.witness, "value"), "value");
  const Json& rows = field(c.witness, "char_rows");
  if (!rows.is_array() || rows.empty()) {
    r.require(false, "character table must be a nonempty array");
    return;
  }
  std::vector<std::vector<cplx>> table;
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != h.order()) {
      r.require(false, "character row length must equal the base order");
      return;
    }
    std::vector<cplx> vals;
    for (const auto& v : row) vals.push_back(get_cplx(v, "character value"));
    table.push_back(std::move(vals));
  }

  FiniteQuotientHom gamma;
  if (g.is_finite()) {
    r.require(modulus == g.group().order(),
              "finite acting group must use its own order as modulus");
    gamma = identity_hom(g.group());
  } else {
    r.require(modulus >= 1, "modulus must be positive");
    if (modulus < 1) return;
    gamma = mod_reduction_hom(modulus);
  }
  r.require(static_cast<std::int64_t>(table.size()) == modulus,
            "character table must assign one row per quotient class");
  if (!r.ok) return;

  // The constructor re-validates multiplicativity and unimodularity.
  std::unique_ptr<WreathCharRep> rep;
  try {
    rep = std::make_unique<WreathCharRep>(h, gamma, table);
  } catch (const std::exception& e) {
    r.require(false, std::string("character table rejected: ") + e.what());
    return;
  }

  std::map<GElem, int> entries;
  const Json& cfg = field(c.element, "config");
  for (const auto& e : cfg)
    entries[get_int(field(e, "pos"), "pos")] =
        static_cast<int>(get_int(field(e, "val"), "val"));
  r.require(get_int(field(c.element, "g"), "g") == g.id(),
            "character path separates base-coordinate elements only");
  const WreathElement x(h, g, entries);
  r.require(!x.is_identity(), "identity admits no separation");
  if (!r.ok) return;

  r.measure("witness value is not the representation value",
            std::abs(rep->value(x) - value), tol);
  r.measure("witness value is not unimodular", std::abs(std::abs(value) - 1.0),
            tol);
  r.require(std::abs(value - cplx(1.0)) > tol,
            "witness value does not separate from 1");
  r.require(rep->orbit_size() == orbit_size,
            "stored orbit size does not reproduce");
  r.require(orbit_size <= modulus, "orbit exceeds the quotient order");
  r.require(c.finite_image && c.image_order == modulus,
            "character witnesses must record their finite image");
}

/// Stored covariant pair: pi on matrix-unit images, l as a full table
/// (finite) or a single generator (integers).
struct StoredRep {
  int dim = 0;
  std::vector<int> blocks;
  std::vector<CMatrix> pi;  // per matrix unit, blocks in order, rows major
  std::map<GElem, CMatrix> l_table;  // finite case
  CMatrix l_gen;                     // integers case
  bool finite = false;

  int offset(int block) const {
    int o = 0;
    for (int k = 0; k < block; ++k) o += blocks[k] * blocks[k];
    return o;
  }
  const CMatrix& unit(int block, int rr, int cc) const {
    return pi[offset(block) + rr * blocks[block] + cc];
  }
  CMatrix of(const AlgElement& a) const {
    CMatrix out(dim, dim);
    for (int k = 0; k < static_cast<int>(blocks.size()); ++k)
      for (int rr = 0; rr < blocks[k]; ++rr)
        for (int cc = 0; cc < blocks[k]; ++cc) {
          const cplx v = a.blocks[k].at(rr, cc);
          if (v != cplx(0.0)) out += unit(k, rr, cc) * v;
        }
    return out;
  }
  CMatrix l_of(GElem g) const {
    if (finite) return l_table.at(g);
    if (g == 0) return CMatrix::identity(dim);
    CMatrix acc = CMatrix::identity(dim);
    const CMatrix step = g > 0 ? l_gen : l_gen.adjoint();
    for (GElem i = 0; i < std::abs(g); ++i) acc = acc * step;
    return acc;
  }
};

void check_stored_rep_axioms(const StoredRep& s, const GAlgebraPtr& sys,
                             double tol, CheckReport& r) {
  const int nb = static_cast<int>(s.blocks.size());
  // pi is a unital *-homomorphism on matrix units.
  CMatrix unit_sum(s.dim, s.dim);
  double mult = 0.0, star = 0.0;
  for (int k = 0; k < nb; ++k) {
    for (int rr = 0; rr < s.blocks[k]; ++rr) {
      unit_sum += s.unit(k, rr, rr);
      for (int cc = 0; cc < s.blocks[k]; ++cc)
        star = std::max(star, (s.unit(k, rr, cc).adjoint() - s.unit(k, cc, rr))
                                  .max_abs());
    }
  }
  for (int k = 0; k < nb; ++k)
    for (int l = 0; l < nb; ++l)
      for (int rr = 0; rr < s.blocks[k]; ++rr)
        for (int cc = 0; cc < s.blocks[k]; ++cc)
          for (int ss = 0; ss < s.blocks[l]; ++ss)
            for (int tt = 0; tt < s.blocks[l]; ++tt) {
              const CMatrix prod = s.unit(k, rr, cc) * s.unit(l, ss, tt);
              const CMatrix expect = (k == l && cc == ss)
                                         ? s.unit(k, rr, tt)
                                         : CMatrix(s.dim, s.dim);
              mult = std::max(mult, (prod - expect).max_abs());
            }
  r.measure("stored pi breaks multiplicativity on matrix units", mult, tol);
  r.measure("stored pi breaks the star operation", star, tol);
  r.measure("stored pi is not unital",
            (unit_sum - CMatrix::identity(s.dim)).max_abs(), tol);

  // l is unitary, multiplicative, and covariant against the system's action.
  const std::vector<GElem> gens = sys->grp().generator_elems();
  if (s.finite) {
    const FiniteGroup& g = sys->grp().group();
    r.require(static_cast<int>(s.l_table.size()) == g.order(),
              "stored l must cover the whole group");
    if (!r.ok) return;
    double lmult = 0.0;
    for (GElem a = 0; a < g.order(); ++a)
      for (GElem b = 0; b < g.order(); ++b)
        lmult = std::max(lmult, (s.l_of(a) * s.l_of(b) -
                                 s.l_of(g.mul(static_cast<int>(a),
                                              static_cast<int>(b))))
                                    .max_abs());
    r.measure("stored l breaks multiplicativity", lmult, tol);
    r.measure("stored l(e) is not the identity",
              (s.l_of(g.identity()) - CMatrix::identity(s.dim)).max_abs(), tol);
    double unit_err = 0.0;
    for (GElem a = 0; a < g.order(); ++a)
      unit_err = std::max(
          unit_err,
          (s.l_of(a) * s.l_of(a).adjoint() - CMatrix::identity(s.dim)).max_abs());
    r.measure("stored l is not unitary", unit_err, tol);
  } else {
    r.measure("stored l generator is not unitary",
              (s.l_gen * s.l_gen.adjoint() - CMatrix::identity(s.dim)).max_abs(),
              tol);
  }
  double cov = 0.0;
  for (GElem g : gens) {
    const CMatrix lg = s.l_of(g);
    const AlgAutomorphism alpha = sys->alpha(g);
    for (int k = 0; k < nb; ++k)
      for (int rr = 0; rr < s.blocks[k]; ++rr)
        for (int cc = 0; cc < s.blocks[k]; ++cc) {
          const AlgElement e = AlgElement::unit(sys->alg(), k, rr, cc);
          cov = std::max(cov, (lg * s.unit(k, rr, cc) * lg.adjoint() -
                               s.of(alpha.apply(e)))
                                  .max_abs());
        }
  }
  r.measure("stored pair breaks covariance", cov, tol);
}

void check_induced(const SeparationCertificate& c, CheckReport& r) {
  const InstanceSpec spec = embedded_instance(c, r);
  const double tol = c.tolerance;

  // The represented system: the instance itself for crossed certificates,
  // the recorded block model for the group constructions.
  GAlgebraPtr sys;
  GroupSpec acting;
  std::vector<int> blocks;
  if (c.instance_kind == "crossed") {
    const auto& p = std::get<CrossedInstance>(spec.payload);
    sys = p.build_system();
    blocks = p.blocks;
  } else {
    if (c.instance_kind == "semidirect")
      acting = std::get<SemidirectInstance>(spec.payload).acting;
    else if (c.instance_kind == "wreath")
      acting = std::get<WreathInstance>(spec.payload).acting;
    else {
      r.require(false, "unsupported instance kind for an induced witness");
      return;
    }
    CrossedInstance model;
    const Json& m = field(c.witness, "model");
    model.blocks = get_int_vector(field(m, "blocks"), "model blocks");
    model.group = acting;
    auto read_auto = [&](const Json& a) {
      AutomorphismDesc d;
      d.sigma = get_int_vector(field(a, "sigma"), "sigma");
      const Json& us = field(a, "unitaries");
      if (!us.is_array() || us.size() != model.blocks.size())
        fail("model automorphism must list one unitary per block");
      for (size_t k = 0; k < us.size(); ++k)
        d.unitaries.push_back(
            matrix_from_json(us[k], model.blocks[k], model.blocks[k]));
      return d;
    };
    if (acting.is_integers()) {
      model.generator = read_auto(field(m, "generator"));
    } else {
      const Json& as = field(m, "automorphisms");
      if (!as.is_array()) fail("model automorphisms must be an array");
      for (const auto& a : as) model.automorphisms.push_back(read_auto(a));
    }
    sys = model.build_system();
    blocks = model.blocks;
  }

  // Stored witness representation.
  StoredRep s;
  s.dim = static_cast<int>(get_int(field(c.witness, "dim"), "dim"));
  s.blocks = blocks;
  s.finite = sys->grp().is_finite();
  if (s.dim <= 0) {
    r.require(false, "witness dimension must be positive");
    return;
  }
  int basis = 0;
  for (int b : blocks) basis += b * b;
  const Json& pis = field(c.witness, "pi");
  if (!pis.is_array() || static_cast<int>(pis.size()) != basis) {
    r.require(false, "witness pi must cover the matrix-unit basis");
    return;
  }
  for (const auto& m : pis) s.pi.push_back(matrix_from_json(m, s.dim, s.dim));
  if (s.finite) {
    const Json& ls = field(c.witness, "l");
    if (!ls.is_array()) fail("witness l must be an array");
    for (const auto& e : ls)
      s.l_table.emplace(get_int(field(e, "g"), "g"),
                        matrix_from_json(field(e, "mat"), s.dim, s.dim));
  } else {
    s.l_gen = matrix_from_json(field(c.witness, "l_generator"), s.dim, s.dim);
  }

  check_stored_rep_axioms(s, sys, tol, r);
  if (!r.ok) return;

  // The separated element's coefficients over the represented system.
  CrossedElement b = CrossedElement::zero(sys);
  const Json& coeffs = field(c.witness, "coeffs");
  if (!coeffs.is_array()) fail("witness coeffs must be an array");
  for (const auto& t : coeffs) {
    const GElem g = get_int(field(t, "g"), "g");
    const Json& bs = field(t, "blocks");
    if (!bs.is_array() || bs.size() != blocks.size())
      fail("coefficient must list one matrix per block");
    AlgElement a{sys->alg(), {}};
    for (size_t k = 0; k < bs.size(); ++k)
      a.blocks.push_back(matrix_from_json(bs[k], blocks[k], blocks[k]));
    b.add_term(g, a);
  }
  r.require(!b.is_zero(tol), "stored element is zero");

  const int block =
      static_cast<int>(get_int(field(c.witness, "block"), "block"));
  if (block < 0 || block >= static_cast<int>(blocks.size())) {
    r.require(false, "witness block out of range");
    return;
  }
  const std::vector<int> orbit_blocks =
      get_int_vector(field(c.witness, "orbit_blocks"), "orbit_blocks");
  const BlockOrbit orb = orbit_and_stabilizer(sys, block);
  r.require(orb.blocks == orbit_blocks,
            "stored orbit does not reproduce from the action");

  const ApproxQuantities q = read_quantities(c.quantities, true);

  // The witness value and every numeric claim derived from it.
  const CMatrix value = matrix_from_json(field(c.witness, "value"), s.dim, s.dim);
  CMatrix rebuilt(s.dim, s.dim);
  for (const auto& [g, a] : b.terms) rebuilt += s.of(a) * s.l_of(g);
  r.measure("stored value is not the representation of the element",
            (value - rebuilt).max_abs(), tol);
  r.measure("stored witness norm disagrees with the value matrix",
            std::abs(value.operator_norm() - q.witness_norm), tol);
  r.require(q.witness_norm > tol, "witness norm does not establish nonzeroness");

  const CrossedElement x = convolve(involution(b), b);
  const AlgElement phi = conditional_expectation(x);
  cplx avg = 0.0;
  for (int k : orbit_blocks) avg += phi.block_trace(k);
  avg /= static_cast<double>(orbit_blocks.size());
  r.measure("expectation average does not reproduce", std::abs(avg - q.phi), tol);

  const cplx trace = (value.adjoint() * value).normalized_trace();
  r.measure("stored trace disagrees with the witness value",
            std::abs(trace - q.trace), tol);
  check_inequalities(q, tol, r);
  if (c.finite_image)
    r.require(c.image_order >= 1, "finite image needs a positive order");
}

void check_groupoid(const SeparationCertificate& c, CheckReport& r) {
  const InstanceSpec spec = embedded_instance(c, r);
  const auto& p = std::get<GroupoidInstance>(spec.payload);
  const GroupoidPtr gpd = p.groupoid.build();
  const double tol = c.tolerance;

  GroupoidFunction f = GroupoidFunction::zero(gpd);
  const std::vector<int> arrows =
      get_int_vector(field(c.element, "arrows"), "arrows");
  const Json& vals = field(c.element, "values");
  if (!vals.is_array() || vals.size() != arrows.size())
    fail("element arrows and values must have equal length");
  for (size_t i = 0; i < arrows.size(); ++i) {
    if (arrows[i] < 0 || arrows[i] >= gpd->num_arrows())
      fail("element arrow out of range");
    f.set(arrows[i], get_cplx(vals[i], "element value"));
  }
  r.require(!f.is_zero(tol), "stored element is zero");

  const int dim = static_cast<int>(get_int(field(c.witness, "dim"), "dim"));
  if (dim <= 0) {
    r.require(false, "witness dimension must be positive");
    return;
  }
  const Json& mats = field(c.witness, "mats");
  if (!mats.is_array() || static_cast<int>(mats.size()) != gpd->num_arrows()) {
    r.require(false, "witness must store one matrix per arrow");
    return;
  }
  ArrowRep rep{gpd, dim, {}};
  for (const auto& m : mats) rep.mats.push_back(matrix_from_json(m, dim, dim));

  Rng rng(12345);
  const VerifyReport axioms = verify_rep(rep, 6, rng);
  r.measure("stored representation fails the axiom suite",
            axioms.max_violation, tol);

  const std::vector<int> orbit_units =
      get_int_vector(field(c.witness, "orbit_units"), "orbit_units");
  r.require(!orbit_units.empty(), "witness orbit is empty");
  if (!r.ok) return;
  std::vector<int> sorted = orbit_units;
  std::sort(sorted.begin(), sorted.end());
  bool found = false;
  for (const auto& orbit : gpd->unit_orbits()) found = found || orbit == sorted;
  r.require(found, "stored units are not a unit orbit");

  const ApproxQuantities q = read_quantities(c.quantities, true);
  // All claims are about x = f^* f, whose expectation is exact input data.
  const GroupoidFunction x = convolve(involution(f), f);
  const std::vector<cplx> phi = conditional_expectation(x);
  cplx avg = 0.0;
  for (int u : orbit_units) avg += phi[u];
  avg /= static_cast<double>(orbit_units.size());
  r.measure("expectation average does not reproduce", std::abs(avg - q.phi), tol);

  const CMatrix image = rep.eval(f);
  const cplx trace = (image.adjoint() * image).normalized_trace();
  r.measure("stored trace disagrees with the witness representation",
            std::abs(trace - q.trace), tol);
  r.measure("stored witness norm disagrees with the represented element",
            std::abs(image.operator_norm() - q.witness_norm), tol);
  r.require(q.witness_norm > tol, "witness norm does not establish nonzeroness");
  check_inequalities(q, tol, r);
}

}  // namespace

CheckReport check_certificate(const SeparationCertificate& c) {
  CheckReport r;
  try {
    if (c.construction == "zp-residue") {
      check_zp(c, r);
    } else if (c.construction == "slnp-residue") {
      check_slnp(c, r);
    } else if (c.construction == "shift-periodic") {
      check_shift(c, r);
    } else if (c.construction == "wreath-character") {
      check_wreath_character(c, r);
    } else if (c.construction == "crossed-induced" ||
               c.construction == "semidirect-induced") {
      check_induced(c, r);
    } else if (c.construction == "groupoid-trace-amplification") {
      check_groupoid(c, r);
    } else {
      r.require(false, "unknown construction \"" + c.construction + "\"");
    }
  } catch (const std::exception& e) {
    r.require(false, std::string("check aborted: ") + e.what());
  }
  return r;
}

}  // namespace rfdlab
