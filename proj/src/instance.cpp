#include "rfdlab/instance.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rfdlab {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

std::string fmt_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void escape_string(const std::string& s, std::string& out) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void dump_rec(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out.push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        escape_string(it.key(), out);
        out.push_back(':');
        dump_rec(it.value(), out);
      }
      out.push_back('}');
      break;
    }
    case Json::value_t::array: {
      out.push_back('[');
      bool first = true;
      for (const auto& v : j) {
        if (!first) out.push_back(',');
        first = false;
        dump_rec(v, out);
      }
      out.push_back(']');
      break;
    }
    case Json::value_t::string:
      escape_string(j.get<std::string>(), out);
      break;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%" PRId64, j.get<std::int64_t>());
      out += buf;
      break;
    }
    case Json::value_t::number_unsigned: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%" PRIu64, j.get<std::uint64_t>());
      out += buf;
      break;
    }
    case Json::value_t::number_float:
      out += fmt_double(j.get<double>());
      break;
    case Json::value_t::null:
      out += "null";
      break;
    default:
      fail("unsupported json value in canonical output");
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys,
                    const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(std::string("unknown field \"") + it.key() + "\" in " + what);
  }
}

std::int64_t get_int(const Json& j, const char* what) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    fail(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

int get_int32(const Json& j, const char* what) {
  std::int64_t v = get_int(j, what);
  if (v < INT32_MIN || v > INT32_MAX) fail(std::string(what) + " out of range");
  return static_cast<int>(v);
}

double get_num(const Json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<int> get_int_vector(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  std::vector<int> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(get_int32(v, what));
  return out;
}

std::vector<std::vector<int>> get_perm_list(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array of arrays");
  std::vector<std::vector<int>> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(get_int_vector(v, what));
  return out;
}

cplx get_cplx(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    fail("complex values are [re, im] pairs");
  return {get_num(j[0], "re"), get_num(j[1], "im")};
}

Json cplx_json(cplx v) { return Json::array({v.real(), v.imag()}); }

Json int_vector_json(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x);
  return out;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_rec(j, out);
  return out;
}

Json matrix_json(const CMatrix& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k) out.push_back(cplx_json(m.at(i, k)));
  return out;
}

CMatrix matrix_from_json(const Json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
    fail("matrix entry count does not match its dimensions");
  std::vector<cplx> entries;
  entries.reserve(j.size());
  for (const auto& v : j) entries.push_back(get_cplx(v));
  return CMatrix(rows, cols, std::move(entries));
}

std::string kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::groupoid: return "groupoid";
    case InstanceKind::crossed: return "crossed";
    case InstanceKind::semidirect: return "semidirect";
    case InstanceKind::wreath: return "wreath";
    case InstanceKind::zp: return "zp";
    case InstanceKind::slnp: return "slnp";
    case InstanceKind::shift: return "shift";
  }
  fail("unreachable kind");
}

InstanceKind kind_from_name(const std::string& s) {
  if (s == "groupoid") return InstanceKind::groupoid;
  if (s == "crossed") return InstanceKind::crossed;
  if (s == "semidirect") return InstanceKind::semidirect;
  if (s == "wreath") return InstanceKind::wreath;
  if (s == "zp") return InstanceKind::zp;
  if (s == "slnp") return InstanceKind::slnp;
  if (s == "shift") return InstanceKind::shift;
  fail("unknown kind \"" + s + "\"");
}

FiniteGroup GroupSpec::build() const {
  try {
    if (type == "cyclic") return cyclic_group(n);
    if (type == "symmetric") return symmetric_group(n);
    if (type == "dihedral") return dihedral_group(n);
    if (type == "table") return FiniteGroup(order, table);
    if (type == "permutation")
      return group_from_permutations(degree, generators).group;
  } catch (const std::exception& e) {
    fail(std::string("invalid group: ") + e.what());
  }
  fail("group type \"" + type + "\" does not describe a finite group");
}

DynGroup GroupSpec::build_dyn() const {
  if (is_integers()) return DynGroup::integers();
  return DynGroup::finite(build());
}

Json GroupSpec::to_json() const {
  Json out;
  out["type"] = type;
  if (type == "cyclic" || type == "symmetric" || type == "dihedral") {
    out["n"] = n;
  } else if (type == "table") {
    out["order"] = order;
    out["table"] = int_vector_json(table);
  } else if (type == "permutation") {
    out["degree"] = degree;
    Json gens = Json::array();
    for (const auto& p : generators) gens.push_back(int_vector_json(p));
    out["generators"] = gens;
  }
  return out;
}

GroupSpec GroupSpec::from_json(const Json& j, bool allow_integers) {
  GroupSpec out;
  out.type = field(j, "type").get<std::string>();
  if (out.type == "integers") {
    if (!allow_integers) fail("the integers are not a valid group here");
    reject_unknown(j, {"type"}, "group");
    return out;
  }
  if (out.type == "cyclic" || out.type == "symmetric" || out.type == "dihedral") {
    reject_unknown(j, {"type", "n"}, "group");
    out.n = get_int32(field(j, "n"), "n");
  } else if (out.type == "table") {
    reject_unknown(j, {"type", "order", "table"}, "group");
    out.order = get_int32(field(j, "order"), "order");
    out.table = get_int_vector(field(j, "table"), "table");
  } else if (out.type == "permutation") {
    reject_unknown(j, {"type", "degree", "generators"}, "group");
    out.degree = get_int32(field(j, "degree"), "degree");
    out.generators = get_perm_list(field(j, "generators"), "generators");
  } else {
    fail("unknown group type \"" + out.type + "\"");
  }
  out.build();
  return out;
}

GroupoidPtr GroupoidDesc::build() const {
  try {
    if (type == "bundle") {
      std::vector<FiniteGroup> groups;
      groups.reserve(bundle_groups.size());
      for (const auto& g : bundle_groups) groups.push_back(g.build());
      return group_bundle(groups);
    }
    const FiniteGroup g = group.build();
    if (generator_form)
      return groupoid_from_action(action_from_images(g, gens, gen_images, set_size));
    GroupAction act{g, set_size, images};
    act.validate();
    return groupoid_from_action(act);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(std::string("invalid groupoid: ") + e.what());
  }
}

GroupoidFunction GroupoidInstance::build_element(const GroupoidPtr& g) const {
  if (!has_element) fail("instance has no element");
  GroupoidFunction f = GroupoidFunction::zero(g);
  for (size_t i = 0; i < arrows.size(); ++i) {
    if (arrows[i] < 0 || arrows[i] >= g->num_arrows())
      fail("element arrow index out of range");
    f.set(arrows[i], values[i]);
  }
  return f;
}

ArrowRep GroupoidInstance::build_rep(const GroupoidPtr& g) const {
  if (!has_rep) fail("instance has no representation");
  if (static_cast<int>(rep_mats.size()) != g->num_arrows())
    fail("representation must list one matrix per arrow");
  return ArrowRep{g, rep_dim, rep_mats};
}

AlgAutomorphism AutomorphismDesc::build(const FdAlgebra& a) const {
  AlgAutomorphism out{a, sigma, unitaries};
  try {
    out.validate();
  } catch (const std::exception& e) {
    fail(std::string("invalid automorphism: ") + e.what());
  }
  return out;
}

GAlgebraPtr CrossedInstance::build_system() const {
  const FdAlgebra alg{blocks};
  try {
    if (group.is_integers())
      return std::make_shared<GAlgebra>(alg, generator.build(alg));
    const FiniteGroup g = group.build();
    std::vector<AlgAutomorphism> per_element;
    per_element.reserve(automorphisms.size());
    for (const auto& a : automorphisms) per_element.push_back(a.build(alg));
    return std::make_shared<GAlgebra>(alg, g, std::move(per_element));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(std::string("invalid crossed system: ") + e.what());
  }
}

CrossedElement CrossedInstance::build_element(const GAlgebraPtr& sys) const {
  if (!has_element) fail("instance has no element");
  CrossedElement b = CrossedElement::zero(sys);
  for (const auto& t : terms) {
    if (sys->grp().is_finite() &&
        (t.g < 0 || t.g >= sys->grp().group().order()))
      fail("element term group index out of range");
    AlgElement a{sys->alg(), t.mats};
    b.add_term(t.g, a);
  }
  return b;
}

SemidirectSystem SemidirectInstance::build() const {
  try {
    if (acting.is_integers()) return SemidirectSystem(base.build(), generator_action);
    return SemidirectSystem(base.build(), acting.build(), action);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(std::string("invalid semidirect system: ") + e.what());
  }
}

PAdicRational ZpInstance::build() const {
  try {
    return PAdicRational(p, num, powm);
  } catch (const std::exception& e) {
    fail(std::string("invalid zp value: ") + e.what());
  }
}

PMatrix SlnpInstance::build() const {
  if (static_cast<int>(entries.size()) != n * n)
    fail("slnp entry count does not match the matrix size");
  std::vector<PAdicRational> vals;
  vals.reserve(entries.size());
  try {
    for (const auto& e : entries) vals.emplace_back(p, e.num, e.powm);
    return PMatrix(p, n, std::move(vals));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(std::string("invalid slnp matrix: ") + e.what());
  }
}

namespace {

Json automorphism_json(const AutomorphismDesc& a) {
  Json out;
  out["sigma"] = int_vector_json(a.sigma);
  Json us = Json::array();
  for (const auto& u : a.unitaries) us.push_back(matrix_json(u));
  out["unitaries"] = us;
  return out;
}

AutomorphismDesc automorphism_from_json(const Json& j,
                                        const std::vector<int>& blocks) {
  reject_unknown(j, {"sigma", "unitaries"}, "automorphism");
  AutomorphismDesc out;
  out.sigma = get_int_vector(field(j, "sigma"), "sigma");
  const Json& us = field(j, "unitaries");
  if (!us.is_array() || us.size() != blocks.size())
    fail("automorphism must list one unitary per block");
  for (size_t k = 0; k < us.size(); ++k)
    out.unitaries.push_back(matrix_from_json(us[k], blocks[k], blocks[k]));
  return out;
}

Json groupoid_payload_json(const GroupoidInstance& p) {
  Json out;
  Json d;
  d["type"] = p.groupoid.type;
  if (p.groupoid.type == "bundle") {
    Json gs = Json::array();
    for (const auto& g : p.groupoid.bundle_groups) gs.push_back(g.to_json());
    d["groups"] = gs;
  } else {
    d["group"] = p.groupoid.group.to_json();
    d["set_size"] = p.groupoid.set_size;
    if (p.groupoid.generator_form) {
      d["generators"] = int_vector_json(p.groupoid.gens);
      Json imgs = Json::array();
      for (const auto& perm : p.groupoid.gen_images)
        imgs.push_back(int_vector_json(perm));
      d["generator_images"] = imgs;
    } else {
      Json imgs = Json::array();
      for (const auto& perm : p.groupoid.images)
        imgs.push_back(int_vector_json(perm));
      d["images"] = imgs;
    }
  }
  out["groupoid"] = d;
  if (p.has_element) {
    Json e;
    e["arrows"] = int_vector_json(p.arrows);
    Json vals = Json::array();
    for (cplx v : p.values) vals.push_back(cplx_json(v));
    e["values"] = vals;
    out["element"] = e;
  }
  if (p.has_rep) {
    Json r;
    r["dim"] = p.rep_dim;
    Json mats = Json::array();
    for (const auto& m : p.rep_mats) mats.push_back(matrix_json(m));
    r["mats"] = mats;
    out["representation"] = r;
  }
  return out;
}

GroupoidInstance groupoid_payload_from_json(const Json& j) {
  reject_unknown(j, {"groupoid", "element", "representation"}, "groupoid payload");
  GroupoidInstance out;
  const Json& d = field(j, "groupoid");
  out.groupoid.type = field(d, "type").get<std::string>();
  if (out.groupoid.type == "bundle") {
    reject_unknown(d, {"type", "groups"}, "groupoid");
    const Json& gs = field(d, "groups");
    if (!gs.is_array() || gs.empty()) fail("bundle needs a group list");
    for (const auto& g : gs)
      out.groupoid.bundle_groups.push_back(GroupSpec::from_json(g, false));
  } else if (out.groupoid.type == "action") {
    out.groupoid.group = GroupSpec::from_json(field(d, "group"), false);
    out.groupoid.set_size = get_int32(field(d, "set_size"), "set_size");
    if (d.contains("generators")) {
      reject_unknown(d, {"type", "group", "set_size", "generators",
                         "generator_images"}, "groupoid");
      out.groupoid.generator_form = true;
      out.groupoid.gens = get_int_vector(field(d, "generators"), "generators");
      out.groupoid.gen_images =
          get_perm_list(field(d, "generator_images"), "generator_images");
    } else {
      reject_unknown(d, {"type", "group", "set_size", "images"}, "groupoid");
      out.groupoid.images = get_perm_list(field(d, "images"), "images");
    }
  } else {
    fail("unknown groupoid type \"" + out.groupoid.type + "\"");
  }
  const GroupoidPtr gpd = out.groupoid.build();
  if (j.contains("element")) {
    const Json& e = j["element"];
    reject_unknown(e, {"arrows", "values"}, "element");
    out.has_element = true;
    out.arrows = get_int_vector(field(e, "arrows"), "arrows");
    const Json& vals = field(e, "values");
    if (!vals.is_array() || vals.size() != out.arrows.size())
      fail("element arrows and values must have equal length");
    for (const auto& v : vals) out.values.push_back(get_cplx(v));
    for (size_t i = 1; i < out.arrows.size(); ++i)
      if (out.arrows[i] <= out.arrows[i - 1])
        fail("element arrows must be strictly ascending");
    out.build_element(gpd);
  }
  if (j.contains("representation")) {
    const Json& r = j["representation"];
    reject_unknown(r, {"dim", "mats"}, "representation");
    out.has_rep = true;
    out.rep_dim = get_int32(field(r, "dim"), "dim");
    if (out.rep_dim <= 0) fail("representation dimension must be positive");
    const Json& mats = field(r, "mats");
    if (!mats.is_array()) fail("representation mats must be an array");
    for (const auto& m : mats)
      out.rep_mats.push_back(matrix_from_json(m, out.rep_dim, out.rep_dim));
    out.build_rep(gpd);
  }
  return out;
}

Json crossed_payload_json(const CrossedInstance& p) {
  Json out;
  Json alg;
  alg["blocks"] = int_vector_json(p.blocks);
  out["algebra"] = alg;
  out["group"] = p.group.to_json();
  if (p.group.is_integers()) {
    out["generator"] = automorphism_json(p.generator);
  } else {
    Json as = Json::array();
    for (const auto& a : p.automorphisms) as.push_back(automorphism_json(a));
    out["automorphisms"] = as;
  }
  if (p.has_element) {
    Json terms = Json::array();
    for (const auto& t : p.terms) {
      Json term;
      term["g"] = t.g;
      Json bs = Json::array();
      for (const auto& m : t.mats) bs.push_back(matrix_json(m));
      term["blocks"] = bs;
      terms.push_back(term);
    }
    Json e;
    e["terms"] = terms;
    out["element"] = e;
  }
  return out;
}

CrossedInstance crossed_payload_from_json(const Json& j) {
  CrossedInstance out;
  const Json& alg = field(j, "algebra");
  reject_unknown(alg, {"blocks"}, "algebra");
  out.blocks = get_int_vector(field(alg, "blocks"), "blocks");
  if (out.blocks.empty()) fail("algebra needs at least one block");
  for (int b : out.blocks)
    if (b <= 0) fail("block sizes must be positive");
  out.group = GroupSpec::from_json(field(j, "group"), true);
  if (out.group.is_integers()) {
    reject_unknown(j, {"algebra", "group", "generator", "element"},
                   "crossed payload");
    out.generator = automorphism_from_json(field(j, "generator"), out.blocks);
  } else {
    reject_unknown(j, {"algebra", "group", "automorphisms", "element"},
                   "crossed payload");
    const Json& as = field(j, "automorphisms");
    const FiniteGroup g = out.group.build();
    if (!as.is_array() || static_cast<int>(as.size()) != g.order())
      fail("need one automorphism per group element");
    for (const auto& a : as)
      out.automorphisms.push_back(automorphism_from_json(a, out.blocks));
  }
  const GAlgebraPtr sys = out.build_system();
  if (j.contains("element")) {
    const Json& e = j["element"];
    reject_unknown(e, {"terms"}, "element");
    out.has_element = true;
    const Json& terms = field(e, "terms");
    if (!terms.is_array()) fail("element terms must be an array");
    for (const auto& t : terms) {
      reject_unknown(t, {"g", "blocks"}, "term");
      CrossedInstance::Term term;
      term.g = get_int(field(t, "g"), "g");
      const Json& bs = field(t, "blocks");
      if (!bs.is_array() || bs.size() != out.blocks.size())
        fail("term must list one matrix per block");
      for (size_t k = 0; k < bs.size(); ++k)
        term.mats.push_back(matrix_from_json(bs[k], out.blocks[k], out.blocks[k]));
      out.terms.push_back(std::move(term));
    }
    for (size_t i = 1; i < out.terms.size(); ++i)
      if (out.terms[i].g <= out.terms[i - 1].g)
        fail("element terms must be strictly ascending in g");
    out.build_element(sys);
  }
  return out;
}

Json semidirect_payload_json(const SemidirectInstance& p) {
  Json out;
  out["base"] = p.base.to_json();
  out["acting"] = p.acting.to_json();
  if (p.acting.is_integers()) {
    out["generator_action"] = int_vector_json(p.generator_action);
  } else {
    Json acts = Json::array();
    for (const auto& perm : p.action) acts.push_back(int_vector_json(perm));
    out["action"] = acts;
  }
  if (p.has_element) {
    Json e;
    e["h"] = p.elem_h;
    e["g"] = p.elem_g;
    out["element"] = e;
  }
  return out;
}

SemidirectInstance semidirect_payload_from_json(const Json& j) {
  SemidirectInstance out;
  out.base = GroupSpec::from_json(field(j, "base"), false);
  out.acting = GroupSpec::from_json(field(j, "acting"), true);
  if (out.acting.is_integers()) {
    reject_unknown(j, {"base", "acting", "generator_action", "element"},
                   "semidirect payload");
    out.generator_action =
        get_int_vector(field(j, "generator_action"), "generator_action");
  } else {
    reject_unknown(j, {"base", "acting", "action", "element"},
                   "semidirect payload");
    out.action = get_perm_list(field(j, "action"), "action");
  }
  const SemidirectSystem sys = out.build();
  if (j.contains("element")) {
    const Json& e = j["element"];
    reject_unknown(e, {"h", "g"}, "element");
    out.has_element = true;
    out.elem_h = get_int32(field(e, "h"), "h");
    out.elem_g = get_int(field(e, "g"), "g");
    if (out.elem_h < 0 || out.elem_h >= sys.h.order())
      fail("element h out of range");
    if (sys.g.is_finite() &&
        (out.elem_g < 0 || out.elem_g >= sys.g.group().order()))
      fail("element g out of range");
  }
  return out;
}

Json wreath_payload_json(const WreathInstance& p) {
  Json out;
  out["base"] = p.base.to_json();
  out["acting"] = p.acting.to_json();
  if (p.has_element) {
    Json cfg = Json::array();
    for (const auto& entry : p.config) {
      Json e;
      e["pos"] = entry.pos;
      e["val"] = entry.val;
      cfg.push_back(e);
    }
    Json e;
    e["config"] = cfg;
    e["g"] = p.elem_g;
    out["element"] = e;
  }
  return out;
}

WreathInstance wreath_payload_from_json(const Json& j) {
  reject_unknown(j, {"base", "acting", "element"}, "wreath payload");
  WreathInstance out;
  out.base = GroupSpec::from_json(field(j, "base"), false);
  out.acting = GroupSpec::from_json(field(j, "acting"), true);
  const FiniteGroup h = out.base.build();
  const DynGroup g = out.acting.build_dyn();
  if (j.contains("element")) {
    const Json& e = j["element"];
    reject_unknown(e, {"config", "g"}, "element");
    out.has_element = true;
    const Json& cfg = field(e, "config");
    if (!cfg.is_array()) fail("element config must be an array");
    for (const auto& c : cfg) {
      reject_unknown(c, {"pos", "val"}, "config entry");
      WreathInstance::Entry entry;
      entry.pos = get_int(field(c, "pos"), "pos");
      entry.val = get_int32(field(c, "val"), "val");
      if (entry.val < 0 || entry.val >= h.order())
        fail("config value out of range");
      if (g.is_finite() && (entry.pos < 0 || entry.pos >= g.group().order()))
        fail("config position out of range");
      out.config.push_back(entry);
    }
    for (size_t i = 1; i < out.config.size(); ++i)
      if (out.config[i].pos <= out.config[i - 1].pos)
        fail("config must be strictly ascending in pos");
    out.elem_g = get_int(field(e, "g"), "g");
    if (g.is_finite() && (out.elem_g < 0 || out.elem_g >= g.group().order()))
      fail("element g out of range");
  }
  return out;
}

Json zp_payload_json(const ZpInstance& p) {
  Json out;
  out["p"] = p.p;
  out["num"] = p.num;
  out["powm"] = p.powm;
  return out;
}

ZpInstance zp_payload_from_json(const Json& j) {
  reject_unknown(j, {"p", "num", "powm"}, "zp payload");
  ZpInstance out;
  out.p = get_int32(field(j, "p"), "p");
  out.num = get_int(field(j, "num"), "num");
  out.powm = get_int32(field(j, "powm"), "powm");
  out.build();
  return out;
}

Json slnp_payload_json(const SlnpInstance& p) {
  Json out;
  out["p"] = p.p;
  out["n"] = p.n;
  Json entries = Json::array();
  for (const auto& e : p.entries) {
    Json entry;
    entry["num"] = e.num;
    entry["powm"] = e.powm;
    entries.push_back(entry);
  }
  out["entries"] = entries;
  return out;
}

SlnpInstance slnp_payload_from_json(const Json& j) {
  reject_unknown(j, {"p", "n", "entries"}, "slnp payload");
  SlnpInstance out;
  out.p = get_int32(field(j, "p"), "p");
  out.n = get_int32(field(j, "n"), "n");
  const Json& entries = field(j, "entries");
  if (!entries.is_array()) fail("slnp entries must be an array");
  for (const auto& e : entries) {
    reject_unknown(e, {"num", "powm"}, "slnp entry");
    SlnpInstance::Entry entry;
    entry.num = get_int(field(e, "num"), "num");
    entry.powm = get_int32(field(e, "powm"), "powm");
    out.entries.push_back(entry);
  }
  out.build();
  return out;
}

Json shift_payload_json(const ShiftInstance& p) {
  Json out;
  out["alphabet"] = p.alphabet;
  out["pattern"] = int_vector_json(p.pattern);
  return out;
}

ShiftInstance shift_payload_from_json(const Json& j) {
  reject_unknown(j, {"alphabet", "pattern"}, "shift payload");
  ShiftInstance out;
  out.alphabet = get_int32(field(j, "alphabet"), "alphabet");
  out.pattern = get_int_vector(field(j, "pattern"), "pattern");
  if (out.alphabet < 2) fail("shift alphabet needs at least two symbols");
  if (out.pattern.empty()) fail("shift pattern must be nonempty");
  for (int s : out.pattern)
    if (s < 0 || s >= out.alphabet) fail("pattern symbol out of range");
  return out;
}

}  // namespace

InstanceSpec parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    fail(std::string("json parse error: ") + e.what());
  }
  if (!j.is_object()) fail("instance must be a json object");
  reject_unknown(j, {"version", "kind", "payload", "parameters"}, "instance");
  if (get_int(field(j, "version"), "version") != 1)
    fail("unsupported version");
  InstanceSpec spec;
  spec.kind = kind_from_name(field(j, "kind").get<std::string>());
  const Json& p = field(j, "payload");
  if (!p.is_object()) fail("payload must be an object");
  switch (spec.kind) {
    case InstanceKind::groupoid: spec.payload = groupoid_payload_from_json(p); break;
    case InstanceKind::crossed: spec.payload = crossed_payload_from_json(p); break;
    case InstanceKind::semidirect:
      spec.payload = semidirect_payload_from_json(p);
      break;
    case InstanceKind::wreath: spec.payload = wreath_payload_from_json(p); break;
    case InstanceKind::zp: spec.payload = zp_payload_from_json(p); break;
    case InstanceKind::slnp: spec.payload = slnp_payload_from_json(p); break;
    case InstanceKind::shift: spec.payload = shift_payload_from_json(p); break;
  }
  const Json& q = field(j, "parameters");
  if (!q.is_object()) fail("parameters must be an object");
  reject_unknown(q, {"epsilon", "tolerance", "seed"}, "parameters");
  if (q.contains("epsilon")) {
    spec.params.epsilon = get_num(q["epsilon"], "epsilon");
    if (*spec.params.epsilon <= 0) fail("epsilon must be positive");
  }
  if (q.contains("tolerance")) {
    spec.params.tolerance = get_num(q["tolerance"], "tolerance");
    if (*spec.params.tolerance <= 0) fail("tolerance must be positive");
  }
  if (q.contains("seed"))
    spec.params.seed = static_cast<std::uint64_t>(get_int(q["seed"], "seed"));
  return spec;
}

InstanceSpec parse_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

Json instance_json(const InstanceSpec& spec) {
  Json out;
  out["version"] = 1;
  out["kind"] = kind_name(spec.kind);
  switch (spec.kind) {
    case InstanceKind::groupoid:
      out["payload"] = groupoid_payload_json(std::get<GroupoidInstance>(spec.payload));
      break;
    case InstanceKind::crossed:
      out["payload"] = crossed_payload_json(std::get<CrossedInstance>(spec.payload));
      break;
    case InstanceKind::semidirect:
      out["payload"] =
          semidirect_payload_json(std::get<SemidirectInstance>(spec.payload));
      break;
    case InstanceKind::wreath:
      out["payload"] = wreath_payload_json(std::get<WreathInstance>(spec.payload));
      break;
    case InstanceKind::zp:
      out["payload"] = zp_payload_json(std::get<ZpInstance>(spec.payload));
      break;
    case InstanceKind::slnp:
      out["payload"] = slnp_payload_json(std::get<SlnpInstance>(spec.payload));
      break;
    case InstanceKind::shift:
      out["payload"] = shift_payload_json(std::get<ShiftInstance>(spec.payload));
      break;
  }
  Json params = Json::object();
  if (spec.params.epsilon) params["epsilon"] = *spec.params.epsilon;
  if (spec.params.tolerance) params["tolerance"] = *spec.params.tolerance;
  if (spec.params.seed)
    params["seed"] = static_cast<std::int64_t>(*spec.params.seed);
  out["parameters"] = params;
  return out;
}

std::string canonical_instance(const InstanceSpec& spec) {
  return canonical_dump(instance_json(spec));
}

std::string instance_digest(const InstanceSpec& spec) {
  return fnv1a_hex(canonical_instance(spec));
}

}  // namespace rfdlab
