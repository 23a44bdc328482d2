#pragma once

#include <optional>
#include <variant>

#include <json.hpp>

#include "rfdlab/constructions.hpp"
#include "rfdlab/crossed.hpp"
#include "rfdlab/groupoid.hpp"
#include "rfdlab/padic.hpp"

namespace rfdlab {

using Json = nlohmann::ordered_json;

/// Malformed or semantically invalid input file (CLI exit code 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// FNV-1a 64-bit content hash, 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Canonical byte serialization: no whitespace, integers as decimal,
/// doubles via %.17g with negative zero normalized to "0". Emitting a
/// parsed document is idempotent.
std::string canonical_dump(const Json& j);

/// Row-major flat array of [re, im] pairs.
Json matrix_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, int rows, int cols);

enum class InstanceKind { groupoid, crossed, semidirect, wreath, zp, slnp, shift };

std::string kind_name(InstanceKind k);
InstanceKind kind_from_name(const std::string& s);

/// Group description preserving its constructor form so canonical output
/// round-trips. `integers` stands for the group Z.
struct GroupSpec {
  std::string type;  // cyclic|symmetric|dihedral|table|permutation|integers
  int n = 0;         // cyclic/symmetric/dihedral order parameter
  int order = 0;     // table form
  std::vector<int> table;
  int degree = 0;  // permutation form
  std::vector<std::vector<int>> generators;

  bool is_integers() const { return type == "integers"; }
  FiniteGroup build() const;
  DynGroup build_dyn() const;
  Json to_json() const;
  static GroupSpec from_json(const Json& j, bool allow_integers);
};

struct Parameters {
  std::optional<double> epsilon;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
};

/// Transformation-groupoid or group-bundle description.
struct GroupoidDesc {
  std::string type;  // action|bundle
  GroupSpec group;
  int set_size = 0;
  bool generator_form = false;
  std::vector<std::vector<int>> images;  // full form, one per group element
  std::vector<int> gens;                 // generator form
  std::vector<std::vector<int>> gen_images;
  std::vector<GroupSpec> bundle_groups;

  GroupoidPtr build() const;
};

struct GroupoidInstance {
  GroupoidDesc groupoid;
  bool has_element = false;
  std::vector<int> arrows;  // strictly ascending
  std::vector<cplx> values;
  bool has_rep = false;
  int rep_dim = 0;
  std::vector<CMatrix> rep_mats;  // one per arrow

  GroupoidFunction build_element(const GroupoidPtr& g) const;
  ArrowRep build_rep(const GroupoidPtr& g) const;
};

struct AutomorphismDesc {
  std::vector<int> sigma;
  std::vector<CMatrix> unitaries;

  AlgAutomorphism build(const FdAlgebra& a) const;
};

struct CrossedInstance {
  std::vector<int> blocks;
  GroupSpec group;
  std::vector<AutomorphismDesc> automorphisms;  // finite case, per element
  AutomorphismDesc generator;                   // Z case

  struct Term {
    GElem g = 0;
    std::vector<CMatrix> mats;
  };
  std::vector<Term> terms;  // ascending in g
  bool has_element = false;

  GAlgebraPtr build_system() const;
  CrossedElement build_element(const GAlgebraPtr& sys) const;
};

struct SemidirectInstance {
  GroupSpec base;
  GroupSpec acting;
  std::vector<std::vector<int>> action;  // finite case, per element
  std::vector<int> generator_action;     // Z case
  bool has_element = false;
  int elem_h = 0;
  GElem elem_g = 0;

  SemidirectSystem build() const;
};

struct WreathInstance {
  GroupSpec base;
  GroupSpec acting;
  struct Entry {
    GElem pos = 0;
    int val = 0;
  };
  std::vector<Entry> config;  // ascending in pos
  GElem elem_g = 0;
  bool has_element = false;
};

struct ZpInstance {
  int p = 2;
  std::int64_t num = 0;
  int powm = 0;

  PAdicRational build() const;
};

struct SlnpInstance {
  int p = 2;
  int n = 2;
  struct Entry {
    std::int64_t num = 0;
    int powm = 0;
  };
  std::vector<Entry> entries;  // row-major, n*n

  PMatrix build() const;
};

struct ShiftInstance {
  int alphabet = 2;
  std::vector<int> pattern;
};

using InstancePayload =
    std::variant<GroupoidInstance, CrossedInstance, SemidirectInstance,
                 WreathInstance, ZpInstance, SlnpInstance, ShiftInstance>;

struct InstanceSpec {
  InstanceKind kind = InstanceKind::zp;
  Parameters params;
  InstancePayload payload;
};

/// Parses and validates; every payload is built once so structural errors
/// surface before any computation. Throws ParseError.
InstanceSpec parse_instance(const std::string& text);
InstanceSpec parse_instance_file(const std::string& path);

Json instance_json(const InstanceSpec& spec);
std::string canonical_instance(const InstanceSpec& spec);
/// Hash of the canonical serialization.
std::string instance_digest(const InstanceSpec& spec);

}  // namespace rfdlab
