#pragma once

#include "rfdlab/instance.hpp"

namespace rfdlab {

/// Largest tolerance a certificate may store. Certified quantities live at
/// unit scale, so anything looser would let a corrupted field pass as noise.
inline constexpr double kMaxCertTol = 1e-4;

/// Portable separation certificate. The instance is embedded in full so a
/// check needs nothing but the certificate file; `digest` commits to the
/// canonical serialization of the embedded instance.
struct SeparationCertificate {
  std::string instance_kind;
  std::string construction;  // which construction produced the witness
  std::string digest;
  Json instance;    // canonical instance object
  Json element;     // the separated element, kind-specific echo
  Json quantities;  // numeric claims; empty for the exact integer paths
  bool finite_image = false;
  std::int64_t image_order = 0;
  Json witness;  // construction-specific witness data
  double tolerance = kDefaultTol;
};

Json certificate_json(const SeparationCertificate& c);
std::string canonical_certificate(const SeparationCertificate& c);
SeparationCertificate parse_certificate(const std::string& text);
SeparationCertificate parse_certificate_file(const std::string& path);

struct CheckReport {
  bool ok = true;
  double max_violation = 0.0;
  std::vector<std::string> failures;

  /// Records a measured violation; failing when it exceeds the tolerance.
  void measure(const std::string& what, double violation, double tol);
  void require(bool cond, const std::string& what);
  std::string summary() const;
};

/// Re-derives every certified inequality and the witness's representation
/// axioms from the stored data alone. Does not re-run the search that
/// produced the witness; the driver combines this with a replay.
CheckReport check_certificate(const SeparationCertificate& c);

}  // namespace rfdlab
