#pragma once

#include "rfdlab/certificate.hpp"

namespace rfdlab {

/// Exit codes shared by the library drivers and the command line.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,    // verification or separation failed
  kExitBadInput = 2,   // parse or validation error
  kExitExhausted = 3,  // internal search limits hit
};

struct DriverOptions {
  /// Element override: "all" (finite semidirect/wreath), "h,g" (semidirect),
  /// "k/p^m" (zp), "arrow:N" (groupoid). Empty: the instance's element.
  std::string element_selector;
  std::optional<double> epsilon;    // tightens the trace-matching target
  std::optional<double> tolerance;  // overrides instance/certificate tolerance
  bool parallel = false;
  int max_dim = 4096;
};

struct VerifyOutcome {
  int exit = kExitOk;
  std::string message;
  double max_violation = 0.0;
  Json report;
};

/// Representation-axiom suite over the instance's stored representation.
VerifyOutcome run_verify(const InstanceSpec& spec, const DriverOptions& opt);

struct SeparateOutcome {
  int exit = kExitOk;
  std::string message;
  std::vector<SeparationCertificate> certificates;
  Json report;
};

/// Dispatches the kind-specific separation and wraps the result in
/// certificates. Selector "all" fans out over every non-identity element.
SeparateOutcome run_separate(const InstanceSpec& spec, const DriverOptions& opt);

struct CheckOutcome {
  int exit = kExitOk;
  std::string message;
  double max_violation = 0.0;
  Json report;
};

/// Full certificate check: stored-data verification via check_certificate,
/// then a deterministic replay of the separation from the embedded instance,
/// compared field by field within tolerance. Accepts a single certificate
/// object or an array of them.
CheckOutcome run_check(const std::string& text, const DriverOptions& opt);

}  // namespace rfdlab
