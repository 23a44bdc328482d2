#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rfdlab/driver.hpp"

namespace {

std::optional<double> parse_env_tol() {
  const char* s = std::getenv("RFDLAB_TOL");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != std::strlen(s) || !(v > 0.0))
      throw std::invalid_argument("bad value");
    return v;
  } catch (const std::exception&) {
    throw rfdlab::ParseError("RFDLAB_TOL must be a positive number");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rfdlab::ParseError("cannot open \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw rfdlab::ParseError("cannot write \"" + path + "\"");
  out << text;
  if (!out) throw rfdlab::ParseError("write to \"" + path + "\" failed");
}

void emit(const rfdlab::Json& report, const std::string& message, int exit_code,
          bool as_json) {
  if (as_json) {
    std::cout << report.dump(2) << "\n";
  } else if (!message.empty()) {
    (exit_code == 0 ? std::cout : std::cerr) << message
                                             << (message.back() == '\n' ? "" : "\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"separation certificates from finite-dimensional representations"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string cert_path;
  std::string out_path;
  rfdlab::DriverOptions opt;
  double epsilon = 0.0;
  double tol = 0.0;
  bool as_json = false;

  auto* verify = app.add_subcommand(
      "verify", "run the representation axiom suite on a groupoid instance");
  verify->add_option("file", instance_path, "instance file")->required();
  auto* vtol = verify->add_option("--tol", tol, "violation tolerance");
  verify->add_flag("--json", as_json, "print the full report as json");

  auto* separate = app.add_subcommand(
      "separate", "build a certificate separating an element from the identity");
  separate->add_option("file", instance_path, "instance file")->required();
  separate->add_option("--element", opt.element_selector,
                       "element selector; defaults to the embedded element");
  auto* seps = separate->add_option("--epsilon", epsilon,
                                    "trace matching target; tightens the default");
  auto* stol = separate->add_option("--tol", tol, "witness tolerance");
  separate->add_flag("--json", as_json, "print the full report as json");
  separate->add_option("--out", out_path,
                       "certificate output path; defaults to <file>.cert.json");
  separate->add_flag("--parallel", opt.parallel,
                     "separate independent elements concurrently");
  separate->add_option("--max-dim", opt.max_dim,
                       "largest representation dimension to search");

  auto* check = app.add_subcommand(
      "check", "re-verify a stored certificate, including a full replay");
  check->add_option("file", cert_path, "certificate file")->required();
  auto* ctol = check->add_option("--tol", tol, "comparison tolerance");
  check->add_flag("--json", as_json, "print the full report as json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rfdlab::kExitBadInput;
  }

  try {
    if (seps->count() > 0) opt.epsilon = epsilon;
    if (vtol->count() > 0 || stol->count() > 0 || ctol->count() > 0) {
      opt.tolerance = tol;
    } else if (auto env = parse_env_tol()) {
      opt.tolerance = *env;
    }

    if (verify->parsed()) {
      const rfdlab::InstanceSpec spec = rfdlab::parse_instance_file(instance_path);
      const rfdlab::VerifyOutcome out = rfdlab::run_verify(spec, opt);
      emit(out.report, out.message, out.exit, as_json);
      return out.exit;
    }
    if (separate->parsed()) {
      const rfdlab::InstanceSpec spec = rfdlab::parse_instance_file(instance_path);
      rfdlab::SeparateOutcome out = rfdlab::run_separate(spec, opt);
      if (out.exit == rfdlab::kExitOk) {
        const std::string target =
            out_path.empty() ? instance_path + ".cert.json" : out_path;
        std::string text;
        if (out.certificates.size() == 1) {
          text = rfdlab::canonical_certificate(out.certificates.front());
        } else {
          rfdlab::Json arr = rfdlab::Json::array();
          for (const auto& c : out.certificates)
            arr.push_back(rfdlab::certificate_json(c));
          text = rfdlab::canonical_dump(arr);
        }
        write_file(target, text + "\n");
        out.report["out"] = target;
        out.message += "wrote " + target;
      }
      emit(out.report, out.message, out.exit, as_json);
      return out.exit;
    }
    const rfdlab::CheckOutcome out = rfdlab::run_check(read_file(cert_path), opt);
    emit(out.report, out.message, out.exit, as_json);
    return out.exit;
  } catch (const rfdlab::ParseError& e) {
    std::cerr << e.what() << "\n";
    return rfdlab::kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return rfdlab::kExitFailure;
  }
}
