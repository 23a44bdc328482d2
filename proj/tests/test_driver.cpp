#include "doctest.h"

#include "rfdlab/driver.hpp"

using namespace rfdlab;

namespace {

const char* kZpFixture =
    R"({"version":1,"kind":"zp","payload":{"p":2,"num":5,"powm":3},"parameters":{}})";

const char* kSemidirectFixture =
    R"({"version":1,"kind":"semidirect","payload":{"base":{"type":"cyclic","n":3},)"
    R"("acting":{"type":"cyclic","n":2},"action":[[0,1,2],[0,2,1]],)"
    R"("element":{"h":1,"g":0}},"parameters":{}})";

const char* kGroupoidFixture =
    R"({"version":1,"kind":"groupoid","payload":{"groupoid":{"type":"action",)"
    R"("group":{"type":"cyclic","n":3},"set_size":3,)"
    R"("images":[[0,1,2],[1,2,0],[2,0,1]]},)"
    R"("element":{"arrows":[0,4],"values":[[1,0],[0.5,0.25]]}},"parameters":{}})";

const char* kCrossedFixture =
    R"({"version":1,"kind":"crossed","payload":{"algebra":{"blocks":[2]},)"
    R"("group":{"type":"cyclic","n":2},"automorphisms":[)"
    R"({"sigma":[0],"unitaries":[[[1,0],[0,0],[0,0],[1,0]]]},)"
    R"({"sigma":[0],"unitaries":[[[0,0],[1,0],[1,0],[0,0]]]}],)"
    R"("element":{"terms":[{"g":1,"blocks":[[[0,0],[1,0],[0,0],[0,0]]]}]}},)"
    R"("parameters":{}})";

const char* kZCrossedFixture =
    R"({"version":1,"kind":"crossed","payload":{"algebra":{"blocks":[1,1,1]},)"
    R"("group":{"type":"integers"},"generator":{"sigma":[1,2,0],)"
    R"("unitaries":[[[1,0]],[[1,0]],[[1,0]]]},)"
    R"("element":{"terms":[{"g":1,"blocks":[[[1,0]],[[0,0]],[[0,0]]]}]}},)"
    R"("parameters":{}})";

const char* kWreathFiniteFixture =
    R"({"version":1,"kind":"wreath","payload":{"base":{"type":"cyclic","n":2},)"
    R"("acting":{"type":"cyclic","n":2},)"
    R"("element":{"config":[{"pos":0,"val":1}],"g":0}},"parameters":{}})";

const char* kWreathZFixture =
    R"({"version":1,"kind":"wreath","payload":{"base":{"type":"cyclic","n":2},)"
    R"("acting":{"type":"integers"},)"
    R"("element":{"config":[{"pos":0,"val":1},{"pos":2,"val":1}],"g":0}},)"
    R"("parameters":{}})";

const char* kSlnpFixture =
    R"({"version":1,"kind":"slnp","payload":{"p":2,"n":2,"entries":[)"
    R"({"num":1,"powm":0},{"num":1,"powm":1},{"num":0,"powm":0},)"
    R"({"num":1,"powm":0}]},"parameters":{}})";

const char* kShiftFixture =
    R"({"version":1,"kind":"shift","payload":{"alphabet":2,"pattern":[1,0,1]},)"
    R"("parameters":{}})";

std::string certs_array_text(const std::vector<SeparationCertificate>& cs) {
  Json arr = Json::array();
  for (const auto& c : cs) arr.push_back(certificate_json(c));
  return canonical_dump(arr);
}

/// Separates and round-trips through the checker; both must succeed.
SeparationCertificate separate_and_check(const char* fixture) {
  const InstanceSpec spec = parse_instance(fixture);
  DriverOptions opt;
  const SeparateOutcome sep = run_separate(spec, opt);
  REQUIRE(sep.exit == kExitOk);
  REQUIRE(sep.certificates.size() == 1);
  const CheckOutcome chk = run_check(canonical_certificate(sep.certificates[0]), opt);
  INFO(chk.message);
  REQUIRE(chk.exit == kExitOk);
  return sep.certificates[0];
}

}  // namespace

TEST_CASE("driver rejects non-groupoid verify input") {
  DriverOptions opt;
  const VerifyOutcome v = run_verify(parse_instance(kZpFixture), opt);
  CHECK(v.exit == kExitBadInput);
}

TEST_CASE("driver verify accepts a genuine representation and flags a tampered one") {
  DriverOptions opt;
  const InstanceSpec spec = parse_instance(kGroupoidFixture);
  const SeparateOutcome sep = run_separate(spec, opt);
  REQUIRE(sep.exit == kExitOk);
  const SeparationCertificate& c = sep.certificates[0];

  Json inst = c.instance;
  inst["payload"]["representation"] = Json::object();
  inst["payload"]["representation"]["dim"] = c.witness["dim"];
  inst["payload"]["representation"]["mats"] = c.witness["mats"];
  const std::string with_rep = canonical_dump(inst);

  const VerifyOutcome good = run_verify(parse_instance(with_rep), opt);
  CHECK(good.exit == kExitOk);
  CHECK(good.max_violation <= 1e-9);
  CHECK(good.report["ok"].get<bool>());

  Json bad = Json::parse(with_rep);
  double re = bad["payload"]["representation"]["mats"][1][0][0].get<double>();
  bad["payload"]["representation"]["mats"][1][0][0] = re + 1e-3;
  const VerifyOutcome flagged = run_verify(parse_instance(canonical_dump(bad)), opt);
  CHECK(flagged.exit == kExitFailure);
  CHECK(flagged.max_violation > 1e-6);

  const VerifyOutcome norep = run_verify(spec, opt);
  CHECK(norep.exit == kExitBadInput);
}

TEST_CASE("zp separation matches the modular arithmetic done by hand") {
  const SeparationCertificate c = separate_and_check(kZpFixture);
  CHECK(c.construction == "zp-residue");
  // 5/8 mod 3: 8 inverts to 2, so the residue is 5 * 2 = 10 = 1 mod 3.
  CHECK(c.witness["q"].get<std::int64_t>() == 3);
  CHECK(c.witness["residue"].get<std::int64_t>() == 1);
  CHECK(c.finite_image);
  CHECK(c.image_order == 3);
}

TEST_CASE("zp element selector overrides the embedded value") {
  const InstanceSpec spec = parse_instance(kZpFixture);
  DriverOptions opt;
  opt.element_selector = "7/4";
  const SeparateOutcome sep = run_separate(spec, opt);
  REQUIRE(sep.exit == kExitOk);
  const Json& inst = sep.certificates[0].instance;
  CHECK(inst["payload"]["num"].get<std::int64_t>() == 7);
  CHECK(inst["payload"]["powm"].get<int>() == 2);
  // 7/4 mod 3: 4 is 1, so the residue is 7 mod 3 = 1.
  CHECK(sep.certificates[0].witness["q"].get<std::int64_t>() == 3);
  CHECK(sep.certificates[0].witness["residue"].get<std::int64_t>() == 1);

  opt.element_selector = "0";
  CHECK(run_separate(spec, opt).exit == kExitFailure);

  opt.element_selector = "1/6";
  CHECK(run_separate(spec, opt).exit == kExitBadInput);
}

TEST_CASE("semidirect separation certifies the expected lower bound") {
  const SeparationCertificate c = separate_and_check(kSemidirectFixture);
  CHECK(c.construction == "semidirect-induced");
  // The best block orbit averages |w - 1|^2 = 3 over the two nontrivial
  // characters of the rotation subgroup.
  CHECK(c.quantities["lower"].get<double>() == doctest::Approx(3.0));
  CHECK(c.quantities["witness_norm"].get<double>() > 1e-9);
  const double trace = c.quantities["trace"][0].get<double>();
  const double bound = c.quantities["certified_bound"].get<double>();
  CHECK(std::abs(trace - 3.0) <= bound + 1e-9);
}

TEST_CASE("semidirect all-elements sweep certifies every nonidentity pair") {
  const InstanceSpec spec = parse_instance(kSemidirectFixture);
  DriverOptions opt;
  opt.element_selector = "all";
  const SeparateOutcome sep = run_separate(spec, opt);
  REQUIRE(sep.exit == kExitOk);
  CHECK(sep.certificates.size() == 5);
  for (const auto& c : sep.certificates)
    CHECK(c.quantities["lower"].get<double>() > 0.0);
  const CheckOutcome chk = run_check(certs_array_text(sep.certificates), opt);
  INFO(chk.message);
  CHECK(chk.exit == kExitOk);
  CHECK(chk.report["count"].get<int>() == 5);

  opt.element_selector = "1,0";
  const SeparateOutcome one = run_separate(spec, opt);
  REQUIRE(one.exit == kExitOk);
  CHECK(one.certificates[0].element["h"].get<int>() == 1);

  opt.element_selector = "0,0";
  CHECK(run_separate(spec, opt).exit == kExitFailure);
  opt.element_selector = "9,0";
  CHECK(run_separate(spec, opt).exit == kExitBadInput);
}

TEST_CASE("crossed separation round-trips for finite and integer actions") {
  const SeparationCertificate fin = separate_and_check(kCrossedFixture);
  CHECK(fin.construction == "crossed-induced");
  // Phi(b* b) is a rank-one projection in the single 2x2 block.
  CHECK(fin.quantities["lower"].get<double>() == doctest::Approx(0.5));

  const SeparationCertificate z = separate_and_check(kZCrossedFixture);
  CHECK(z.construction == "crossed-induced");
  CHECK(z.quantities["lower"].get<double>() > 0.0);
  CHECK(z.finite_image);
}

TEST_CASE("groupoid separation emits a checkable amplified certificate") {
  const SeparationCertificate c = separate_and_check(kGroupoidFixture);
  CHECK(c.construction == "groupoid-trace-amplification");
  CHECK(c.quantities["lower"].get<double>() > 0.0);
  CHECK(c.quantities["witness_norm"].get<double>() > 1e-9);
  CHECK_FALSE(c.finite_image);

  const InstanceSpec spec = parse_instance(kGroupoidFixture);
  DriverOptions opt;
  opt.element_selector = "arrow:2";
  const SeparateOutcome sep = run_separate(spec, opt);
  REQUIRE(sep.exit == kExitOk);
  CHECK(sep.certificates[0].element["arrows"][0].get<int>() == 2);

  opt.element_selector = "arrow:99";
  CHECK(run_separate(spec, opt).exit == kExitBadInput);
}

TEST_CASE("wreath separation picks the induced or character route by the action") {
  const SeparationCertificate fin = separate_and_check(kWreathFiniteFixture);
  CHECK(fin.construction == "semidirect-induced");
  CHECK(fin.instance_kind == "wreath");
  CHECK(fin.element["config"][0]["pos"].get<int>() == 0);

  const SeparationCertificate z = separate_and_check(kWreathZFixture);
  CHECK(z.construction == "wreath-character");
  CHECK(z.finite_image);
  CHECK(z.image_order == z.witness["modulus"].get<std::int64_t>());
  CHECK(z.image_order >= 2);

  // A nonzero acting coordinate is out of scope for the character route.
  Json shifted = Json::parse(kWreathZFixture);
  shifted["payload"]["element"]["g"] = 1;
  DriverOptions opt;
  CHECK(run_separate(parse_instance(canonical_dump(shifted)), opt).exit ==
        kExitFailure);
}

TEST_CASE("wreath all-elements sweep covers the full finite product") {
  const InstanceSpec spec = parse_instance(kWreathFiniteFixture);
  DriverOptions opt;
  opt.element_selector = "all";
  const SeparateOutcome sep = run_separate(spec, opt);
  REQUIRE(sep.exit == kExitOk);
  // |C2 wr C2| = 8, minus the identity.
  CHECK(sep.certificates.size() == 7);
  const CheckOutcome chk = run_check(certs_array_text(sep.certificates), opt);
  INFO(chk.message);
  CHECK(chk.exit == kExitOk);
}

TEST_CASE("slnp and shift instances certify through their exact routes") {
  const SeparationCertificate sl = separate_and_check(kSlnpFixture);
  CHECK(sl.construction == "slnp-residue");
  CHECK(sl.witness["q"].get<std::int64_t>() >= 3);
  CHECK(sl.finite_image);

  const SeparationCertificate sh = separate_and_check(kShiftFixture);
  CHECK(sh.construction == "shift-periodic");
  CHECK(sh.witness["period"].get<int>() == 3);
  CHECK(sh.image_order == 3);
}

TEST_CASE("checker flags perturbed certificates and digest mismatches") {
  const InstanceSpec spec = parse_instance(kSemidirectFixture);
  DriverOptions opt;
  const SeparateOutcome sep = run_separate(spec, opt);
  REQUIRE(sep.exit == kExitOk);
  const std::string text = canonical_certificate(sep.certificates[0]);

  Json bumped = Json::parse(text);
  double re = bumped["witness"]["value"][0][0].get<double>();
  bumped["witness"]["value"][0][0] = re + 1e-3;
  CHECK(run_check(canonical_dump(bumped), opt).exit == kExitFailure);

  Json lowered = Json::parse(text);
  lowered["quantities"]["lower"] =
      lowered["quantities"]["lower"].get<double>() - 1e-3;
  CHECK(run_check(canonical_dump(lowered), opt).exit == kExitFailure);

  Json wrong_digest = Json::parse(text);
  wrong_digest["digest"] = "0000000000000000";
  CHECK(run_check(canonical_dump(wrong_digest), opt).exit == kExitFailure);

  Json wrong_instance = Json::parse(text);
  wrong_instance["instance"]["payload"]["element"]["h"] = 2;
  CHECK(run_check(canonical_dump(wrong_instance), opt).exit == kExitFailure);

  CHECK(run_check("not json", opt).exit == kExitBadInput);
  CHECK(run_check("[]", opt).exit == kExitBadInput);
}

TEST_CASE("certificates survive a canonical serialization round trip") {
  const InstanceSpec spec = parse_instance(kCrossedFixture);
  DriverOptions opt;
  const SeparateOutcome sep = run_separate(spec, opt);
  REQUIRE(sep.exit == kExitOk);
  const std::string text = canonical_certificate(sep.certificates[0]);
  const SeparationCertificate back = parse_certificate(text);
  CHECK(canonical_certificate(back) == text);
  CHECK(back.digest == sep.certificates[0].digest);
}

TEST_CASE("parallel fan-out matches the sequential sweep") {
  const InstanceSpec spec = parse_instance(kSemidirectFixture);
  DriverOptions seq;
  seq.element_selector = "all";
  DriverOptions par = seq;
  par.parallel = true;
  const SeparateOutcome a = run_separate(spec, seq);
  const SeparateOutcome b = run_separate(spec, par);
  REQUIRE(a.exit == kExitOk);
  REQUIRE(b.exit == kExitOk);
  REQUIRE(a.certificates.size() == b.certificates.size());
  for (size_t i = 0; i < a.certificates.size(); ++i)
    CHECK(canonical_certificate(a.certificates[i]) ==
          canonical_certificate(b.certificates[i]));
}
