import json
import os
import pathlib

import pytest

import rfdlab

FIXTURES = pathlib.Path(os.environ["RFDLAB_FIXTURES"])


def read(name):
    return (FIXTURES / name).read_text()


def test_digest_is_stable_under_canonicalization():
    text = read("zp-five-eighths.json")
    digest = rfdlab.instance_digest(text)
    assert len(digest) == 16
    assert digest == rfdlab.instance_digest(rfdlab.canonical_instance(text))


def test_zp_separation_round_trip():
    out = rfdlab.separate(read("zp-five-eighths.json"))
    assert out.ok
    (cert,) = out.certificates
    assert cert["witness"]["q"] == 3
    assert cert["witness"]["residue"] == 1
    assert rfdlab.check(cert).ok


def test_semidirect_sweep_and_array_check():
    out = rfdlab.separate(read("s3-rotation.json"), element="all")
    assert out.ok
    assert len(out.certificates) == 5
    chk = rfdlab.check(out.certificates)
    assert chk.ok
    assert chk.report["count"] == 5


def test_verify_accepts_representation_and_rejects_other_kinds():
    ok = rfdlab.verify(read("z3-with-rep.json"))
    assert ok.ok
    assert ok.report["max_violation"] < 1e-9
    assert rfdlab.verify(read("zp-five-eighths.json")).exit_code == rfdlab.EXIT_BAD_INPUT


def test_identity_is_never_separable():
    out = rfdlab.separate(read("identity-element.json"))
    assert out.exit_code == rfdlab.EXIT_FAILURE


def test_tampered_certificate_is_rejected():
    out = rfdlab.separate(read("m2-inner-crossed.json"))
    assert out.ok
    cert = out.certificates[0]
    cert["quantities"]["lower"] += 1e-3
    assert rfdlab.check(cert).exit_code == rfdlab.EXIT_FAILURE


def test_canonical_certificate_round_trips():
    out = rfdlab.separate(read("golden-mean-word.json"))
    assert out.ok
    text = rfdlab.canonical_certificate(out.certificates[0])
    assert rfdlab.canonical_certificate(json.loads(text)) == text


def test_parse_error_surfaces_as_value_error():
    with pytest.raises(ValueError):
        rfdlab.canonical_instance("{}")
