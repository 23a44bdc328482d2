"""Separation certificates from finite-dimensional representations.

Thin wrapper over the compiled extension. All inputs and outputs are the
same JSON documents the command line tool reads and writes; this layer only
converts between text and Python dictionaries.
"""

import json
from dataclasses import dataclass, field

try:
    from . import _core
except ImportError:  # development layout: extension sits next to the package
    import _core

ParseError = _core.ParseError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_BAD_INPUT = 2
EXIT_EXHAUSTED = 3

__all__ = [
    "EXIT_OK",
    "EXIT_FAILURE",
    "EXIT_BAD_INPUT",
    "EXIT_EXHAUSTED",
    "Outcome",
    "ParseError",
    "canonical_certificate",
    "canonical_instance",
    "check",
    "instance_digest",
    "separate",
    "verify",
]


@dataclass
class Outcome:
    exit_code: int
    message: str
    report: dict
    certificates: list = field(default_factory=list)

    @property
    def ok(self):
        return self.exit_code == EXIT_OK


def canonical_instance(text):
    """Canonical byte-stable serialization of an instance document."""
    return _core.canonical_instance(text)


def instance_digest(text):
    """Digest of the canonical serialization of an instance document."""
    return _core.instance_digest(text)


def canonical_certificate(cert):
    """Canonical serialization of a certificate given as a dict or text."""
    if not isinstance(cert, str):
        cert = json.dumps(cert)
    return _core.canonical_json(cert)


def verify(text, tolerance=None):
    """Run the representation axiom suite on a groupoid instance."""
    code, message, report = _core.verify(text, tolerance)
    return Outcome(code, message, json.loads(report))


def separate(text, element="", epsilon=None, tolerance=None, parallel=False,
             max_dim=4096):
    """Build certificates separating an element from the identity."""
    code, message, report, certs = _core.separate(
        text, element, epsilon, tolerance, parallel, max_dim)
    return Outcome(code, message, json.loads(report), json.loads(certs))


def check(cert, tolerance=None):
    """Re-verify a stored certificate, including a full replay.

    Accepts certificate text, a certificate dict, or a list of either.
    """
    if not isinstance(cert, str):
        cert = json.dumps(cert)
    code, message, report = _core.check(cert, tolerance)
    return Outcome(code, message, json.loads(report))
