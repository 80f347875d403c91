"""Certificate files: canonical JSON bundles that can be re-checked without searching.

A certificate has a ``body`` (everything that must reproduce exactly) and a
``run`` section (timings, budget) that is carried along but never compared.
Re-validation rebuilds the codes from their generators, re-checks every
witness, re-evaluates every bound and verdict, and returns a fresh body.
"""
from __future__ import annotations

import json

import numpy as np

from . import __version__
from .css import CssQuantumCode, all_reports, pure_optimal_check, transfer_relations_check
from .errors import VerificationError
from .families import FamilyBuild
from .locality import SKIPPED, VIOLATED, LocalityCertificate, classical_reports, require_sound
from .matcode import LinearCode, contains, dual_code, weight

SCHEMA = "qlrc-certificate/1"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def _status(reports) -> str:
    verdicts = {r["verdict"] for r in reports}
    if VIOLATED in verdicts:
        return "violated"
    return "ok"


def _quantum_body(construction: dict, Q: CssQuantumCode, r: int, checks: dict) -> dict:
    reports = [rep.to_json() for rep in all_reports(Q, r) + transfer_relations_check(Q, r)]
    verdict = pure_optimal_check(Q, r, strict=False)
    return {
        "schema": SCHEMA,
        "artifact_version": __version__,
        "kind": "quantum",
        "construction": construction,
        "field": Q.field.to_json(),
        "parameters": {"n": Q.n, "kappa": Q.kappa, "delta": Q.delta.value, "r": r, "purity": Q.purity},
        "quantum": Q.to_json(),
        "reports": reports,
        "oracle_provenance": {rep["bound"] + _label(rep): rep["oracle"] for rep in reports},
        "optimality": verdict.to_json(),
        "checks": checks,
        "status": _status(reports),
    }


def _label(rep: dict) -> str:
    code = rep["inputs"].get("code")
    return f"[{code}]" if code else ""


def build_certificate(build: FamilyBuild, run: dict | None = None) -> dict:
    construction = {"id": build.family, "params": dict(build.params)}
    return {"body": _quantum_body(construction, build.quantum, build.r, build.checks), "run": run or {}}


def quantum_certificate(Q: CssQuantumCode, r: int, run: dict | None = None, construction: dict | None = None) -> dict:
    construction = construction or {"id": "user-pair", "params": {}}
    return {"body": _quantum_body(construction, Q, r, {}), "run": run or {}}


def classical_certificate(C: LinearCode, cert: LocalityCertificate, run: dict | None = None) -> dict:
    reports = [rep.to_json() for rep in require_sound(classical_reports(C.n, C.k, C.d, cert.r, C.q))]
    body = {
        "schema": SCHEMA,
        "artifact_version": __version__,
        "kind": "classical",
        "construction": {"id": "user-code", "params": {}},
        "field": C.field.to_json(),
        "parameters": {"n": C.n, "k": C.k, "d": C.d, "r": cert.r},
        "code": C.to_json(),
        "locality_certificate": cert.to_json(verified=True),
        "reports": reports,
        "oracle_provenance": {rep["bound"]: rep["oracle"] for rep in reports},
        "status": _status(reports),
    }
    return {"body": body, "run": run or {}}


# -- re-validation -------------------------------------------------------------------------

def _check_code(obj: dict) -> LinearCode:
    C = LinearCode.from_json(obj)
    if C.generator.tolist() != obj["generator"]:
        raise VerificationError("stored generator is not in reduced echelon form")
    rec = C.distance
    if rec is None or rec.witness is None:
        raise VerificationError("code carries no distance witness")
    if weight(rec.witness) != rec.value or not contains(C, rec.witness):
        raise VerificationError("distance witness failed re-check")
    return C


def _check_delta(Q: CssQuantumCode):
    d = Q.delta
    if d.provenance != "certified":
        return
    pairs = ((Q.C2, dual_code(Q.C1)), (Q.C1, dual_code(Q.C2)))
    for (C, D), value, word in zip(pairs, d.components, d.witnesses):
        w = np.asarray(word, dtype=np.int64)
        if weight(w) != value or not contains(C, w) or contains(D, w):
            raise VerificationError("relative weight witness failed re-check")
    if d.value != min(d.components):
        raise VerificationError("stored delta is not the smaller relative weight")


def revalidate(cert: dict) -> dict:
    """Re-derive the certificate body from its own witnesses.  Raises on any mismatch."""
    body = cert["body"]
    if body.get("schema") != SCHEMA:
        raise ValueError(f"unknown certificate schema {body.get('schema')!r}")
    if body["kind"] == "classical":
        C = _check_code(body["code"])
        lc = LocalityCertificate.from_json(body["locality_certificate"])
        if not lc.verify(C):
            raise VerificationError("locality witnesses failed re-check")
        fresh = classical_certificate(C, lc)["body"]
    elif body["kind"] == "quantum":
        qobj = body["quantum"]
        _check_code(qobj["C1"])
        _check_code(qobj["C2"])
        Q = CssQuantumCode.from_json(qobj)
        _check_delta(Q)
        if Q.locality is None or not Q.locality.verify(Q.C1, Q.C2):
            raise VerificationError("quantum locality witnesses failed re-check")
        fresh = _quantum_body(body["construction"], Q, int(body["parameters"]["r"]), body.get("checks", {}))
    else:
        raise ValueError(f"unknown certificate kind {body['kind']!r}")
    fresh["artifact_version"] = body["artifact_version"]
    if canonical_json(fresh) != canonical_json(body):
        raise VerificationError("re-validated certificate differs from the stored one")
    return fresh


def skipped_reports(cert: dict) -> list[str]:
    return [r["bound"] for r in cert["body"]["reports"] if r["verdict"] == SKIPPED]


def dump(cert: dict) -> str:
    return canonical_json(cert)


def load(text: str) -> dict:
    cert = json.loads(text)
    if not isinstance(cert, dict) or "body" not in cert:
        raise ValueError("not a certificate: missing body")
    return cert
