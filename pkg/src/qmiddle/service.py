"""HTTP face of the package plus the handler layer the CLI shares.

Field and class tables are expensive and immutable, so a process-level
cache makes repeated build/verify calls cheap; the handlers below own
that cache and both the FastAPI endpoints and the CLI go through them.
"""

from __future__ import annotations

import threading
import time

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import certio
from .builder import build_cycle_k1, build_cycle_k2
from .errors import (CertificateFormatError, ConstructionError,
                     InvariantViolation, UsageError)
from .fields import FieldTable, build_field, prime_power
from .geometry import gaussian_coefficient
from .orbits import class_table
from .verifier import run_property_suite, verify_certificate

_lock = threading.Lock()
_fields: dict[tuple, FieldTable] = {}


def _table(q: int, n: int, poly: list[int] | None = None) -> FieldTable:
    p, m = prime_power(q)
    key = (p, m, n, tuple(poly) if poly else None)
    with _lock:
        if key not in _fields:
            _fields[key] = build_field(p, m, n, override_poly=poly)
        return _fields[key]


# --------------------------------------------------------- handlers

def handle_build(q: int, k: int = 2, seed: int = 0, ell: int | None = None,
                 poly: list[int] | None = None, require_g1: bool = False,
                 retry_cap: int = 64) -> tuple[dict, dict]:
    """Build a cycle; returns (certificate dict, summary dict).

    require_g1 retries seeds seed, seed+1, ... (up to retry_cap) until
    the forced shift is coprime to s; the winning seed is the one
    recorded, so rebuilding from it reproduces the bytes.
    """
    if k not in (1, 2):
        raise UsageError(f"k must be 1 or 2, got {k}")
    t0 = time.monotonic()
    if k == 1:
        if ell is None:
            raise UsageError("k = 1 requires a step size ell")
        table = _table(q, 3, poly)
        cert = build_cycle_k1(table, ell)
    else:
        if ell is not None:
            raise UsageError("a step size ell applies to k = 1 only")
        table = _table(q, 5, poly)
        if require_g1:
            cert = None
            for attempt in range(retry_cap):
                cand = build_cycle_k2(table, seed + attempt)
                if cand.meta["g"] == 1:
                    cert = cand
                    break
            if cert is None:
                raise ConstructionError(
                    f"no seed in {seed}..{seed + retry_cap - 1} gave g = 1")
        else:
            cert = build_cycle_k2(table, seed)
    elapsed = time.monotonic() - t0
    summary = {"q": q, "k": k, "vertices": len(cert.vertices),
               "seed": cert.meta["seed"], "ell": cert.meta["ell"],
               "g": cert.meta["g"], "flips": cert.meta["flips"],
               "elapsed_s": round(elapsed, 3)}
    return certio.certificate_to_dict(cert), summary


def handle_verify(doc: dict) -> dict:
    cert = certio.parse_dict(doc)
    report = verify_certificate(cert)
    out = {"verdict": report.verdict, "vertices": report.vertices}
    if report.violation is not None:
        out["violation"] = {"check": report.violation.check,
                            "index": report.violation.index,
                            "detail": report.violation.detail}
    return out


def handle_props(q: int, mode: str = "auto") -> dict:
    report = run_property_suite(q, mode=mode)
    return {"q": report.q, "mode": report.mode, "passed": report.passed,
            "checks": [{"name": c.name, "passed": c.passed,
                        "witness": c.witness} for c in report.checks]}


def handle_stats(q: int) -> dict:
    table = _table(q, 5)
    ct = class_table(table)
    partners = [{"plane_class": cls.index,
                 "plane_rep": list(cls.rep.points),
                 "line_class": ct.special[cls.index],
                 "line_rep": list(ct.lines[ct.special[cls.index]].rep.points)}
                for cls in ct.planes]
    return {
        "q": q, "p": table.p, "m": table.m, "n": 5,
        "poly": list(table.modulus_poly),
        "s": table.s,
        "line_classes": len(ct.lines),
        "plane_classes": len(ct.planes),
        "grassmannian": {"points": gaussian_coefficient(q, 5, 1),
                         "lines": gaussian_coefficient(q, 5, 2),
                         "planes": gaussian_coefficient(q, 5, 3)},
        "cycle_vertices": 2 * gaussian_coefficient(q, 5, 2),
        "special_partners": partners,
    }


# --------------------------------------------------------- endpoints

class BuildRequest(BaseModel):
    q: int
    k: int = 2
    seed: int = 0
    ell: int | None = None
    poly: list[int] | None = None
    require_g1: bool = False
    retry_cap: int = Field(default=64, ge=1, le=4096)


class BuildSummary(BaseModel):
    q: int
    k: int
    vertices: int
    seed: int
    ell: int
    g: int
    flips: int
    elapsed_s: float


class BuildResponse(BaseModel):
    summary: BuildSummary
    certificate: dict


class VerifyRequest(BaseModel):
    certificate: dict


class ViolationModel(BaseModel):
    check: str
    index: int | None
    detail: str


class VerifyResponse(BaseModel):
    verdict: str
    vertices: int
    violation: ViolationModel | None = None


class PropsRequest(BaseModel):
    q: int
    mode: str = "auto"


class PropCheck(BaseModel):
    name: str
    passed: bool
    witness: str | None


class PropsResponse(BaseModel):
    q: int
    mode: str
    passed: bool
    checks: list[PropCheck]


app = FastAPI(title="qmiddle",
              description="Middle-levels subspace cycles as a service")


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/build", response_model=BuildResponse)
def build(req: BuildRequest) -> BuildResponse:
    try:
        cert, summary = handle_build(req.q, req.k, req.seed, req.ell,
                                     req.poly, req.require_g1, req.retry_cap)
    except UsageError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except (ConstructionError, InvariantViolation) as exc:
        raise HTTPException(status_code=500, detail=str(exc))
    return BuildResponse(summary=BuildSummary(**summary), certificate=cert)


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    try:
        out = handle_verify(req.certificate)
    except CertificateFormatError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return VerifyResponse(**out)


@app.post("/props", response_model=PropsResponse)
def props(req: PropsRequest) -> PropsResponse:
    try:
        out = handle_props(req.q, req.mode)
    except UsageError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return PropsResponse(**out)


@app.get("/stats")
def stats(q: int) -> dict:
    try:
        return handle_stats(q)
    except UsageError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
