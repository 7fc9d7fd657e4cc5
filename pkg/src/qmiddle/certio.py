"""Certificate JSON: fixed key order, compact, one trailing newline.

Schema (all keys required, nothing else emitted):
  {"q", "n", "k",
   "field": {"p", "m", "n", "poly"},
   "meta": {"seed", "ell", "g", "flips"},
   "vertices": [{"dim", "points"}, ...],
   "verdict"}
poly is the top modulus over GF(q), coefficients ascending; for m > 1
the base modulus is always the canonical one for (p, m), so the field is
reconstructible from this block alone.
"""

from __future__ import annotations

import json
from pathlib import Path

from .builder import CycleCertificate
from .errors import CertificateFormatError
from .geometry import Subspace

_FIELD_KEYS = ("p", "m", "n", "poly")
_META_KEYS = ("seed", "ell", "g", "flips")


def certificate_to_dict(cert: CycleCertificate) -> dict:
    return {
        "q": cert.q,
        "n": cert.n,
        "k": cert.k,
        "field": {k: cert.field[k] for k in _FIELD_KEYS},
        "meta": {k: cert.meta[k] for k in _META_KEYS},
        "vertices": [{"dim": v.dim, "points": list(v.points)}
                     for v in cert.vertices],
        "verdict": cert.verdict,
    }


def dumps(cert: CycleCertificate) -> str:
    return json.dumps(certificate_to_dict(cert),
                      separators=(",", ":")) + "\n"


def write(cert: CycleCertificate, path: str | Path) -> None:
    Path(path).write_text(dumps(cert))


def _need(mapping, key, kinds, where):
    if not isinstance(mapping, dict) or key not in mapping:
        raise CertificateFormatError(f"missing {where}.{key}")
    val = mapping[key]
    if not isinstance(val, kinds) or isinstance(val, bool):
        raise CertificateFormatError(f"{where}.{key} has the wrong type")
    return val


def parse_dict(doc) -> CycleCertificate:
    """Validate structure and types; semantic checks live in the verifier."""
    if not isinstance(doc, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    q = _need(doc, "q", int, "certificate")
    n = _need(doc, "n", int, "certificate")
    k = _need(doc, "k", int, "certificate")
    fld = _need(doc, "field", dict, "certificate")
    p = _need(fld, "p", int, "field")
    m = _need(fld, "m", int, "field")
    fn = _need(fld, "n", int, "field")
    poly = _need(fld, "poly", list, "field")
    if not poly or not all(isinstance(c, int) and not isinstance(c, bool)
                           for c in poly):
        raise CertificateFormatError("field.poly must be a list of ints")
    meta = _need(doc, "meta", dict, "certificate")
    parsed_meta = {key: _need(meta, key, int, "meta") for key in _META_KEYS}
    verts_raw = _need(doc, "vertices", list, "certificate")
    if not verts_raw:
        raise CertificateFormatError("vertices must be non-empty")
    vertices = []
    for i, entry in enumerate(verts_raw):
        dim = _need(entry, "dim", int, f"vertices[{i}]")
        pts = _need(entry, "points", list, f"vertices[{i}]")
        if not pts or not all(isinstance(c, int) and not isinstance(c, bool)
                              for c in pts):
            raise CertificateFormatError(
                f"vertices[{i}].points must be a list of ints")
        vertices.append(Subspace(dim, tuple(pts)))
    verdict = _need(doc, "verdict", str, "certificate")
    if verdict != "HAMILTONIAN_CYCLE":
        raise CertificateFormatError(f"unsupported verdict {verdict!r}")
    if fn != n:
        raise CertificateFormatError("field.n disagrees with certificate n")
    return CycleCertificate(q=q, n=n, k=k,
                            field={"p": p, "m": m, "n": fn,
                                   "poly": list(poly)},
                            meta=parsed_meta, vertices=vertices,
                            verdict=verdict)


def loads(text: str) -> CycleCertificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"not valid JSON: {exc}") from None
    return parse_dict(doc)


def load(path: str | Path) -> CycleCertificate:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CertificateFormatError(f"cannot read {path}: {exc}") from None
    return loads(text)


def load_raw(path: str | Path) -> dict:
    """Raw JSON object from disk; structural validation happens later."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CertificateFormatError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    return doc
