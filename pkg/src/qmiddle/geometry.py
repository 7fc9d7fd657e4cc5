"""Points, lines, and planes of F_q^n in the residue encoding.

A 1-dim subspace is a residue mod s = (q^n-1)/(q-1): scaling a vector by
GF(q)* moves its exponent by a multiple of s, so exponents mod s and
projective points coincide.  A subspace is carried as its sorted point
set; adding j to every residue multiplies the subspace by alpha^j.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateSpanError, InvariantViolation, UsageError
from .fields import ZERO, FieldTable, log_sum


class _Dependent:
    __slots__ = ()

    def __repr__(self):
        return "DEPENDENT"


#: Returned by span_triple when the third point lies on the first two's line.
DEPENDENT = _Dependent()


@dataclass(frozen=True)
class Subspace:
    dim: int
    points: tuple[int, ...]  # residues mod s, strictly ascending


def gaussian_coefficient(q: int, n: int, r: int) -> int:
    """Number of r-dim subspaces of F_q^n (exact integer arithmetic)."""
    if r < 0 or r > n:
        raise UsageError(f"r={r} out of range for n={n}")
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    if num % den:
        raise InvariantViolation("gaussian coefficient not integral")
    return num // den


def num_points(q: int, dim: int) -> int:
    return (q ** dim - 1) // (q - 1)


def span_pair(table: FieldTable, a: int, b: int) -> Subspace:
    """Line through the points alpha^a and alpha^b.

    Any exponent representatives work: the resulting point set only
    depends on a mod s and b mod s.
    """
    s = table.s
    ra, rb = a % s, b % s
    if ra == rb:
        raise DegenerateSpanError(f"span_pair needs distinct points, got "
                                  f"{ra} twice")
    pts = {ra, rb}
    for j in range(table.q - 1):
        r = log_sum(table, a, b + j * s)
        if r is ZERO:
            raise InvariantViolation("distinct points produced a zero sum")
        pts.add(r % s)
    if len(pts) != table.q + 1:
        raise InvariantViolation(
            f"line through {ra},{rb} has {len(pts)} points")
    return Subspace(2, tuple(sorted(pts)))


def span_triple(table: FieldTable, a: int, b: int, c: int):
    """Plane through alpha^a, alpha^b, alpha^c; DEPENDENT if c is on their line."""
    s = table.s
    ra, rb, rc = a % s, b % s, c % s
    if len({ra, rb, rc}) < 3:
        raise DegenerateSpanError(
            f"span_triple needs three distinct points, got {ra},{rb},{rc}")
    line = span_pair(table, a, b)
    if rc in line.points:
        return DEPENDENT
    pts = set(line.points)
    pts.add(rc)
    for mpt in line.points:
        for j in range(table.q - 1):
            r = log_sum(table, mpt, c + j * s)
            if r is ZERO:
                raise InvariantViolation("off-line point produced a zero sum")
            pts.add(r % s)
    if len(pts) != table.q ** 2 + table.q + 1:
        raise InvariantViolation(
            f"plane through {ra},{rb},{rc} has {len(pts)} points")
    return Subspace(3, tuple(sorted(pts)))


def contains(u: Subspace, v: Subspace) -> bool:
    """Point-set containment (v inside u)."""
    return set(v.points) <= set(u.points)


def shift(table: FieldTable, x: Subspace, j: int) -> Subspace:
    """Multiply the subspace by alpha^j: add j to every residue mod s."""
    s = table.s
    return Subspace(x.dim, tuple(sorted((pt + j) % s for pt in x.points)))


def enumerate_grassmannian(table: FieldTable, r: int):
    """Yield every r-dim subspace once, by spanning sweep with dedup.

    Intentionally the slow-but-obvious route; the verifier has its own
    row-echelon enumeration so the two can be compared.
    """
    s = table.s
    if r == 1:
        for i in range(s):
            yield Subspace(1, (i,))
        return
    if r == 2:
        seen = set()
        for a in range(s):
            for b in range(a + 1, s):
                line = span_pair(table, a, b)
                if line.points not in seen:
                    seen.add(line.points)
                    yield line
        return
    if r == 3:
        if table.n < 4:
            raise UsageError("3-dim sweep needs ambient dimension >= 4")
        seen = set()
        lines = list(enumerate_grassmannian(table, 2))
        for line in lines:
            a, b = line.points[0], line.points[1]
            inside = set(line.points)
            for c in range(s):
                if c in inside:
                    continue
                plane = span_triple(table, a, b, c)
                if plane is DEPENDENT:
                    raise InvariantViolation("sweep point was on the line")
                if plane.points not in seen:
                    seen.add(plane.points)
                    yield plane
        return
    raise UsageError(f"enumeration supports r in 1..3, got {r}")
