"""Shift orbits of lines and planes in F_q^5.

Two subspaces are equivalent when one is an alpha^j multiple of the
other.  For n = 5 every line orbit and every plane orbit has exactly s
members and there are q^2+1 orbits of each kind; each plane touches one
line class q+1 times and every other exactly once.  That incidence data,
tabulated rep-relative, is what the path builder consumes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvariantViolation, UsageError
from .fields import FieldTable
from .geometry import DEPENDENT, Subspace, shift, span_pair, span_triple


@dataclass(frozen=True)
class ShiftClass:
    r: int              # 2 for lines, 3 for planes
    index: int          # position in discovery order
    rep: Subspace       # canonical representative (lex-least shift)
    size: int           # orbit size, always s here


def canonicalize(table: FieldTable, x: Subspace) -> tuple[Subspace, int]:
    """Canonical orbit representative and the shift j with x = rep + j.

    The representative is the shift whose sorted point tuple is lex
    smallest; it always starts at residue 0.  Found by rotating the gap
    sequence of the point set, so the cost is |points|^2, not s.
    """
    s = table.s
    pts = x.points
    k = len(pts)
    if k == 1:
        return Subspace(x.dim, (0,)), pts[0]
    gaps = [(pts[(i + 1) % k] - pts[i]) % s for i in range(k)]
    best = None
    best_j = None
    for i in range(k):
        acc = 0
        cand = [0]
        for t in range(k - 1):
            acc += gaps[(i + t) % k]
            cand.append(acc)
        cand_t = tuple(cand)
        if best is None or cand_t < best or (cand_t == best
                                             and pts[i] < best_j):
            best = cand_t
            best_j = pts[i]
    return Subspace(x.dim, best), best_j


def orbit(table: FieldTable, x: Subspace) -> list[Subspace]:
    """All s shifts of x; raises if any two coincide."""
    out = [shift(table, x, j) for j in range(table.s)]
    if len({m.points for m in out}) != table.s:
        raise InvariantViolation(f"orbit of {x.points} is degenerate")
    return out


def enumerate_classes(table: FieldTable, r: int) -> list[ShiftClass]:
    """The shift classes of r-dim subspaces, r in {2, 3}, for n = 5.

    Every line class has a member through residue 0, and every plane
    class has a member spanned by a residue progression 0, i, 2i, so a
    single sweep of i covers everything.  The q^2+1 count is checked.
    """
    if table.n != 5:
        raise UsageError("class enumeration is for n = 5")
    if r not in (2, 3):
        raise UsageError(f"classes exist for r in {{2,3}}, got {r}")
    s = table.s
    seen: dict[tuple[int, ...], ShiftClass] = {}
    classes: list[ShiftClass] = []
    for i in range(1, s):
        if r == 2:
            sub = span_pair(table, 0, i)
        else:
            sub = span_triple(table, 0, i, (2 * i) % s)
            if sub is DEPENDENT:
                raise InvariantViolation(
                    f"residues 0,{i},{2 * i % s} are dependent")
        rep, _ = canonicalize(table, sub)
        if rep.points not in seen:
            cls = ShiftClass(r, len(classes), rep, s)
            seen[rep.points] = cls
            classes.append(cls)
    expected = table.q ** 2 + 1
    if len(classes) != expected:
        raise InvariantViolation(
            f"found {len(classes)} classes of dim {r}, expected {expected}")
    return classes


def lines_of_plane(table: FieldTable, plane: Subspace) -> list[Subspace]:
    """Every line inside the plane, each exactly once."""
    seen = set()
    out = []
    for a, b in itertools.combinations(plane.points, 2):
        line = span_pair(table, a, b)
        if line.points not in seen:
            seen.add(line.points)
            out.append(line)
    q = table.q
    if len(out) != q * q + q + 1:
        raise InvariantViolation(
            f"plane {plane.points} carries {len(out)} lines")
    return out


class ClassTable:
    """Both class lists plus the plane/line incidence used by the builder.

    line_shifts[pi][li] lists the shifts t with line_rep(li) + t inside
    plane_rep(pi); exactly one li has q+1 entries (the plane class's
    special partner) and the rest have one.  Construction fails loudly if
    that shape, or the bijectivity of the partner map, does not hold.
    """

    def __init__(self, table: FieldTable):
        self.table = table
        q = table.q
        self.lines = enumerate_classes(table, 2)
        self.planes = enumerate_classes(table, 3)
        self._line_by_rep = {c.rep.points: c for c in self.lines}
        self._plane_by_rep = {c.rep.points: c for c in self.planes}
        self.line_shifts: list[dict[int, tuple[int, ...]]] = []
        self.special: list[int] = []
        for cls in self.planes:
            found: dict[int, list[int]] = {}
            for line in lines_of_plane(table, cls.rep):
                rep, t = canonicalize(table, line)
                li = self._line_by_rep[rep.points].index
                found.setdefault(li, []).append(t)
            rich = [li for li, ts in found.items() if len(ts) == q + 1]
            lean = [li for li, ts in found.items() if len(ts) == 1]
            if len(rich) != 1 or len(lean) != q * q or \
                    len(rich) + len(lean) != len(found):
                raise InvariantViolation(
                    f"plane class {cls.index} has profile "
                    f"{sorted((li, len(ts)) for li, ts in found.items())}")
            self.line_shifts.append(
                {li: tuple(sorted(ts)) for li, ts in found.items()})
            self.special.append(rich[0])
        if len(set(self.special)) != len(self.planes):
            raise InvariantViolation("special partner map is not a bijection")

    def line_class_of(self, sub: Subspace) -> tuple[ShiftClass, int]:
        rep, j = canonicalize(self.table, sub)
        cls = self._line_by_rep.get(rep.points)
        if cls is None:
            raise InvariantViolation(f"no line class for {sub.points}")
        return cls, j

    def plane_class_of(self, sub: Subspace) -> tuple[ShiftClass, int]:
        rep, j = canonicalize(self.table, sub)
        cls = self._plane_by_rep.get(rep.points)
        if cls is None:
            raise InvariantViolation(f"no plane class for {sub.points}")
        return cls, j

    def special_partner(self, plane_cls: ShiftClass) -> ShiftClass:
        """The one line class met q+1 times by planes of this class."""
        return self.lines[self.special[plane_cls.index]]

    def plane_members_containing(self, plane_index: int, line_index: int,
                                 line_shift: int) -> list[int]:
        """Shifts j with line_rep + line_shift inside plane_rep + j."""
        s = self.table.s
        ts = self.line_shifts[plane_index].get(line_index, ())
        return sorted((line_shift - t) % s for t in ts)

    def lines_inside_member(self, plane_index: int, member_shift: int,
                            line_index: int) -> list[int]:
        """Shifts v with line_rep + v inside plane_rep + member_shift."""
        s = self.table.s
        ts = self.line_shifts[plane_index].get(line_index, ())
        return sorted((t + member_shift) % s for t in ts)


def incidence_profile(table: FieldTable, classes: ClassTable,
                      plane: Subspace) -> dict[int, int]:
    """line class index -> how many lines of the plane fall in it.

    Computed from the plane itself, not from the cached decomposition,
    so it can serve as a cross-check of ClassTable.
    """
    profile: dict[int, int] = {}
    for line in lines_of_plane(table, plane):
        cls, _ = classes.line_class_of(line)
        profile[cls.index] = profile.get(cls.index, 0) + 1
    return profile


_class_cache: dict[tuple, ClassTable] = {}


def class_table(table: FieldTable) -> ClassTable:
    """Cached ClassTable per field (the decomposition is the slow part)."""
    key = (table.p, table.m, table.n, tuple(table.modulus_poly))
    if key not in _class_cache:
        _class_cache[key] = ClassTable(table)
    return _class_cache[key]
