"""Shift classes: canonical forms, orbit census, incidence coordinates.

The incidence formulas are cross-checked exhaustively at q = 2 and 3
against direct point-set containment, which never goes through the
cached shift table.
"""

import pytest

from qmiddle.fields import field_for_q
from qmiddle.geometry import (contains, enumerate_grassmannian,
                              gaussian_coefficient, shift, span_pair,
                              span_triple)
from qmiddle.orbits import (ClassTable, canonicalize, class_table,
                            enumerate_classes, incidence_profile,
                            lines_of_plane, orbit)


@pytest.mark.parametrize("q", [2, 3])
def test_orbits_are_free(q):
    # no line or plane is fixed by a nontrivial shift, so every orbit
    # has the full s elements
    table = field_for_q(q, 5)
    for r in (2, 3):
        for cls in enumerate_classes(table, r):
            assert cls.size == table.s
            orb = orbit(table, cls.rep)
            assert len(orb) == table.s
            assert len(set(orb)) == table.s


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_class_counts(q):
    table = field_for_q(q, 5)
    want = q * q + 1
    for r in (2, 3):
        classes = enumerate_classes(table, r)
        assert len(classes) == want
        # orbits of the reps partition the whole rank-r layer
        assert want * table.s == gaussian_coefficient(q, 5, r)
        reps = {c.rep for c in classes}
        assert len(reps) == want


@pytest.mark.parametrize("q", [2, 3])
def test_classes_cover_everything(q):
    table = field_for_q(q, 5)
    for r in (2, 3):
        classes = enumerate_classes(table, r)
        everything = set()
        for cls in classes:
            everything.update(orbit(table, cls.rep))
        assert len(everything) == gaussian_coefficient(q, 5, r)
        assert everything == set(enumerate_grassmannian(table, r))


def test_canonicalize_consistency():
    table = field_for_q(3, 5)
    s = table.s
    line = span_pair(table, 4, 17)
    rep, j = canonicalize(table, line)
    assert 0 in rep.points
    assert shift(table, rep, j) == line
    # shifting the input shifts only the offset
    for d in (1, 5, s - 1):
        rep2, j2 = canonicalize(table, shift(table, line, d))
        assert rep2 == rep
        assert j2 == (j + d) % s
    # a rep canonicalizes to itself at offset 0
    rep3, j3 = canonicalize(table, rep)
    assert rep3 == rep and j3 == 0


def test_canonicalize_point():
    table = field_for_q(2, 5)
    from qmiddle.geometry import Subspace
    pt = Subspace(1, (9,))
    rep, j = canonicalize(table, pt)
    assert rep.points == (0,) and j == 9


@pytest.mark.parametrize("q", [2, 3])
def test_lines_of_plane_complete(q):
    table = field_for_q(q, 5)
    plane = span_triple(table, 0, 1, 2)
    lines = lines_of_plane(table, plane)
    assert len(lines) == q * q + q + 1
    assert len(set(lines)) == len(lines)
    for line in lines:
        assert contains(plane, line)


@pytest.mark.parametrize("q", [2, 3])
def test_special_partner_bijection(q):
    table = field_for_q(q, 5)
    ct = class_table(table)
    partners = [ct.special_partner(cls).index for cls in ct.planes]
    assert sorted(partners) == list(range(q * q + 1))


@pytest.mark.parametrize("q", [2, 3])
def test_incidence_profile_shape(q):
    table = field_for_q(q, 5)
    ct = class_table(table)
    for cls in ct.planes:
        profile = incidence_profile(table, ct, cls.rep)
        counts = sorted(profile.values())
        assert counts == [1] * (q * q) + [q + 1]
        rich = max(profile, key=profile.get)
        assert rich == ct.special[cls.index]


@pytest.mark.parametrize("q", [2, 3])
def test_members_containing_against_brute_force(q):
    # the (class, shift) coordinate formula vs direct containment over
    # every plane class, line class, and line shift: exhaustive
    table = field_for_q(q, 5)
    s = table.s
    ct = class_table(table)
    for pcls in ct.planes:
        plane_orbit = {j: shift(table, pcls.rep, j) for j in range(s)}
        for lcls in ct.lines:
            for v in range(0, s, max(1, s // 8)):
                line = shift(table, lcls.rep, v)
                brute = sorted(j for j, pl in plane_orbit.items()
                               if contains(pl, line))
                fast = ct.plane_members_containing(pcls.index, lcls.index, v)
                assert fast == brute


@pytest.mark.parametrize("q", [2, 3])
def test_lines_inside_member_against_brute_force(q):
    table = field_for_q(q, 5)
    s = table.s
    ct = class_table(table)
    for pcls in ct.planes:
        for j in range(0, s, max(1, s // 6)):
            plane = shift(table, pcls.rep, j)
            want: dict[int, list[int]] = {}
            for line in lines_of_plane(table, plane):
                lcls, v = ct.line_class_of(line)
                want.setdefault(lcls.index, []).append(v)
            for lcls in ct.lines:
                brute = sorted(want.get(lcls.index, []))
                fast = ct.lines_inside_member(pcls.index, j, lcls.index)
                assert fast == brute


def test_dual_formulas_agree():
    # line shifted by v sits in plane member j exactly when j is listed
    # for v and v is listed for j
    table = field_for_q(3, 5)
    ct = class_table(table)
    s = table.s
    for pcls in ct.planes:
        for lcls in ct.lines:
            for v in (0, 3, s - 2):
                for j in ct.plane_members_containing(pcls.index,
                                                     lcls.index, v):
                    assert v in ct.lines_inside_member(pcls.index, j,
                                                       lcls.index)


def test_class_table_cached():
    table = field_for_q(2, 5)
    assert class_table(table) is class_table(table)
    # a distinct table object with the same parameters shares the cache
    table2 = field_for_q(2, 5)
    assert class_table(table) is class_table(table2)


def test_class_table_direct_construction():
    table = field_for_q(2, 5)
    ct = ClassTable(table)
    assert len(ct.lines) == 5 and len(ct.planes) == 5
    for shifts in ct.line_shifts:
        sizes = sorted(len(v) for v in shifts.values())
        assert sizes == [1, 1, 1, 1, 3]
