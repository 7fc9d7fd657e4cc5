"""Verifier tests: the rank oracle, certificate checking, the suite.

The rank oracle and the echelon enumeration get compared against the
span-based layer they are meant to double-check; certificate tests
corrupt real builds one defect at a time and pin down which check
catches each defect.
"""

import json
import pathlib

import pytest

from qmiddle import certio
from qmiddle.builder import build_cycle_k1, build_cycle_k2
from qmiddle.errors import CertificateFormatError, UsageError
from qmiddle.fields import build_field, field_for_q
from qmiddle.geometry import (Subspace, contains, enumerate_grassmannian,
                              span_pair)
from qmiddle.orbits import lines_of_plane
from qmiddle.verifier import (SAMPLE_SEED, combo_points, echelon_oracle,
                              echelon_rank, rref_point_sets,
                              run_property_suite, verify_certificate)

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


# ------------------------------------------------ rank oracle

def test_echelon_rank_hand_cases():
    gf2 = build_field(2, 1, 5).base
    assert echelon_rank([], gf2) == 0
    assert echelon_rank([(0, 0, 0, 0, 0)], gf2) == 0
    assert echelon_rank([(1, 0, 0, 0, 0)], gf2) == 1
    assert echelon_rank([(1, 0, 0, 0, 0), (1, 0, 0, 0, 0)], gf2) == 1
    assert echelon_rank([(1, 1, 0, 0, 0), (0, 1, 1, 0, 0),
                         (1, 0, 1, 0, 0)], gf2) == 2
    assert echelon_rank([(1, 0, 0, 0, 0), (0, 1, 0, 0, 0),
                         (0, 0, 1, 0, 0)], gf2) == 3
    gf3 = build_field(3, 1, 5).base
    assert echelon_rank([(1, 2, 0, 0, 0), (0, 1, 1, 0, 0)], gf3) == 2
    # (2,1,...) = 2 * (1,2,...) over GF(3): dependent
    assert echelon_rank([(1, 2, 0, 0, 0), (2, 1, 0, 0, 0)], gf3) == 1


@pytest.mark.parametrize("q,r", [(2, 1), (2, 2), (2, 3),
                                 (3, 1), (3, 2), (3, 3)])
def test_rank_oracle_agrees_with_spans(q, r):
    # every subspace the span layer can produce has echelon rank equal
    # to its dimension: zero mismatches allowed
    table = field_for_q(q, 5)
    mismatches = 0
    for sub in enumerate_grassmannian(table, r):
        if echelon_oracle(sub.points, table) != sub.dim:
            mismatches += 1
    assert mismatches == 0


@pytest.mark.parametrize("q,r", [(2, 1), (2, 2), (2, 3),
                                 (3, 1), (3, 2), (3, 3)])
def test_echelon_enumeration_matches_span_enumeration(q, r):
    # two fully independent listings of the same layer
    table = field_for_q(q, 5)
    from_spans = {frozenset(sub.points)
                  for sub in enumerate_grassmannian(table, r)}
    from_echelon = set(rref_point_sets(table, r))
    assert from_spans == from_echelon


def test_combo_points_reproduces_spans():
    table = field_for_q(3, 5)
    line = span_pair(table, 0, 7)
    a, b = line.points[0], line.points[3]
    assert combo_points((a, b), table) == frozenset(line.points)


def test_rank_oracle_flags_non_subspaces():
    table = field_for_q(2, 5)
    # residues 0, 1, 2 are three independent directions, not a line
    assert echelon_oracle((0, 1, 2), table) == 3


# ------------------------------------------------ certificate checks

def fresh_cert(q=2, seed=1):
    return build_cycle_k2(field_for_q(q, 5), seed)


def reparse(cert, mutate):
    doc = json.loads(certio.dumps(cert))
    mutate(doc)
    return certio.parse_dict(doc)


def test_valid_certificates_pass():
    for q, seed in ((2, 1), (3, 0)):
        rep = verify_certificate(fresh_cert(q, seed))
        assert rep.valid and rep.verdict == "VALID"
        assert rep.violation is None
    rep = verify_certificate(build_cycle_k1(field_for_q(3, 3), 2))
    assert rep.valid


def test_verify_alternate_modulus():
    # a certificate built over a different primitive modulus must verify
    # against its own field block
    table = build_field(2, 1, 5, override_poly=[1, 0, 0, 1, 0, 1])
    cert = build_cycle_k2(table, 2)
    assert cert.field["poly"] == [1, 0, 0, 1, 0, 1]
    assert verify_certificate(cert).valid


def test_detects_missing_vertex():
    cert = reparse(fresh_cert(), lambda d: d["vertices"].pop(37))
    rep = verify_certificate(cert)
    assert not rep.valid and rep.violation.check == "count"


def test_detects_duplicate_vertex():
    def dup(d):
        d["vertices"][5] = dict(d["vertices"][7])
    cert = reparse(fresh_cert(), dup)
    rep = verify_certificate(cert)
    assert not rep.valid and rep.violation.check == "repeat"
    assert rep.violation.index == 7


def test_detects_bad_dimension():
    def wreck(d):
        d["vertices"][4]["dim"] = 1
        d["vertices"][4]["points"] = [0]
    cert = reparse(fresh_cert(), wreck)
    rep = verify_certificate(cert)
    assert not rep.valid and rep.violation.check == "dimension"
    assert rep.violation.index == 4


def test_detects_unsorted_points():
    def wreck(d):
        d["vertices"][3]["points"].reverse()
    cert = reparse(fresh_cert(), wreck)
    rep = verify_certificate(cert)
    assert not rep.valid and rep.violation.check == "points"


def test_detects_out_of_range_residue():
    def wreck(d):
        pts = d["vertices"][3]["points"]
        pts[-1] = 31    # s = 31 at q = 2, residues run 0..30
    cert = reparse(fresh_cert(), wreck)
    rep = verify_certificate(cert)
    assert not rep.valid and rep.violation.check == "points"


def test_detects_wrong_point_count():
    def wreck(d):
        d["vertices"][3]["points"].pop()
    cert = reparse(fresh_cert(), wreck)
    rep = verify_certificate(cert)
    assert not rep.valid and rep.violation.check == "points"


def test_detects_rank_defect():
    # right number of points, ascending, in range, but independent
    # directions rather than a closed line
    base = fresh_cert()
    idx = next(i for i, v in enumerate(base.vertices) if v.dim == 2)

    def wreck(d):
        d["vertices"][idx]["points"] = [0, 1, 2]
    cert = reparse(base, wreck)
    rep = verify_certificate(cert)
    assert not rep.valid
    assert rep.violation.check in ("rank", "repeat")
    if rep.violation.check == "rank":
        assert rep.violation.index == idx


def test_detects_alternation_break():
    def wreck(d):
        d["vertices"][0], d["vertices"][1] = \
            d["vertices"][1], d["vertices"][0]
    cert = reparse(fresh_cert(), wreck)
    rep = verify_certificate(cert)
    assert not rep.valid and rep.violation.check == "alternation"


def test_detects_containment_break():
    def wreck(d):
        d["vertices"][10], d["vertices"][12] = \
            d["vertices"][12], d["vertices"][10]
    cert = reparse(fresh_cert(), wreck)
    rep = verify_certificate(cert)
    assert not rep.valid and rep.violation.check == "containment"


def test_detects_broken_closing_edge():
    # rebuild the vertex list as a Hamiltonian path that is not a
    # cycle: cut at the third plane containing the final line and
    # append the tail reversed; every interior edge survives, only the
    # wrap edge fails
    table = field_for_q(2, 5)
    cert = build_cycle_k2(table, 1)
    vs = cert.vertices
    last_line = vs[-1]
    m = next(i for i in range(2, len(vs) - 2, 2)
             if contains(vs[i], last_line))
    reordered = vs[:m + 1] + vs[:m:-1]
    assert sorted(v.points for v in reordered) == \
        sorted(v.points for v in vs)
    assert not contains(vs[0], reordered[-1])
    doc = json.loads(certio.dumps(cert))
    doc["vertices"] = [{"dim": v.dim, "points": list(v.points)}
                       for v in reordered]
    rep = verify_certificate(certio.parse_dict(doc))
    assert not rep.valid
    assert rep.violation.check == "containment"
    assert rep.violation.index == len(vs) - 1


def test_rejects_non_primitive_field_block():
    def wreck(d):
        d["field"]["poly"] = [1, 1, 1, 1, 1, 1]
    cert = reparse(fresh_cert(), wreck)
    with pytest.raises(CertificateFormatError):
        verify_certificate(cert)


def test_rejects_q_field_mismatch():
    def wreck(d):
        d["q"] = 3
    cert = reparse(fresh_cert(), wreck)
    with pytest.raises(CertificateFormatError):
        verify_certificate(cert)


def test_rejects_inconsistent_n_k():
    def wreck(d):
        d["k"] = 1
    cert = reparse(fresh_cert(), wreck)
    with pytest.raises(CertificateFormatError):
        verify_certificate(cert)


# ------------------------------------------------ parse rejections

def test_parse_rejects_structural_damage():
    good = json.loads(certio.dumps(fresh_cert()))
    cases = [
        lambda d: d.pop("q"),
        lambda d: d.pop("field"),
        lambda d: d["field"].pop("poly"),
        lambda d: d.pop("meta"),
        lambda d: d["meta"].pop("ell"),
        lambda d: d.update(q="two"),
        lambda d: d.update(q=True),
        lambda d: d.update(vertices=[]),
        lambda d: d["vertices"][0].update(points=[]),
        lambda d: d["vertices"][0].update(points=[1, None]),
        lambda d: d.update(verdict="NOT_A_CYCLE"),
        lambda d: d["field"].update(n=3),
    ]
    for i, mutate in enumerate(cases):
        doc = json.loads(json.dumps(good))
        mutate(doc)
        with pytest.raises(CertificateFormatError):
            certio.parse_dict(doc)
    with pytest.raises(CertificateFormatError):
        certio.loads("{not json")
    with pytest.raises(CertificateFormatError):
        certio.loads("[1, 2, 3]\n")
    with pytest.raises(CertificateFormatError):
        certio.load(FIXTURES / "no_such_file.json")


# ------------------------------------------------ stored fixtures

def test_fixture_valid():
    cert = certio.load(FIXTURES / "valid_q2_k2.json")
    rep = verify_certificate(cert)
    assert rep.valid and rep.vertices == 310


def test_fixture_swapped_rejected():
    cert = certio.load(FIXTURES / "corrupt_swapped.json")
    rep = verify_certificate(cert)
    assert not rep.valid and rep.violation.check == "containment"


def test_fixture_deleted_rejected():
    cert = certio.load(FIXTURES / "corrupt_deleted.json")
    rep = verify_certificate(cert)
    assert not rep.valid and rep.violation.check == "count"


def test_fixture_malformed_rejected():
    with pytest.raises(CertificateFormatError):
        certio.load(FIXTURES / "corrupt_malformed.json")


def test_fixture_natural_flip_instance():
    cert = certio.load(FIXTURES / "natural_g11_q3.json")
    assert cert.meta["g"] == 11 and cert.meta["flips"] == 10
    assert verify_certificate(cert).valid


# ------------------------------------------------ property suite

CHECK_NAMES = [
    "orbit_size",
    "class_count",
    "progression_triples_independent",
    "line_spanning_pairs",
    "line_differences_distinct",
    "repeated_difference_forces_progression",
    "plane_classes_have_progression_rep",
    "progression_plane_rich_in_partner_class",
    "rich_line_class_unique",
    "other_line_classes_see_one",
    "plane_profile_q_plus_1_and_ones",
    "pinned_line_classes_differ",
    "pinned_plane_classes_differ",
]


@pytest.mark.parametrize("q", [2, 3])
def test_suite_exhaustive_passes(q):
    rep = run_property_suite(q)
    assert rep.mode == "exhaustive"
    assert [c.name for c in rep.checks] == CHECK_NAMES
    assert rep.passed, [c for c in rep.checks if not c.passed]


@pytest.mark.parametrize("q", [4, 5])
def test_suite_sampled_passes_and_reproduces(q):
    rep1 = run_property_suite(q)
    assert rep1.mode == "sampled"
    assert rep1.passed, [c for c in rep1.checks if not c.passed]
    rep2 = run_property_suite(q)
    assert [(c.name, c.passed, c.witness) for c in rep1.checks] == \
        [(c.name, c.passed, c.witness) for c in rep2.checks]


def test_suite_mode_control():
    rep = run_property_suite(2, mode="sampled")
    assert rep.mode == "sampled" and rep.passed
    with pytest.raises(UsageError):
        run_property_suite(2, mode="everything")


def test_suite_detects_corrupted_tables():
    # damage one Zech entry on a private table: spans built from it stop
    # being real subspaces and the suite must notice, not crash
    table = build_field(2, 1, 5)
    table.zech[7], table.zech[9] = table.zech[9], table.zech[7]
    rep = run_property_suite(2, table=table)
    assert not rep.passed
    failed = [c.name for c in rep.checks if not c.passed]
    assert failed, "corruption went unnoticed"


def test_rank_oracle_detects_shuffled_exp_table():
    # the class machinery works purely on exponents, so a permuted
    # coefficient table slips past it; the rank cross-check is what
    # catches this failure mode
    table = build_field(3, 1, 5)
    table.exp_table[5], table.exp_table[17] = \
        table.exp_table[17], table.exp_table[5]
    mismatches = sum(1 for sub in enumerate_grassmannian(table, 2)
                     if echelon_oracle(sub.points, table) != sub.dim)
    assert mismatches > 0


def test_sample_seed_is_fixed():
    assert SAMPLE_SEED == 1729
