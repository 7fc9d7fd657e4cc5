"""Cycle construction for the middle two levels of the subspace lattice.

For n = 5 the builder walks one plane and one line from each shift class
into a short alternating path with pinned endpoints, replicates that path
across a shift subgroup, and either closes it directly or repairs it with
a fixed schedule of prefix reversals.  For n = 3 the point/line cycle
falls out of a single line's difference structure.

Everything here is deterministic given (seed, field): class orders are
drawn from a seeded shuffle and member choices are scanned in ascending
shift order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import ConstructionError, InvariantViolation, UsageError
from .fields import FieldTable
from .geometry import Subspace, contains, shift, span_pair, span_triple
from .orbits import ClassTable, class_table, canonicalize


@dataclass
class PathPlan:
    order_a: list[int]            # plane class indices, walk order
    order_b: list[int]            # line class indices, walk order
    chosen: list[Subspace]        # plane, line, plane, line, ...
    ell: int                      # shift carrying the path onto its successor
    g: int                        # gcd(ell, s)


@dataclass
class CycleCertificate:
    q: int
    n: int
    k: int
    field: dict                   # {p, m, n, poly}
    meta: dict                    # {seed, ell, g, flips}
    vertices: list[Subspace]
    verdict: str


HAMILTONIAN = "HAMILTONIAN_CYCLE"


def _field_block(table: FieldTable) -> dict:
    return {"p": table.p, "m": table.m, "n": table.n,
            "poly": list(table.modulus_poly)}


def _mid_adjacent(u: Subspace, v: Subspace) -> bool:
    if u.dim == v.dim + 1:
        hi, lo = u, v
    elif v.dim == u.dim + 1:
        hi, lo = v, u
    else:
        return False
    return set(lo.points) <= set(hi.points)


def find_class_path(table: FieldTable, rng_seed: int,
                    order_a: list[int] | None = None,
                    order_b: list[int] | None = None) -> PathPlan:
    """Alternating plane/line path using each class once, endpoints pinned.

    Starts at the plane on residues 0,1,2 and its line 0,2; ends on the
    plane class of 0,1,3 at the member sitting on residues ell+1, ell+2,
    ell+4, whose line ell+1, ell+2 closes against the path shifted by
    ell.  The value of ell is whatever the final member forces.
    """
    ct = class_table(table)
    s = table.s
    e = table.q ** 2 + 1

    u1 = span_triple(table, 0, 1, 2)
    v1 = span_pair(table, 0, 2)
    ue_model = span_triple(table, 0, 1, 3)
    be_model = span_pair(table, 0, 1)
    a1_cls, u1_shift = ct.plane_class_of(u1)
    b1_cls, v1_shift = ct.line_class_of(v1)
    ae_cls, ae_rep_shift = ct.plane_class_of(ue_model)
    be_cls, be_rep_shift = ct.line_class_of(be_model)
    if a1_cls.index == ae_cls.index or b1_cls.index == be_cls.index:
        raise InvariantViolation("pinned endpoint classes coincide")

    rng = random.Random(rng_seed)
    if order_a is None:
        middle = [c.index for c in ct.planes
                  if c.index not in (a1_cls.index, ae_cls.index)]
        rng.shuffle(middle)
        order_a = [a1_cls.index] + middle + [ae_cls.index]
    if order_b is None:
        middle = [c.index for c in ct.lines
                  if c.index not in (b1_cls.index, be_cls.index)]
        rng.shuffle(middle)
        order_b = [b1_cls.index] + middle + [be_cls.index]
    if sorted(order_a) != list(range(e)) or order_a[0] != a1_cls.index \
            or order_a[-1] != ae_cls.index:
        raise UsageError("order_a must permute plane classes, pins fixed")
    if sorted(order_b) != list(range(e)) or order_b[0] != b1_cls.index \
            or order_b[-1] != be_cls.index:
        raise UsageError("order_b must permute line classes, pins fixed")

    # the lone member of the closing line class inside the final plane
    # class sits at a fixed offset; both derivations must agree
    closing = ct.line_shifts[ae_cls.index].get(be_cls.index, ())
    if len(closing) != 1:
        raise InvariantViolation(
            "closing line class is not unique inside the final plane class")
    if closing[0] != (be_rep_shift - ae_rep_shift) % s:
        raise InvariantViolation("closing member offset is inconsistent")

    # DFS over member choices; positions hold (plane shift, line shift)
    chosen_u = [0] * (e + 1)   # 1-indexed member shifts per position
    chosen_v = [0] * (e + 1)
    chosen_u[1] = u1_shift
    chosen_v[1] = v1_shift
    found_ell: list[int] = []

    def extend(i: int, prev_v_shift: int) -> bool:
        a_i = order_a[i - 1]
        b_prev = order_b[i - 2]
        b_i = order_b[i - 1]
        for j in ct.plane_members_containing(a_i, b_prev, prev_v_shift):
            chosen_u[i] = j
            if i == e:
                ell = (j - ae_rep_shift - 1) % s
                v_shift = (be_rep_shift + ell + 1) % s
                if ct.lines_inside_member(a_i, j, b_i) != [v_shift]:
                    raise InvariantViolation(
                        "closing line is not the member the offset predicts")
                chosen_v[i] = v_shift
                found_ell.append(ell)
                return True
            for v in ct.lines_inside_member(a_i, j, b_i):
                chosen_v[i] = v
                if extend(i + 1, v):
                    return True
        return False

    if not extend(2, v1_shift):
        raise ConstructionError(
            f"path search exhausted for q={table.q} seed={rng_seed}")

    ell = found_ell[0]
    chosen: list[Subspace] = []
    for i in range(1, e + 1):
        chosen.append(shift(table, ct.planes[order_a[i - 1]].rep,
                            chosen_u[i]))
        chosen.append(shift(table, ct.lines[order_b[i - 1]].rep,
                            chosen_v[i]))
    plan = PathPlan(order_a=list(order_a), order_b=list(order_b),
                    chosen=chosen, ell=ell, g=math.gcd(ell, s))
    _validate_plan(table, ct, plan)
    return plan


def _validate_plan(table: FieldTable, ct: ClassTable, plan: PathPlan):
    """Endpoint pins, alternation, class coverage, and the closing edge."""
    e = table.q ** 2 + 1
    chosen = plan.chosen
    if len(chosen) != 2 * e:
        raise InvariantViolation("plan length is off")
    if chosen[0] != span_triple(table, 0, 1, 2):
        raise InvariantViolation("first plane is not pinned to 0,1,2")
    if chosen[1] != span_pair(table, 0, 2):
        raise InvariantViolation("first line is not pinned to 0,2")
    ell = plan.ell
    if chosen[-2] != shift(table, span_triple(table, 0, 1, 3), ell + 1):
        raise InvariantViolation("last plane does not match ell")
    if chosen[-1] != shift(table, span_pair(table, 0, 1), ell + 1):
        raise InvariantViolation("last line does not match ell")
    seen_a, seen_b = set(), set()
    for idx, sub in enumerate(chosen):
        if idx % 2 == 0:
            if sub.dim != 3:
                raise InvariantViolation("even slots must be planes")
            cls, _ = ct.plane_class_of(sub)
            seen_a.add(cls.index)
            if not contains(sub, chosen[idx + 1]):
                raise InvariantViolation(f"plane {idx} misses its line")
            if idx + 2 < len(chosen) and \
                    not contains(chosen[idx + 2], chosen[idx + 1]):
                raise InvariantViolation(f"line {idx + 1} not in next plane")
        else:
            if sub.dim != 2:
                raise InvariantViolation("odd slots must be lines")
            cls, _ = ct.line_class_of(sub)
            seen_b.add(cls.index)
    if len(seen_a) != e or len(seen_b) != e:
        raise InvariantViolation("plan does not use every class once")
    if not contains(shift(table, chosen[0], ell), chosen[-1]):
        raise InvariantViolation("closing containment fails")


def assemble_cycle(table: FieldTable, plan: PathPlan) -> list[Subspace]:
    """Concatenate the plan's path shifted by 0, ell, 2*ell, ...

    With g = gcd(ell, s) this visits s/g shifts; all vertices must be
    distinct.  The ell = 0 plan has its own assembly.
    """
    if plan.ell == 0:
        raise UsageError("ell = 0 plans use build_zero_shift_cycle")
    s = table.s
    out: list[Subspace] = []
    for t in range(s // plan.g):
        off = (t * plan.ell) % s
        for sub in plan.chosen:
            out.append(shift(table, sub, off))
    if len({(v.dim, v.points) for v in out}) != len(out):
        raise InvariantViolation("assembled walk repeats a vertex")
    return out


@dataclass(frozen=True)
class FlipPins:
    """Expected vertices around the two cuts of one repair step."""
    before_pivot: object
    pivot_low: object
    block_head: object
    pivot_low2: object


def flip_tail(path: list, block_len: int, g: int, adjacent,
              pins_for_step) -> tuple[list, int]:
    """Stitch g concatenated blocks into one closed cycle by prefix flips.

    The path must be g blocks of block_len vertices, block u the +u shift
    of block 0, with the pinned-vertex layout the planner guarantees: at
    step i the vertex before index (2i-1)L is the low pivot, and index
    2iL opens the next block.  Each step reverses two prefixes; the walk
    is re-validated after every reversal and the final path must close.
    """
    if g < 3 or g % 2 == 0:
        raise UsageError(f"flip schedule needs odd g >= 3, got g={g}")
    L = block_len
    if len(path) != g * L:
        raise UsageError("path length must be g * block_len")
    work = list(path)
    reversals = 0
    for i in range(1, (g - 1) // 2 + 1):
        pins = pins_for_step(i)
        cut1 = (2 * i - 1) * L - 1
        _expect(work, cut1 - 1, pins.before_pivot, i, "before_pivot")
        _expect(work, cut1, pins.pivot_low, i, "pivot_low")
        work[:cut1] = work[cut1 - 1::-1]
        reversals += 1
        _validate_walk(work, adjacent, i)
        cut2 = 2 * i * L + 1
        _expect(work, cut2 - 1, pins.block_head, i, "block_head")
        _expect(work, cut2, pins.pivot_low2, i, "pivot_low2")
        work[:cut2] = work[cut2 - 1::-1]
        reversals += 1
        _validate_walk(work, adjacent, i)
    if not adjacent(work[-1], work[0]):
        raise ConstructionError("flipped path does not close into a cycle")
    return work, reversals


def _expect(path, idx, vertex, step, label):
    if path[idx] != vertex:
        raise ConstructionError(
            f"flip step {step}: {label} missing at index {idx}")


def _validate_walk(path, adjacent, step):
    for i in range(len(path) - 1):
        if not adjacent(path[i], path[i + 1]):
            raise ConstructionError(
                f"flip step {step} broke the walk at index {i}")


def _real_pins(table: FieldTable):
    def pins(i: int) -> FlipPins:
        m = 2 * i
        return FlipPins(
            before_pivot=shift(table, span_triple(table, 0, 1, 3), m - 1),
            pivot_low=shift(table, span_pair(table, 0, 1), m - 1),
            block_head=shift(table, span_triple(table, 0, 1, 2), m),
            pivot_low2=shift(table, span_pair(table, 0, 2), m),
        )
    return pins


def close_or_flip(table: FieldTable, plan: PathPlan,
                  walk: list[Subspace]) -> CycleCertificate:
    """Close the assembled walk; when g > 1, flip-repair it first."""
    flips = 0
    if plan.g == 1:
        if not _mid_adjacent(walk[-1], walk[0]):
            raise InvariantViolation("walk does not close")
        vertices = walk
    else:
        s = table.s
        path = list(walk)
        for u in range(1, plan.g):
            path.extend(shift(table, v, u) for v in walk)
        if len({(v.dim, v.points) for v in path}) != len(path):
            raise InvariantViolation("shift copies overlap")
        vertices, flips = flip_tail(path, len(walk), plan.g,
                                    _mid_adjacent, _real_pins(table))
    return CycleCertificate(
        q=table.q, n=table.n, k=2, field=_field_block(table),
        meta={"seed": 0, "ell": plan.ell, "g": plan.g, "flips": flips},
        vertices=vertices, verdict=HAMILTONIAN)


def build_zero_shift_cycle(table: FieldTable,
                           plan: PathPlan) -> CycleCertificate:
    """ell = 0: replicate the path across all s unit shifts directly."""
    if plan.ell != 0:
        raise UsageError("plan does not have ell = 0")
    s = table.s
    out: list[Subspace] = []
    for off in range(s):
        for sub in plan.chosen:
            out.append(shift(table, sub, off))
    if len({(v.dim, v.points) for v in out}) != len(out):
        raise InvariantViolation("assembled walk repeats a vertex")
    if not _mid_adjacent(out[-1], out[0]):
        raise InvariantViolation("walk does not close")
    return CycleCertificate(
        q=table.q, n=table.n, k=2, field=_field_block(table),
        meta={"seed": 0, "ell": 0, "g": math.gcd(0, s), "flips": 0},
        vertices=out, verdict=HAMILTONIAN)


def build_cycle_k2(table: FieldTable, seed: int) -> CycleCertificate:
    """Hamiltonian cycle on the lines and planes of F_q^5."""
    if table.n != 5:
        raise UsageError("k = 2 construction needs n = 5")
    plan = find_class_path(table, seed)
    if plan.ell == 0:
        cert = build_zero_shift_cycle(table, plan)
    else:
        walk = assemble_cycle(table, plan)
        cert = close_or_flip(table, plan, walk)
    cert.meta["seed"] = seed
    return cert


def build_cycle_k1(table: FieldTable, ell: int) -> CycleCertificate:
    """Hamiltonian cycle on the points and lines of F_q^3.

    Any line's point set hits every nonzero residue difference exactly
    once, so for each admissible ell some point of the line has its
    ell-shift on the line too; alternating point and line through the
    shift orbit closes up.
    """
    if table.n != 3:
        raise UsageError("k = 1 construction needs n = 3")
    s = table.s
    if not 1 <= ell <= s - 1:
        raise UsageError(f"ell must be in 1..{s - 1}, got {ell}")
    if math.gcd(ell, s) != 1:
        raise UsageError(f"gcd(ell, {s}) must be 1, got "
                         f"{math.gcd(ell, s)}")
    line = span_pair(table, 0, 1)
    pts = set(line.points)
    start = next((j for j in line.points if (j + ell) % s in pts), None)
    if start is None:
        raise InvariantViolation(
            f"no point of the line has its +{ell} shift on the line")
    point = Subspace(1, (start,))
    out: list[Subspace] = []
    for t in range(s):
        off = (t * ell) % s
        out.append(shift(table, point, off))
        out.append(shift(table, line, off))
    if len({(v.dim, v.points) for v in out}) != 2 * s:
        raise InvariantViolation("assembled walk repeats a vertex")
    if start not in out[-1].points:
        raise InvariantViolation("walk does not close")
    return CycleCertificate(
        q=table.q, n=3, k=1, field=_field_block(table),
        meta={"seed": 0, "ell": ell, "g": 1, "flips": 0},
        vertices=out, verdict=HAMILTONIAN)
