"""Finite-field towers GF(p) -> GF(q) -> GF(q^n) with discrete-log tables.

The top field is GF(q)[x]/(f) for a primitive modulus f, so the residue
class of x generates the multiplicative group and every nonzero element
is a power alpha^t.  Elements are stored packed: an integer whose base-q
digits are the coefficients of the residue polynomial, lowest degree
first.  When q = p^m with m > 1 the coefficients are themselves codes of
GF(q) elements packed base p, and all GF(q) arithmetic runs through the
base field's own tables.  The two-level tower matters: spans taken later
must be GF(q)-linear, and a flat GF(p^(m*n)) table cannot express that.

Sums of generator powers reduce to table lookups via a precomputed
log(1 + alpha^d) column, so downstream span code never touches vectors.
"""

from __future__ import annotations

import os

from .errors import FieldSizeError, NonPrimitiveError, UsageError

DEFAULT_MAX_ELEMENTS = 16 ** 5
MAX_ELEMENTS_ENV = "QMIDDLE_MAX_FIELD_ELEMENTS"


class _Zero:
    __slots__ = ()

    def __repr__(self):
        return "ZERO"


#: Marker returned by log_sum when the sum is the zero element (which has
#: no discrete log).
ZERO = _Zero()


def is_prime(v: int) -> bool:
    if v < 2:
        return False
    f = 2
    while f * f <= v:
        if v % f == 0:
            return False
        f += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, m) with q = p^m, p prime.  UsageError otherwise."""
    if q < 2:
        raise UsageError(f"q={q} is not a prime power")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    m = 0
    v = q
    while v % p == 0:
        v //= p
        m += 1
    if v != 1:
        raise UsageError(f"q={q} is not a prime power")
    return p, m


def _unpack(code: int, base: int, width: int) -> list[int]:
    digits = []
    for _ in range(width):
        code, d = divmod(code, base)
        digits.append(d)
    return digits


def _pack(digits, base: int) -> int:
    acc = 0
    for d in reversed(digits):
        acc = acc * base + d
    return acc


class BaseField:
    """GF(q) arithmetic on integer codes 0..q-1, q = p^m.

    For m = 1 a code is just a residue mod p.  For m > 1 it packs the
    GF(p) coefficient vector of the element base p, ascending degree,
    relative to the canonical primitive modulus for (p, m).  After
    construction every operation is a table lookup.
    """

    def __init__(self, p: int, m: int, poly: list[int] | None = None):
        if not is_prime(p):
            raise UsageError(f"p={p} is not prime")
        if m < 1:
            raise UsageError("extension degree must be >= 1")
        self.p = p
        self.m = m
        self.q = p ** m
        q = self.q
        if m == 1:
            self.poly = None
            self._add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self._mul = [[(a * b) % p for b in range(p)] for a in range(p)]
            self._neg = [(-a) % p for a in range(p)]
            self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
        else:
            prime = BaseField(p, 1)
            if poly is None:
                poly, exps = _search_primitive(prime, m)
            else:
                exps, order = _build_exp(prime, list(poly))
                if exps is None:
                    raise NonPrimitiveError(
                        f"base modulus {poly} over GF({p}): generator order "
                        f"{order}, expected {q - 1}")
            self.poly = list(poly)
            log = [0] * q
            for t, v in enumerate(exps):
                log[v] = t

            def raw_add(a: int, b: int) -> int:
                da, db = _unpack(a, p, m), _unpack(b, p, m)
                return _pack([(x + y) % p for x, y in zip(da, db)], p)

            self._add = [[raw_add(a, b) for b in range(q)] for a in range(q)]
            self._neg = [_pack([(-x) % p for x in _unpack(a, p, m)], p)
                         for a in range(q)]
            mul = [[0] * q for _ in range(q)]
            for a in range(1, q):
                for b in range(1, q):
                    mul[a][b] = exps[(log[a] + log[b]) % (q - 1)]
            self._mul = mul
            self._inv = [0] + [exps[(q - 1 - log[a]) % (q - 1)]
                               for a in range(1, q)]

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]


def _build_exp(base: BaseField, coeffs: list[int]):
    """Powers of x modulo coeffs (monic, ascending) over the base field.

    Returns (exp_list, order) where exp_list[t] is the packed value of
    x^t for t in 0..Q-2, Q = q^deg.  exp_list is None when x fails to
    generate the full multiplicative group; order then reports where the
    power sequence first returned to 1 (None if it never did).
    """
    d = len(coeffs) - 1
    q = base.q
    if d < 1:
        raise UsageError("modulus must have degree >= 1")
    if coeffs[-1] != 1:
        raise UsageError("modulus must be monic")
    if any(not 0 <= c < q for c in coeffs):
        raise UsageError("modulus coefficients out of range for GF(q)")
    Q = q ** d
    if coeffs[0] == 0:
        return None, None  # x divides the modulus; x is not even a unit
    neg_low = [base.neg(c) for c in coeffs[:d]]
    # packed vector of c * (-low part), one per possible overflow digit
    scaled = [_pack([base.mul(c, v) for v in neg_low], q) for c in range(q)]
    if base.p == 2:
        def vadd(x: int, y: int) -> int:
            return x ^ y
    else:
        def vadd(x: int, y: int) -> int:
            out = 0
            mult = 1
            for _ in range(d):
                x, dx = divmod(x, q)
                y, dy = divmod(y, q)
                out += base.add(dx, dy) * mult
                mult *= q
            return out

    exp_list = [1]
    v = 1
    for j in range(1, Q - 1):
        v *= q
        t, v = divmod(v, Q)
        if t:
            v = vadd(v, scaled[t])
        if v == 1:
            return None, j
        exp_list.append(v)
    v *= q
    t, v = divmod(v, Q)
    if t:
        v = vadd(v, scaled[t])
    if v != 1:
        return None, None
    return exp_list, Q - 1


def _search_primitive(base: BaseField, degree: int):
    """Lexicographically smallest monic primitive modulus of given degree.

    Candidates are ordered by their low-coefficient vector read as a
    base-q integer, constant term first; the first one whose x has full
    multiplicative order wins.  Deterministic by construction.
    """
    for code in range(base.q ** degree):
        coeffs = _unpack(code, base.q, degree) + [1]
        if coeffs[0] == 0:
            continue
        exps, _ = _build_exp(base, coeffs)
        if exps is not None:
            return coeffs, exps
    raise NonPrimitiveError(
        f"no primitive modulus of degree {degree} over GF({base.q})")


def find_primitive_polynomial(p: int, m: int) -> list[int]:
    """Smallest monic primitive polynomial of degree m over GF(p) (prime p).

    Coefficients ascending, constant term first, leading 1 included.
    """
    base = BaseField(p, 1)
    coeffs, _ = _search_primitive(base, m)
    return coeffs


class FieldTable:
    """exp/log/Zech tables for GF(q^n), q = p^m.

    exp_table[t] is the packed coefficient vector of alpha^t; log_table
    inverts it (-1 for the zero vector).  zech[d] = log(1 + alpha^d),
    -1 when 1 + alpha^d = 0.  s = (q^n - 1)//(q - 1): two exponents name
    the same 1-dim subspace exactly when they agree mod s, because GF(q)*
    is the set of powers alpha^(j*s).
    """

    def __init__(self, p: int, m: int, n: int,
                 override_poly: list[int] | None = None,
                 max_elements: int | None = None):
        if n < 1:
            raise UsageError("n must be >= 1")
        base = BaseField(p, m)
        q = base.q
        if max_elements is None:
            max_elements = int(os.environ.get(MAX_ELEMENTS_ENV,
                                              DEFAULT_MAX_ELEMENTS))
        if q ** n > max_elements:
            raise FieldSizeError(
                f"GF({q}^{n}) needs {q ** n} table entries, over the bound "
                f"{max_elements} (raise {MAX_ELEMENTS_ENV} to override)")
        if override_poly is not None:
            poly = [int(c) for c in override_poly]
            if len(poly) != n + 1:
                raise UsageError(
                    f"modulus must have degree {n}: got {len(poly) - 1}")
            exps, order = _build_exp(base, poly)
            if exps is None:
                raise NonPrimitiveError(
                    f"modulus {poly} over GF({q}): generator order "
                    f"{order}, expected {q ** n - 1}")
        else:
            poly, exps = _search_primitive(base, n)
        self.base = base
        self.p = p
        self.m = m
        self.n = n
        self.q = q
        self.modulus_poly = list(poly)
        self.order_mult = q ** n - 1
        self.s = (q ** n - 1) // (q - 1)
        self.exp_table = exps
        log = [-1] * (q ** n)
        for t, v in enumerate(exps):
            log[v] = t
        self.log_table = log
        if p == 2:
            def vadd(x: int, y: int) -> int:
                return x ^ y
        else:
            badd = base.add
            nn = n

            def vadd(x: int, y: int) -> int:
                out = 0
                mult = 1
                for _ in range(nn):
                    x, dx = divmod(x, q)
                    y, dy = divmod(y, q)
                    out += badd(dx, dy) * mult
                    mult *= q
                return out
        self._vadd = vadd
        zech = []
        for d in range(self.order_mult):
            v = vadd(exps[d], 1)
            zech.append(log[v] if v else -1)
        self.zech = zech

    def exp_vec(self, t: int) -> tuple[int, ...]:
        """Coefficient vector of alpha^t as GF(q) codes, ascending degree."""
        return tuple(_unpack(self.exp_table[t % self.order_mult],
                             self.q, self.n))

    def log_vec(self, vec) -> int | None:
        """Exponent of the element with the given coefficient vector."""
        t = self.log_table[_pack(list(vec), self.q)]
        return None if t < 0 else t


def log_sum(table: FieldTable, a: int, b: int):
    """log(alpha^a + alpha^b), or ZERO when the sum vanishes."""
    N = table.order_mult
    a %= N
    z = table.zech[(b - a) % N]
    if z < 0:
        return ZERO
    return (a + z) % N


def build_field(p: int, m: int, n: int,
                override_poly: list[int] | None = None,
                max_elements: int | None = None) -> FieldTable:
    """Construct the GF(p^m)^n tower table; see FieldTable."""
    if not is_prime(p):
        raise UsageError(f"p={p} is not prime")
    return FieldTable(p, m, n, override_poly=override_poly,
                      max_elements=max_elements)


def field_for_q(q: int, n: int,
                override_poly: list[int] | None = None) -> FieldTable:
    """build_field with q factored into (p, m) for you."""
    p, m = prime_power(q)
    return build_field(p, m, n, override_poly=override_poly)
