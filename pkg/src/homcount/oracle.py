"""Brute-force point counts over small finite fields.

Everything here is computed by enumeration and shares no code path with the
symbolic engine beyond integer matrices; it is the ground truth the engine is
checked against.
"""

from __future__ import annotations

import functools
import itertools
from collections import Counter
from math import prod

import numpy as np
from sympy import factorint

from .lattice import IntMatrix, det

MAX_FIELD = 2048
MAX_TORUS_DOMAIN = 10 ** 7


class OracleError(ValueError):
    pass


class SmallField:
    """F_q for q = p^m <= 2048, elements encoded as integers 0..q-1.

    Element ``sum c_i p^i`` stands for the residue of ``sum c_i x^i`` modulo
    ``modulus``, the lexicographically first monic polynomial of degree m for
    which x generates the multiplicative group. For m = 1 the generator is
    the least primitive root mod p. Multiplication goes through log/antilog
    tables.
    """

    def __init__(self, q: int, *, check: bool | None = None):
        fac = factorint(q)
        if q < 2 or len(fac) != 1:
            raise OracleError(f"{q} is not a prime power")
        if q > MAX_FIELD:
            raise OracleError(f"field order {q} exceeds {MAX_FIELD}")
        (p, m), = fac.items()
        self.q, self.p, self.m = q, p, m
        self._digits = [self._to_digits(a) for a in range(q)]
        self.modulus, self.exp = self._primitive_tables()
        self.log = [None] * q
        for k, v in enumerate(self.exp[: q - 1]):
            self.log[v] = k
        if check is None:
            check = q <= 64
        if check:
            self.check_axioms()

    def __repr__(self) -> str:
        return f"SmallField({self.q})"

    # encoding helpers

    def _to_digits(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def _from_digits(self, ds) -> int:
        return sum(d * self.p ** i for i, d in enumerate(ds))

    def _primitive_tables(self):
        p, m, q = self.p, self.m, self.q
        if m == 1:
            for g in range(1, p):
                powers = [1]
                for _ in range(p - 2):
                    powers.append(powers[-1] * g % p)
                if len(set(powers)) == p - 1:
                    return [(-g) % p, 1], powers + [1]
            raise OracleError("no primitive root found")  # pragma: no cover
        for low in range(p ** m):
            coeffs = self._to_digits(low)  # c_0 .. c_{m-1} of x^m + ...
            if coeffs[0] == 0:
                continue
            powers = self._power_table(coeffs)
            if powers is not None:
                return list(coeffs) + [1], powers
        raise OracleError(f"no primitive polynomial of degree {m} over F_{p}")  # pragma: no cover

    def _power_table(self, low):
        """Successive powers of x mod x^m + low; None unless x has order q - 1."""
        p, m, q = self.p, self.m, self.q
        cur = [1] + [0] * (m - 1)
        out = []
        for k in range(q - 1):
            v = self._from_digits(cur)
            if k > 0 and v == 1:
                return None
            out.append(v)
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c - top * l) % p for c, l in zip(cur, low)]
        if self._from_digits(cur) != 1:
            return None
        return out + [1]

    # arithmetic

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        return self._from_digits((x + y) % self.p for x, y in zip(self._digits[a], self._digits[b]))

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self._from_digits((-x) % self.p for x in self._digits[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        return self.exp[(self.log[a] * k) % (self.q - 1)]

    def is_square(self, a: int) -> bool:
        return a == 0 or self.p == 2 or self.log[a] % 2 == 0

    def elements(self) -> range:
        return range(self.q)

    def check_axioms(self) -> None:
        els = range(self.q)
        for a in els:
            if self.add(a, 0) != a or self.mul(a, 1) != a:
                raise OracleError("identity axiom fails")
            if self.add(a, self.neg(a)) != 0:
                raise OracleError("additive inverse fails")
            if a and self.mul(a, self.inv(a)) != 1:
                raise OracleError("multiplicative inverse fails")
            for b in els:
                if self.add(a, b) != self.add(b, a) or self.mul(a, b) != self.mul(b, a):
                    raise OracleError("commutativity fails")
                ab = self.add(a, b)
                mab = self.mul(a, b)
                for c in els:
                    if self.mul(c, ab) != self.add(self.mul(c, a), self.mul(c, b)):
                        raise OracleError("distributivity fails")
                    if self.add(ab, c) != self.add(a, self.add(b, c)):
                        raise OracleError("additive associativity fails")
                    if self.mul(mab, c) != self.mul(a, self.mul(b, c)):
                        raise OracleError("multiplicative associativity fails")

    def metadata(self) -> dict:
        return {"q": self.q, "p": self.p, "m": self.m, "modulus": self.modulus}


@functools.lru_cache(maxsize=None)
def get_field(q: int) -> SmallField:
    return SmallField(q)


# --------------------------------------------------------------------------
# enumerations


def conic_count(a: int, b: int, f: SmallField) -> int:
    """#{(x, y) in F^2 : x^2 - a y^2 = b}."""
    if a == 0 or b == 0:
        raise OracleError("conic needs a != 0 and b != 0")
    squares = [f.mul(x, x) for x in f.elements()]
    hits = Counter(squares)  # x^2 = v has hits[v] solutions x
    return sum(hits[f.add(b, f.mul(a, s))] for s in squares)


def _span(f: SmallField, basis: list[tuple[int, ...]], n: int) -> frozenset:
    vecs = {(0,) * n}
    for row in basis:
        vecs = {
            tuple(f.add(v[i], f.mul(c, row[i])) for i in range(n))
            for v in vecs for c in f.elements()
        }
    return frozenset(vecs)


def subspaces(f: SmallField, n: int, k: int) -> list[frozenset]:
    """All k-dimensional subspaces of F^n, one per reduced row-echelon matrix."""
    out = []
    for pivots in itertools.combinations(range(n), k):
        free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivots]
        for values in itertools.product(f.elements(), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), v in zip(free, values):
                rows[i][j] = v
            out.append(_span(f, [tuple(r) for r in rows], n))
    return out


def flag_count(f: SmallField, n: int, dims) -> int:
    """Number of partial flags V_{d1} < V_{d2} < ... in F^n."""
    dims = list(dims)
    if n < 1 or any(not 0 < d < n for d in dims) or dims != sorted(set(dims)):
        raise OracleError(f"dimension profile {dims} is not increasing inside 1..{n - 1}")
    if not dims:
        return 1
    layers = [subspaces(f, n, d) for d in dims]
    counts = [1] * len(layers[-1])
    for lower, upper in zip(reversed(layers[:-1]), reversed(layers[1:])):
        counts = [sum(c for w, c in zip(upper, counts) if v <= w) for v in lower]
    return sum(counts)


def _p1_points(f: SmallField) -> list[tuple[int, int]]:
    return [(1, x) for x in f.elements()] + [(0, 1)]


def _normalize_p1(f: SmallField, pt: tuple[int, int]) -> tuple[int, int]:
    x0, x1 = pt
    if x0 == 0:
        return (0, 1)
    return (1, f.mul(x1, f.inv(x0)))


def p1_pair_count(f: SmallField, mode: str) -> int:
    """Pairs of distinct points of P^1.

    ``ordered``: ordered pairs over f. ``unordered_variety``: F_q-points of the
    variety of unordered pairs, i.e. Frobenius-stable unordered pairs of
    distinct points of P^1 over the quadratic extension.
    """
    if mode == "ordered":
        pts = _p1_points(f)
        return sum(1 for x in pts for y in pts if x != y)
    if mode == "unordered_variety":
        ext = get_field(f.q ** 2)
        pts = _p1_points(ext)

        def frob(pt):
            return _normalize_p1(ext, (ext.pow(pt[0], f.q), ext.pow(pt[1], f.q)))

        count = 0
        for i, x in enumerate(pts):
            fx = frob(x)
            for y in pts[i + 1:]:
                if {fx, frob(y)} == {x, y}:
                    count += 1
        return count
    raise OracleError(f"unknown mode {mode!r}; expected ordered or unordered_variety")


def twisted_torus_count(a: IntMatrix, q: int, split_degree: int) -> int:
    """#{x in (Z/(q^k - 1))^h : q a x = x}, by enumerating the whole domain."""
    h = a.rows
    if not a.is_square:
        raise OracleError("twist must be square")
    if split_degree < 1 or a ** split_degree != IntMatrix.identity(h):
        raise OracleError(f"twist does not satisfy a^{split_degree} = I")
    mod = q ** split_degree - 1
    if mod ** h > MAX_TORUS_DOMAIN:
        raise OracleError(f"enumeration domain {mod}^{h} exceeds {MAX_TORUS_DOMAIN}")
    if h == 0:
        return 1
    lin = np.array((a.scale(q) - IntMatrix.identity(h)).to_rows(), dtype=np.int64)
    count = 0
    rest = np.indices((mod,) * (h - 1)).reshape(h - 1, -1) if h > 1 else np.zeros((0, 1), np.int64)
    for x0 in range(mod):
        xs = np.vstack([np.full((1, rest.shape[1]), x0, dtype=np.int64), rest])
        images = (lin @ xs) % mod
        count += int(np.count_nonzero(np.all(images == 0, axis=0)))
    return count


def twisted_torus_det(a: IntMatrix, q: int) -> int:
    """|det(q a - I)|, the closed form the enumeration is compared with."""
    return abs(det(a.scale(q) - IntMatrix.identity(a.rows)))


def glr_closed_form(r: int, q: int) -> int:
    """|X_r(F_q)| for X_r = GL(2r)/H_r, with H_r the split r-torus extended by inversion."""
    if r < 1:
        raise OracleError("r must be positive")
    qr = ((q + 1) ** r + (q - 1) ** r) // 2
    num = prod(q ** (2 * j) - 1 for j in range(1, r + 1))
    den = (q * q - 1) ** r
    body, rem = divmod(num, den)
    assert rem == 0
    return qr * q ** (r * (2 * r - 1)) * prod(q ** (2 * i - 1) - 1 for i in range(1, r + 1)) * body
