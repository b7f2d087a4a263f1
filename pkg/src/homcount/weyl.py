"""Root data, Weyl groups as lattice automorphisms, and Molien traces.

Characters are column vectors in Z^rank. A simple reflection acts by
``s_i(x) = x - <x, a_i^v> a_i``, i.e. by the matrix ``I - a_i (a_i^v)^T``.
Weyl group elements are stored as one int64 array of shape (|W|, d, d);
every entry is tiny, and products are re-checked against an overflow bound.
"""

from __future__ import annotations

import functools
from itertools import combinations
from math import gcd
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .arith import ONE, RatFunc, RatPoly, one_minus_t_pow
from .lattice import IntMatrix, LatticeError, det, matrix_order

ROOT_CAP = 10_000
WEYL_CAP = 1_000_000
_INT64_SAFE = 1 << 40


class RootDatumError(ValueError):
    pass


# --------------------------------------------------------------------------
# root data


@dataclass(frozen=True)
class RootDatum:
    rank: int
    simple_roots: tuple[tuple[int, ...], ...]
    simple_coroots: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)
    # derived
    all_roots: frozenset = field(default=frozenset(), compare=False, repr=False)
    positive_roots: tuple[tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    @property
    def pos_count(self) -> int:
        return len(self.positive_roots)

    @property
    def dim_g(self) -> int:
        return self.rank + len(self.all_roots)

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple_roots)

    def cartan_matrix(self) -> list[list[int]]:
        """Entry (i, j) is <a_i, a_j^v>."""
        return [
            [_pair(a, c) for c in self.simple_coroots] for a in self.simple_roots
        ]

    def reflection(self, i: int) -> IntMatrix:
        a, c = self.simple_roots[i], self.simple_coroots[i]
        d = self.rank
        return IntMatrix(d, d, tuple(int(r == s) - a[r] * c[s] for r in range(d) for s in range(d)))

    def permutes_roots(self, m: IntMatrix) -> bool:
        if m.shape != (self.rank, self.rank):
            return False
        return all(m.apply(r) in self.all_roots for r in self.all_roots)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "simple_roots": [list(map(str, r)) for r in self.simple_roots],
            "simple_coroots": [list(map(str, c)) for c in self.simple_coroots],
        }


def _pair(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


def _finite_type(cartan: list[list[int]]) -> bool:
    n = len(cartan)
    for i in range(n):
        if cartan[i][i] != 2:
            return False
        for j in range(n):
            if i != j:
                if cartan[i][j] > 0:
                    return False
                if (cartan[i][j] == 0) != (cartan[j][i] == 0):
                    return False
    # finite type iff all principal minors are positive
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            sub = IntMatrix.from_rows([[cartan[i][j] for j in idx] for i in idx])
            if det(sub) <= 0:
                return False
    return True


def _close_roots(rank, simple_roots, simple_coroots):
    """BFS closure of the simple roots under simple reflections.

    Each root carries its coordinates in the simple-root basis so that
    positivity can be read off directly.
    """
    m = len(simple_roots)
    coords: dict[tuple[int, ...], tuple[int, ...]] = {}
    queue = deque()
    for i, a in enumerate(simple_roots):
        c = tuple(int(i == j) for j in range(m))
        if a not in coords:
            coords[a] = c
            queue.append(a)
    while queue:
        root = queue.popleft()
        c = coords[root]
        for i in range(m):
            k = _pair(root, simple_coroots[i])
            if k == 0:
                continue
            img = tuple(x - k * y for x, y in zip(root, simple_roots[i]))
            if img not in coords:
                cc = list(c)
                cc[i] -= k
                coords[img] = tuple(cc)
                queue.append(img)
                if len(coords) > ROOT_CAP:
                    raise RootDatumError(f"root closure exceeds {ROOT_CAP} roots")
    positive = []
    for r, c in coords.items():
        if all(x >= 0 for x in c):
            positive.append(r)
        elif not all(x <= 0 for x in c):
            raise RootDatumError(f"root {r} is neither positive nor negative")
    positive.sort(key=lambda r: (sum(coords[r]), coords[r]))
    return frozenset(coords), tuple(positive)


def make_root_datum(
    rank: int,
    simple_roots: Sequence[Sequence[int]],
    simple_coroots: Sequence[Sequence[int]],
    name: str = "",
) -> RootDatum:
    if rank < 0:
        raise RootDatumError("negative rank")
    roots = tuple(tuple(int(x) for x in r) for r in simple_roots)
    coroots = tuple(tuple(int(x) for x in c) for c in simple_coroots)
    if len(roots) != len(coroots):
        raise RootDatumError("need one coroot per simple root")
    for v in roots + coroots:
        if len(v) != rank:
            raise RootDatumError(f"vector {list(v)} does not live in Z^{rank}")
    cartan = [[_pair(a, c) for c in coroots] for a in roots]
    if not _finite_type(cartan):
        raise RootDatumError(f"Cartan matrix {cartan} is not of finite type")
    all_roots, positive = _close_roots(rank, roots, coroots)
    return RootDatum(rank, roots, coroots, name, all_roots, positive)


def _unit(n: int, i: int, c: int = 1) -> list[int]:
    v = [0] * n
    v[i] = c
    return v


def _diff(n: int, i: int, j: int) -> list[int]:
    v = [0] * n
    v[i] += 1
    v[j] -= 1
    return v


def build_root_datum(spec: Mapping | str, n: int | None = None) -> RootDatum:
    """Root datum from a preset ``{"preset": "GL", "n": 4}`` or raw data.

    Presets are named by matrix size: GL(n), SL(n), Sp(n) with n even,
    SO(n), and Torus(n) of rank n.
    """
    if isinstance(spec, str):
        spec = {"preset": spec, "n": n}
    if "preset" in spec:
        extra = set(spec) - {"preset", "n"}
        if extra:
            raise RootDatumError(f"unknown keys in group preset: {sorted(extra)}")
        return _preset(str(spec["preset"]), spec.get("n"))
    extra = set(spec) - {"rank", "simple_roots", "simple_coroots"}
    if extra:
        raise RootDatumError(f"unknown keys in raw root datum: {sorted(extra)}")
    try:
        rank = int(spec["rank"])
        sr = [[int(x) for x in r] for r in spec["simple_roots"]]
        sc = [[int(x) for x in c] for c in spec["simple_coroots"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise RootDatumError(f"malformed raw root datum: {exc}") from None
    return make_root_datum(rank, sr, sc, name="raw")


def _preset(kind: str, n) -> RootDatum:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise RootDatumError(f"preset {kind} needs a positive integer n, got {n!r}")
    key = kind.upper()
    name = f"{kind}({n})"
    if key == "TORUS":
        return make_root_datum(n, [], [], name)
    if key == "GL":
        roots = [_diff(n, i, i + 1) for i in range(n - 1)]
        return make_root_datum(n, roots, roots, name)
    if key == "SL":
        if n < 2:
            raise RootDatumError("SL(n) needs n >= 2")
        r = n - 1
        cartan = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r)] for i in range(r)]
        roots = [_unit(r, i) for i in range(r)]
        coroots = [[cartan[i][j] for i in range(r)] for j in range(r)]
        return make_root_datum(r, roots, coroots, name)
    if key == "SP":
        if n % 2:
            raise RootDatumError("Sp(n) needs n even")
        m = n // 2
        roots = [_diff(m, i, i + 1) for i in range(m - 1)] + [_unit(m, m - 1, 2)]
        coroots = [_diff(m, i, i + 1) for i in range(m - 1)] + [_unit(m, m - 1)]
        return make_root_datum(m, roots, coroots, name)
    if key == "SO":
        m = n // 2
        if n % 2:
            roots = [_diff(m, i, i + 1) for i in range(m - 1)] + [_unit(m, m - 1)]
            coroots = [_diff(m, i, i + 1) for i in range(m - 1)] + [_unit(m, m - 1, 2)]
            return make_root_datum(m, roots, coroots, name)
        if m == 1:
            return make_root_datum(1, [], [], name)
        last = [0] * m
        last[m - 2] = last[m - 1] = 1
        roots = [_diff(m, i, i + 1) for i in range(m - 1)] + [last]
        return make_root_datum(m, roots, roots, name)
    raise RootDatumError(f"unknown preset {kind!r}; expected GL, SL, Sp, SO or Torus")


# --------------------------------------------------------------------------
# Weyl group


@dataclass(frozen=True, eq=False)
class WeylGroup:
    datum: RootDatum
    array: np.ndarray = field(repr=False)   # (|W|, d, d) int64, identity first
    lengths: tuple[int, ...] = field(repr=False)

    def __len__(self) -> int:
        return self.array.shape[0]

    @property
    def order(self) -> int:
        return len(self)

    @property
    def elements(self) -> list[IntMatrix]:
        d = self.datum.rank
        return [IntMatrix(d, d, tuple(int(x) for x in m.ravel())) for m in self.array]

    def length_of(self, m: IntMatrix) -> int:
        return _length(self.datum, np.array(m.to_rows(), dtype=np.int64).reshape(m.rows, m.cols))

    @property
    def max_length(self) -> int:
        return max(self.lengths)


def _height_functional(rd: RootDatum) -> np.ndarray:
    """Integer row vector taking positive value on every positive root."""
    d = rd.rank
    if not rd.simple_roots:
        return np.zeros(d, dtype=np.int64)
    # f = A (A^T A)^-1 1 evaluates to 1 on each simple root (A: simple roots as columns)
    a = [[Fraction(x) for x in r] for r in rd.simple_roots]  # m x d
    m = len(a)
    gram = [[sum(a[i][k] * a[j][k] for k in range(d)) for j in range(m)] for i in range(m)]
    y = _solve(gram, [Fraction(1)] * m)
    f = [sum(y[i] * a[i][k] for i in range(m)) for k in range(d)]
    den = 1
    for x in f:
        den = den * x.denominator // gcd(den, x.denominator)
    return np.array([int(x * den) for x in f], dtype=np.int64)


def _solve(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def _length(rd: RootDatum, w: np.ndarray) -> int:
    if not rd.positive_roots:
        return 0
    pos = np.array(rd.positive_roots, dtype=np.int64).T
    h = _height_functional(rd)
    return int(np.count_nonzero(h @ (w @ pos) < 0))


@functools.lru_cache(maxsize=64)
def enumerate_weyl(rd: RootDatum, cap: int = WEYL_CAP) -> WeylGroup:
    """All of W by breadth-first closure under right multiplication by simple reflections."""
    d = rd.rank
    ident = np.eye(d, dtype=np.int64)
    gens = [np.array(rd.reflection(i).to_rows(), dtype=np.int64).reshape(d, d)
            for i in range(rd.semisimple_rank)]
    seen = {ident.tobytes()}
    elements = [ident]
    frontier = ident[None, :, :]
    while frontier.shape[0] and gens:
        new = []
        for g in gens:
            prod = frontier @ g
            for m in prod:
                key = m.tobytes()
                if key not in seen:
                    seen.add(key)
                    new.append(m)
            if len(seen) > cap:
                raise RootDatumError(f"Weyl group exceeds cap {cap}")
        elements.extend(new)
        frontier = np.array(new, dtype=np.int64).reshape(-1, d, d)
    arr = np.array(elements, dtype=np.int64).reshape(-1, d, d)
    if rd.positive_roots:
        pos = np.array(rd.positive_roots, dtype=np.int64).T
        h = _height_functional(rd)
        heights = np.einsum("k,nkr->nr", h, arr @ pos)
        lengths = tuple(int(x) for x in np.count_nonzero(heights < 0, axis=1))
    else:
        lengths = (0,) * arr.shape[0]
    return WeylGroup(rd, arr, lengths)


def coset_poincare(rd: RootDatum, parabolic_subset: Iterable[int] = ()) -> RatPoly:
    """Sum of t^l(w) over minimal-length representatives of W / W_J."""
    subset = sorted(set(parabolic_subset))
    for j in subset:
        if not (0 <= j < rd.semisimple_rank):
            raise RootDatumError(f"simple root index {j} out of range 0..{rd.semisimple_rank - 1}")
    w = enumerate_weyl(rd)
    keep = np.ones(len(w), dtype=bool)
    if subset:
        h = _height_functional(rd)
        simple = np.array([rd.simple_roots[j] for j in subset], dtype=np.int64).T
        # w is minimal in w W_J iff w(a_j) > 0 for all j in J
        keep = np.all(np.einsum("k,nkr->nr", h, w.array @ simple) > 0, axis=1)
    counts = Counter(l for l, k in zip(w.lengths, keep) if k)
    top = max(counts) if counts else 0
    return RatPoly([counts.get(k, 0) for k in range(top + 1)])


# --------------------------------------------------------------------------
# Molien traces


def _as_array(mats) -> np.ndarray:
    if isinstance(mats, WeylGroup):
        return mats.array
    if isinstance(mats, np.ndarray):
        return mats.astype(np.int64)
    mats = list(mats)
    if not mats:
        raise LatticeError("empty matrix set")
    sizes = {m.shape for m in mats}
    if len(sizes) != 1:
        raise LatticeError(f"matrices of different shapes: {sorted(sizes)}")
    (r, c), = sizes
    if r != c:
        raise LatticeError("non-square matrices in group")
    for m in mats:
        if any(abs(x) >= _INT64_SAFE for x in m.entries):
            raise LatticeError("matrix entries too large")
    return np.array([m.entries for m in mats], dtype=np.int64).reshape(len(mats), r, r)


def _charpoly_counts(arr: np.ndarray) -> Counter:
    """Multiset of det(I - t M) coefficient tuples over a stack of matrices.

    Uses power traces and Newton's identities, with exact integer arithmetic.
    """
    n, d, _ = arr.shape
    if d == 0:
        return Counter({(1,): n})
    traces = np.empty((n, d), dtype=object)
    p = arr.copy()
    for k in range(d):
        if np.abs(p).max() >= _INT64_SAFE:
            return _charpoly_counts_exact(arr)
        traces[:, k] = np.trace(p, axis1=1, axis2=2).astype(object)
        if k + 1 < d:
            p = p @ arr
    tuples = Counter(tuple(int(x) for x in row) for row in traces)
    out: Counter = Counter()
    for ps, mult in tuples.items():
        out[_newton(ps)] += mult
    return out


def _charpoly_counts_exact(arr: np.ndarray) -> Counter:
    from .lattice import reverse_charpoly

    out: Counter = Counter()
    n, d, _ = arr.shape
    for m in arr:
        rc = reverse_charpoly(IntMatrix(d, d, tuple(int(x) for x in m.ravel())))
        out[tuple(int(c) for c in rc.coeffs) + (0,) * (d + 1 - len(rc))] += 1
    return out


def _newton(power_sums: Sequence[int]) -> tuple[int, ...]:
    """Coefficients of det(I - tM) = sum (-1)^k e_k t^k from p_k = tr(M^k)."""
    d = len(power_sums)
    e = [1]
    for k in range(1, d + 1):
        s = sum((-1) ** (i - 1) * e[k - i] * power_sums[i - 1] for i in range(1, k + 1))
        q, r = divmod(s, k)
        if r:
            raise LatticeError("power sums inconsistent with an integer matrix")
        e.append(q)
    return tuple((-1) ** k * e[k] for k in range(d + 1))


def _molien_from_counts(counts: Counter, order: int) -> RatFunc:
    total = RatFunc(RatPoly())
    for coeffs, mult in sorted(counts.items()):
        total = total + RatFunc(RatPoly.const(mult), RatPoly(coeffs))
    return total.scale(Fraction(1, order))


def _check_closed(arr: np.ndarray) -> None:
    keys = {m.tobytes() for m in arr}
    if len(keys) != arr.shape[0]:
        raise LatticeError("repeated matrices in group")
    # grow a generating set; closure of it must reproduce exactly the set
    d = arr.shape[1]
    ident = np.eye(d, dtype=np.int64)
    if ident.tobytes() not in keys:
        raise LatticeError("matrix set does not contain the identity")
    reached = {ident.tobytes()}
    gens: list[np.ndarray] = []
    for m in arr:
        if m.tobytes() in reached:
            continue
        gens.append(m)
        queue = deque(np.frombuffer(k, dtype=np.int64).reshape(d, d) for k in reached)
        while queue:
            x = queue.popleft()
            for g in gens:
                y = x @ g
                if np.abs(y).max(initial=0) >= _INT64_SAFE:
                    raise LatticeError("matrix set is not closed under multiplication")
                key = y.tobytes()
                if key not in reached:
                    if key not in keys:
                        raise LatticeError("matrix set is not closed under multiplication")
                    reached.add(key)
                    queue.append(y)


def molien_trace(mats, twist: IntMatrix | None = None, *, check_closed: bool = True) -> RatFunc:
    """(1/|G|) * sum over g of 1/det(I - t * twist * g), exactly."""
    arr = _as_array(mats)
    n, d, _ = arr.shape
    if check_closed:
        _check_closed(arr)
    if twist is not None:
        if twist.shape != (d, d):
            raise LatticeError(f"twist of shape {twist.shape} does not match group of size {d}")
        tw = np.array(twist.entries, dtype=np.int64).reshape(d, d)
        if not np.array_equal(tw, np.eye(d, dtype=np.int64)):
            arr = tw @ arr
    return _molien_from_counts(_charpoly_counts(arr), n)


def invariant_degrees(w: WeylGroup) -> list[int]:
    """Degrees of basic invariants, read off the Molien series of W."""
    d = w.datum.rank
    molien = molien_trace(w, check_closed=False)
    order = w.datum.pos_count + d + 2
    coeffs = molien.series(order)
    degrees: list[int] = []
    current = list(coeffs)
    while len(degrees) < d:
        k = next((k for k in range(1, order) if current[k] != 0), None)
        if k is None or current[k] < 0 or current[k].denominator != 1:
            raise RootDatumError("Molien series is not that of a polynomial invariant ring")
        for _ in range(int(current[k])):
            degrees.append(k)
            # multiply the series by (1 - t^k)
            current = [current[i] - (current[i - k] if i >= k else 0) for i in range(order)]
    if len(degrees) != d:
        raise RootDatumError("Molien series is not that of a polynomial invariant ring")
    prod = ONE
    for k in degrees:
        prod = prod * one_minus_t_pow(k)
    if molien != RatFunc(ONE, prod):
        raise RootDatumError("Molien series does not match any product of 1/(1 - t^d)")
    return sorted(degrees)


def group_order_poly(rd: RootDatum, f0: IntMatrix | None = None, residue: int = 0) -> RatPoly:
    """P(s) with |G^(F^n)| = P(q^n) for n = residue mod ord(f0), F = q*f0."""
    if f0 is None:
        f0 = IntMatrix.identity(rd.rank)
    return _group_order_poly(rd, f0, residue)


@functools.lru_cache(maxsize=256)
def _group_order_poly(rd: RootDatum, f0: IntMatrix, residue: int) -> RatPoly:
    d = rd.rank
    if f0.shape != (d, d):
        raise RootDatumError(f"twist shape {f0.shape} does not match rank {d}")
    if not rd.permutes_roots(f0):
        raise RootDatumError("twist does not permute the roots")
    order = matrix_order(f0)
    twist = f0 ** (-(residue % order))
    w = enumerate_weyl(rd)
    b = molien_trace(w, twist, check_closed=False)
    p = b.inverse().reciprocal_times_power(rd.dim_g)
    if not p.is_polynomial():
        raise RootDatumError(f"group order is not polynomial: {p!r}")
    poly = p.as_polynomial()
    if not poly.is_integral() or poly.degree != rd.dim_g or poly.lead != 1:
        raise RootDatumError(f"group order polynomial {poly} is not monic integral of degree {rd.dim_g}")
    return poly


def close_group(gens: Sequence[IntMatrix], cap: int) -> list[IntMatrix]:
    """Finite matrix group generated by ``gens`` (identity first), or raise past ``cap``."""
    if not gens:
        raise LatticeError("need at least one generator to fix the matrix size")
    d = gens[0].rows
    ident = IntMatrix.identity(d)
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x @ g
            if y not in seen:
                if any(abs(v) >= _INT64_SAFE for v in y.entries):
                    raise LatticeError("generated group is infinite (entries grow without bound)")
                seen.add(y)
                order.append(y)
                queue.append(y)
                if len(seen) > cap:
                    raise LatticeError(f"generated group exceeds {cap} elements")
    return order
