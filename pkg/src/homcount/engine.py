"""Periodic counting polynomials of G/H with G reductive and H^0 a torus.

A homogeneous space is described by lattice data only:

* the root datum of G on the character lattice ``L_T = Z^d`` of a maximal torus,
* the restriction ``L_T -> L_H = Z^h`` dual to the inclusion of H^0 in T,
* generators of the component group Gamma = H/H^0 acting on ``L_H``,
* the finite-order twist ``f0`` with Frobenius ``F = q * f0`` on ``L_T``.

With ``A_k = Molien(Gamma, f0_H^-k)`` and ``B_k = Molien(W, f0^-k)`` the count
over F_{q^n}, n = k mod N, is ``s^dim(X) * A_k(1/s) / B_k(1/s)`` at s = q^n.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from sympy import factorint, totient

from .arith import RatFunc, RatPoly, extract_unit_factor, one_minus_t_pow, shift_poly
from .lattice import (
    IntMatrix,
    LatticeError,
    det,
    elementary_divisors,
    matrix_order,
    right_inverse,
    unimodular_inverse,
)
from .weyl import (
    RootDatum,
    RootDatumError,
    build_root_datum,
    close_group,
    enumerate_weyl,
    group_order_poly,
    molien_trace,
)

log = logging.getLogger(__name__)

GAMMA_CAP = 100_000


class SpecValidationError(ValueError):
    """Input does not describe a homogeneous space G/H of the supported kind."""


class ConsistencyCheckError(SpecValidationError):
    """A runtime consistency check failed; the input cannot come from a genuine G/H."""

    def __init__(self, check: str, message: str):
        super().__init__(f"[{check}] {message}")
        self.check = check


@dataclass(frozen=True, eq=False)
class HomogeneousSpec:
    group: RootDatum
    restriction: IntMatrix
    gamma_generators: tuple[IntMatrix, ...]
    f0: IntMatrix
    gamma: tuple[IntMatrix, ...]
    f0_h: IntMatrix
    order_f0: int
    order_f0_h: int
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.group.rank

    @property
    def h(self) -> int:
        return self.restriction.rows

    @property
    def dim_x(self) -> int:
        return self.group.dim_g - self.h

    @property
    def period(self) -> int:
        return lcm(self.order_f0, self.order_f0_h)


def validate_spec(
    group: RootDatum | Mapping,
    restriction: IntMatrix,
    gamma_generators: Sequence[IntMatrix] = (),
    f0: IntMatrix | None = None,
    name: str = "",
) -> HomogeneousSpec:
    """Check the standing hypotheses and derive Gamma, f0_H and the period."""
    try:
        rd = group if isinstance(group, RootDatum) else build_root_datum(group)
    except RootDatumError as exc:
        raise SpecValidationError(str(exc)) from None
    d = rd.rank
    if restriction.cols != d:
        raise SpecValidationError(
            f"restriction has {restriction.cols} columns but the character lattice has rank {d}"
        )
    h = restriction.rows
    if h > d:
        raise SpecValidationError(f"restriction onto rank {h} exceeds torus rank {d}")
    divs = elementary_divisors(restriction)
    if len(divs) < h or any(x != 1 for x in divs[:h]):
        raise SpecValidationError(
            f"restriction is not surjective onto Z^{h} (elementary divisors {divs}); "
            "saturate the kernel, i.e. use the character lattice of H^0 itself"
        )

    if f0 is None:
        f0 = IntMatrix.identity(d)
    if f0.shape != (d, d):
        raise SpecValidationError(f"frobenius twist has shape {f0.shape}, expected {(d, d)}")
    try:
        order_f0 = matrix_order(f0)
    except LatticeError as exc:
        raise SpecValidationError(f"frobenius twist: {exc}") from None
    if not rd.permutes_roots(f0):
        raise SpecValidationError("frobenius twist does not permute the roots of G")

    section = right_inverse(restriction)
    f0_h = restriction @ f0 @ section
    if restriction @ f0 != f0_h @ restriction:
        raise SpecValidationError(
            "kernel of the restriction is not stable under the frobenius twist; "
            "H^0 is not defined over F_q"
        )
    order_f0_h = matrix_order(f0_h)

    gens = tuple(gamma_generators)
    for g in gens:
        if g.shape != (h, h):
            raise SpecValidationError(f"gamma generator of shape {g.shape} does not act on Z^{h}")
        if abs(det(g)) != 1:
            raise SpecValidationError(f"gamma generator {g!r} is not invertible over Z")
    try:
        gamma = tuple(close_group(gens or (IntMatrix.identity(h),), GAMMA_CAP))
    except LatticeError as exc:
        raise SpecValidationError(f"gamma is not a finite group: {exc}") from None

    members = set(gamma)
    f0_h_inv = unimodular_inverse(f0_h)
    for g in gamma:
        if f0_h @ g @ f0_h_inv not in members:
            raise SpecValidationError("frobenius twist on H^0 does not normalize gamma")

    spec = HomogeneousSpec(rd, restriction, gens, f0, gamma, f0_h, order_f0, order_f0_h, name)
    log.debug("validated %s: |Gamma|=%d, period=%d", name or "spec", len(gamma), spec.period)
    return spec


def _molien_pair(spec: HomogeneousSpec, residue: int) -> tuple[RatFunc, RatFunc]:
    key = ("molien", residue % spec.period)
    if key not in spec._cache:
        k = residue % spec.period
        a = molien_trace(spec.gamma, spec.f0_h ** (-k), check_closed=False)
        b = molien_trace(enumerate_weyl(spec.group), spec.f0 ** (-k), check_closed=False)
        spec._cache[key] = (a, b)
    return spec._cache[key]


def count_polynomial(spec: HomogeneousSpec, residue: int) -> RatPoly:
    """P_k(s) with |X(F_{q^n})| = P_k(q^n) whenever n = k mod period."""
    if not 0 <= residue < spec.period:
        raise ValueError(f"residue {residue} outside 0..{spec.period - 1}")
    key = ("poly", residue)
    if key in spec._cache:
        return spec._cache[key]
    a, b = _molien_pair(spec, residue)
    p = (a / b).reciprocal_times_power(spec.dim_x)
    if not p.is_polynomial():
        raise ConsistencyCheckError("polynomial", f"residue {residue}: count is not polynomial ({p!r})")
    poly = p.as_polynomial()
    if not poly.is_integral():
        raise ConsistencyCheckError("polynomial", f"residue {residue}: non-integral polynomial {poly}")
    if poly.degree != spec.dim_x or poly.lead != 1:
        raise ConsistencyCheckError(
            "polynomial", f"residue {residue}: {poly} is not monic of degree {spec.dim_x}"
        )
    spec._cache[key] = poly
    return poly


def is_prime_power(q: int) -> bool:
    return q >= 2 and len(factorint(q)) == 1


def count_at(spec: HomogeneousSpec, q: int, n: int, *, check: bool = True) -> int:
    """|X(F_{q^n})| from fixed-point orders of twisted Frobenius on H^0."""
    if not is_prime_power(q):
        raise ValueError(f"q = {q} is not a prime power")
    if n < 1:
        raise ValueError("n must be positive")
    qn = q ** n
    g_order = group_order_poly(spec.group, spec.f0, n % spec.order_f0)(qn)
    frob = spec.f0_h.scale(q) ** n
    ident = IntMatrix.identity(spec.h)
    total = Fraction(0)
    for g in spec.gamma:
        fixed = abs(det(g @ frob - ident))
        total += Fraction(g_order, fixed)
    total /= len(spec.gamma)
    if total.denominator != 1:
        raise ConsistencyCheckError("fixed-points", f"orbit average {total} at q={q}, n={n} is not an integer")
    count = int(total)
    if check:
        expected = count_polynomial(spec, n % spec.period)(qn)
        if expected != count:
            raise ConsistencyCheckError(
                "polynomial", f"q={q}, n={n}: fixed-point count {count} != polynomial value {expected}"
            )
    return count


def factorize(spec: HomogeneousSpec) -> tuple[int, RatPoly]:
    """(r, Q) with P_0(s) = (s-1)^r s^(dim-r) Q(1/s), Q having non-negative integer coefficients."""
    if "factor" in spec._cache:
        return spec._cache["factor"]
    r = spec.rank - spec.h
    a, b = _molien_pair(spec, 0)
    ratio = a / (b * one_minus_t_pow(1, r))
    if not ratio.is_polynomial():
        raise ConsistencyCheckError("factorization", f"Hilbert-series ratio is not polynomial: {ratio!r}")
    q_x = ratio.as_polynomial()
    if not q_x.is_integral() or any(c < 0 for c in q_x):
        raise ConsistencyCheckError("factorization", f"Q = {q_x} has a negative or non-integral coefficient")
    rhs = q_x_to_count(q_x, r, spec.dim_x)
    p0 = count_polynomial(spec, 0)
    if rhs != p0:
        raise ConsistencyCheckError("factorization", f"(s-1)^{r} s^(dim-r) Q(1/s) = {rhs} differs from P_0 = {p0}")
    spec._cache["factor"] = (r, q_x)
    return r, q_x


def q_x_to_count(q_x: RatPoly, r: int, dim: int) -> RatPoly:
    """(s-1)^r * s^(dim-r) * Q(1/s) as a polynomial in s."""
    core = RatFunc(q_x).reciprocal_times_power(dim - r)
    if not core.is_polynomial():
        raise ConsistencyCheckError("factorization", f"s^{dim - r} Q(1/s) is not polynomial for Q = {q_x}")
    return core.as_polynomial() * RatPoly((-1, 1)) ** r


def shift_certificates(polys: Sequence[RatPoly]) -> list[RatPoly]:
    """P(t+1) for each P, all of whose coefficients must be non-negative."""
    out = []
    for k, p in enumerate(polys):
        s = shift_poly(p, 1)
        if any(c < 0 for c in s):
            raise ConsistencyCheckError("shift-positivity", f"P_{k}(t+1) = {s} has a negative coefficient")
        out.append(s)
    return out


def period_bound(rank: int) -> int:
    """lcm of all n with Euler phi(n) <= rank."""
    if rank < 1:
        raise ValueError("rank must be positive")
    # phi(n) >= sqrt(n/2), so n <= 2 rank^2
    return lcm(*(n for n in range(1, 2 * rank * rank + 2) if totient(n) <= rank))


@dataclass(frozen=True)
class CountingResult:
    period: int
    minimal_period: int
    dim_x: int
    polys: tuple[RatPoly, ...]
    factor_r: int
    q_x: RatPoly
    shifted: tuple[RatPoly, ...]
    period_bound: int
    name: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "period": self.period,
            "minimal_period": self.minimal_period,
            "period_bound": self.period_bound,
            "dim": self.dim_x,
            "polynomials": [
                {"residue": k, "coeffs": p.to_json()} for k, p in enumerate(self.polys)
            ],
            "factorization": {"r": self.factor_r, "Q": self.q_x.to_json()},
            "shifted": [p.to_json() for p in self.shifted],
            "checks": {"polynomial": True, "factorization": True, "shift-positivity": True},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CountingResult":
        polys = sorted(data["polynomials"], key=lambda e: e["residue"])
        return cls(
            period=int(data["period"]),
            minimal_period=int(data["minimal_period"]),
            dim_x=int(data["dim"]),
            polys=tuple(RatPoly.from_json(e["coeffs"]) for e in polys),
            factor_r=int(data["factorization"]["r"]),
            q_x=RatPoly.from_json(data["factorization"]["Q"]),
            shifted=tuple(RatPoly.from_json(c) for c in data["shifted"]),
            period_bound=int(data.get("period_bound", 0)),
            name=str(data.get("name", "")),
        )

    def poly_for(self, n: int) -> RatPoly:
        return self.polys[n % self.period]


def minimal_period(polys: Sequence[RatPoly]) -> int:
    n = len(polys)
    for m in range(1, n + 1):
        if n % m == 0 and all(polys[k] == polys[k % m] for k in range(n)):
            return m
    return n


def count_all(spec: HomogeneousSpec) -> CountingResult:
    n = spec.period
    polys = tuple(count_polynomial(spec, k) for k in range(n))
    bound = period_bound(max(spec.rank, 1))
    if bound % n:
        raise ConsistencyCheckError("period", f"period {n} does not divide the a priori bound {bound}")
    r, q_x = factorize(spec)
    exponent, _ = extract_unit_factor(polys[0])
    if exponent < r or (q_x(1) != 0 and exponent != r):
        raise ConsistencyCheckError(
            "factorization", f"P_0 has (t-1)-exponent {exponent}, expected {r} (Q(1) = {q_x(1)})"
        )
    shifted = tuple(shift_certificates(polys))
    return CountingResult(
        period=n,
        minimal_period=minimal_period(polys),
        dim_x=spec.dim_x,
        polys=polys,
        factor_r=r,
        q_x=q_x,
        shifted=shifted,
        period_bound=bound,
        name=spec.name,
    )

