"""Exact univariate polynomials and rational functions over Q.

Rationals are :class:`fractions.Fraction`. Polynomials are stored as a tuple
of coefficients in ascending degree with no trailing zeros, so the zero
polynomial is the empty tuple and two equal polynomials are equal tuples.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, lcm
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact rational")


class RatPoly:
    """Polynomial in one variable with rational coefficients (immutable)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RatPoly is immutable")

    # constructors

    @classmethod
    def const(cls, c: Number) -> "RatPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> "RatPoly":
        if k < 0:
            raise ValueError("negative exponent")
        return cls([0] * k + [c])

    @classmethod
    def t(cls) -> "RatPoly":
        return cls((0, 1))

    # basic structure

    @property
    def degree(self) -> int:
        """Degree, with -1 standing for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("RatPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_poly(self)

    # arithmetic

    @staticmethod
    def _coerce(x) -> "RatPoly":
        if isinstance(x, RatPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return RatPoly.const(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return RatPoly(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RatPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RatPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = RatPoly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Number) -> "RatPoly":
        c = _frac(c)
        return RatPoly(c * x for x in self.coeffs)

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead_inv = 1 / other.lead
        quot = [Fraction(0)] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k] * lead_inv
            if c == 0:
                continue
            quot[k - db] = c
            for j, y in enumerate(other.coeffs):
                rem[k - db + j] -= c * y
        return RatPoly(quot), RatPoly(rem[:db] if db > 0 else [])

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[1]

    def monic(self) -> "RatPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lead)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if isinstance(acc, Fraction) and acc.denominator == 1:
            return int(acc)
        return acc

    def compose(self, other: "RatPoly") -> "RatPoly":
        acc = RatPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def reversed(self, length: int | None = None) -> "RatPoly":
        """Return ``t**(length-1) * p(1/t)``; ``length`` defaults to ``len(p)``."""
        n = len(self.coeffs) if length is None else length
        if n < len(self.coeffs):
            raise ValueError("reversal length shorter than the polynomial")
        padded = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        return RatPoly(reversed(padded))

    def valuation(self) -> int:
        """Exponent of the largest power of t dividing a nonzero polynomial."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        raise ValueError("valuation of the zero polynomial")

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError(f"non-integral polynomial {self}")
        return [int(c) for c in self.coeffs]

    def derivative(self) -> "RatPoly":
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "RatPoly":
        return cls(_frac(c) if not isinstance(c, float) else _reject_float(c) for c in data)


def _reject_float(x):
    raise TypeError(f"floating point coefficient {x!r} not accepted; use a decimal string")


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic gcd; gcd(0, 0) is 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


ONE = RatPoly.const(1)
T = RatPoly.t()


def one_minus_t_pow(k: int, e: int = 1) -> RatPoly:
    """(1 - t**k)**e."""
    return (ONE - RatPoly.monomial(k)) ** e


class RatFunc:
    """Reduced quotient ``num/den`` of polynomials with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: RatPoly, den: RatPoly = ONE, *, _reduced: bool = False):
        if not _reduced:
            num, den = _normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def _coerce(x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, RatPoly):
            return RatFunc(x, ONE, _reduced=True)
        if isinstance(x, (int, Fraction)):
            return RatFunc(RatPoly.const(x), ONE, _reduced=True)
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RatFunc", self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({format_poly(self.num)!r}, {format_poly(self.den)!r})"

    def __add__(self, other):
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        a, b = self.den // g, other.den // g
        return RatFunc(self.num * b + other.num * a, a * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc(RatPoly())
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        return RatFunc(
            (self.num // g1) * (other.num // g2), (self.den // g2) * (other.den // g1)
        )

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc._coerce(other) * self.inverse()

    def scale(self, c: Number) -> "RatFunc":
        return RatFunc(self.num.scale(c), self.den)

    def is_polynomial(self) -> bool:
        return self.den == ONE

    def as_polynomial(self) -> RatPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self!r} is not a polynomial")
        return self.num

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("pole of rational function")
        v = Fraction(self.num(x)) / Fraction(d)
        return int(v) if v.denominator == 1 else v

    def reciprocal_times_power(self, m: int) -> "RatFunc":
        """Return ``s**m * f(1/s)`` as a rational function of s."""
        if self.num.is_zero():
            return self
        num_rev = self.num.reversed()
        den_rev = self.den.reversed()
        shift = m - self.num.degree + self.den.degree
        if shift >= 0:
            return RatFunc(num_rev * RatPoly.monomial(shift), den_rev)
        return RatFunc(num_rev, den_rev * RatPoly.monomial(-shift))

    def series(self, order: int) -> list[Fraction]:
        """Power-series coefficients of t**0 .. t**(order-1) about t = 0."""
        c0 = self.den[0]
        if c0 == 0:
            raise ValueError("denominator vanishes at 0; no power-series expansion")
        den = self.den.coeffs
        out: list[Fraction] = []
        for k in range(order):
            acc = self.num[k]
            for j in range(1, min(k, len(den) - 1) + 1):
                acc -= den[j] * out[k - j]
            out.append(acc / c0)
        return out


def _normalize(num: RatPoly, den: RatPoly) -> tuple[RatPoly, RatPoly]:
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return RatPoly(), ONE
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, den = num // g, den // g
    lead = den.lead
    if lead != 1:
        num, den = num.scale(1 / lead), den.scale(1 / lead)
    return num, den


def ratfunc_normalize(num: RatPoly, den: RatPoly) -> RatFunc:
    """Reduce ``num/den`` to lowest terms with a monic denominator."""
    return RatFunc(num, den)


def extract_unit_factor(p: RatPoly) -> tuple[int, RatPoly]:
    """Split off the largest power of ``t - 1``: ``p = (t-1)**r * q`` with ``q(1) != 0``."""
    if p.is_zero():
        raise ValueError("zero polynomial has no (t-1)-adic valuation")
    r = 0
    unit = RatPoly((-1, 1))
    while p(1) == 0:
        p, rem = p.divmod(unit)
        assert rem.is_zero()
        r += 1
    return r, p


def shift_poly(p: RatPoly, c: Number) -> RatPoly:
    """Return the polynomial ``t -> p(t + c)``."""
    c = _frac(c)
    n = len(p.coeffs)
    out = [Fraction(0)] * n
    # sum_k a_k (t + c)^k expanded binomially
    for k, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j in range(k + 1):
            out[j] += a * comb(k, j) * c ** (k - j)
    return RatPoly(out)


def clear_denominators(p: RatPoly) -> tuple[int, RatPoly]:
    """Smallest positive ``m`` with ``m*p`` integral, and ``m*p``."""
    m = 1
    for c in p.coeffs:
        m = lcm(m, c.denominator)
    return m, p.scale(m)


def format_poly(p: RatPoly, var: str = "t", style: str = "text") -> str:
    """Render in descending degree, e.g. ``t^2 + t`` or LaTeX ``t^{2} + t``."""
    if p.is_zero():
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if style == "latex" and a.denominator != 1:
            mag = rf"\frac{{{a.numerator}}}{{{a.denominator}}}"
        else:
            mag = str(a)
        if k == 0:
            body = mag
        else:
            if style == "latex":
                power = var if k == 1 else f"{var}^{{{k}}}"
            else:
                power = var if k == 1 else f"{var}^{k}"
            body = power if a == 1 else (f"{mag} {power}" if style == "latex" else f"{mag}*{power}")
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
