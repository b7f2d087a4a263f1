"""Composition of counting polynomials through the structural reduction steps.

The steps relate G/H to a reductive-by-toral core:

* ``unipotent(d)``: quotient by the unipotent radical multiplies by t^d,
* ``parabolic(flag)``: fibring over a flag variety G/P multiplies by its
  Poincare polynomial,
* ``normalizer_shift(m)``: passing from G/N_H back to G/H divides by t^m.

Step parameters are supplied by the caller; nothing here identifies radicals,
parabolics or normalizers from group data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .arith import RatPoly
from .weyl import build_root_datum, coset_poincare


class ReductionError(ValueError):
    pass


def unipotent_factor(p: RatPoly, d: int) -> RatPoly:
    if d < 0:
        raise ReductionError("unipotent dimension must be non-negative")
    return p * RatPoly.monomial(d)


def parabolic_factor(p: RatPoly, flag: RatPoly) -> RatPoly:
    if flag[0] != 1 or any(c < 0 or c.denominator != 1 for c in flag):
        raise ReductionError(f"{flag} is not a flag-variety Poincare polynomial")
    return p * flag


def normalizer_shift(p: RatPoly, m: int) -> RatPoly:
    if m < 0:
        raise ReductionError("shift must be non-negative")
    if any(p[k] != 0 for k in range(m)):
        raise ReductionError(f"t^{m} does not divide {p}")
    return RatPoly(p.coeffs[m:])


@dataclass(frozen=True)
class Step:
    kind: str  # "unipotent" | "parabolic" | "normalizer_shift"
    value: int | RatPoly

    def apply(self, p: RatPoly) -> RatPoly:
        if self.kind == "unipotent":
            return unipotent_factor(p, self.value)
        if self.kind == "parabolic":
            return parabolic_factor(p, self.value)
        if self.kind == "normalizer_shift":
            return normalizer_shift(p, self.value)
        raise ReductionError(f"unknown step kind {self.kind!r}")

    def to_json(self) -> dict:
        if self.kind == "parabolic":
            return {"step": "parabolic", "flag": self.value.to_json()}
        key = "d" if self.kind == "unipotent" else "m"
        return {"step": self.kind, key: self.value}

    @classmethod
    def from_json(cls, data: Mapping) -> "Step":
        kind = data.get("step")
        if kind == "unipotent":
            _only(data, {"step", "d"})
            return cls(kind, _nonneg(data["d"], "d"))
        if kind == "normalizer_shift":
            _only(data, {"step", "m"})
            return cls(kind, _nonneg(data["m"], "m"))
        if kind == "parabolic":
            if "flag" in data:
                _only(data, {"step", "flag"})
                return cls(kind, RatPoly.from_json(data["flag"]))
            _only(data, {"step", "group", "subset"})
            rd = build_root_datum(data["group"])
            return cls(kind, coset_poincare(rd, data.get("subset", [])))
        raise ReductionError(f"unknown reduction step {kind!r}")


def _only(data: Mapping, allowed: set) -> None:
    extra = set(data) - allowed
    if extra:
        raise ReductionError(f"unknown keys in reduction step: {sorted(extra)}")


def _nonneg(x, name: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise ReductionError(f"{name} must be a non-negative integer, got {x!r}")
    return x


@dataclass(frozen=True)
class ReductionTrace:
    base: RatPoly
    steps: tuple[Step, ...] = ()

    def replay(self) -> RatPoly:
        p = self.base
        for step in self.steps:
            p = step.apply(p)
        return p


def parse_trace(data: Sequence[Mapping]) -> tuple[Step, ...]:
    if not isinstance(data, list):
        raise ReductionError("a trace is a JSON list of steps")
    return tuple(Step.from_json(s) for s in data)
