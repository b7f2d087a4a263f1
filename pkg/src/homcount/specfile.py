"""Reading homogeneous-space descriptions from JSON.

Document layout::

    {
      "group": {"preset": "GL", "n": 2},            # or raw rank/simple_roots/simple_coroots
      "subtorus_restriction": [["1", "-1"]],        # h x d, rows may be omitted when h = 0
      "gamma_generators": [[["-1"]]],               # list of h x h matrices, may be empty
      "frobenius_twist": [["1", "0"], ["0", "1"]],  # optional, d x d, default identity
      "metadata": {"name": "...", "description": "...", "oracle": {...}}
    }

Integers may be JSON numbers or decimal strings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .engine import HomogeneousSpec, validate_spec
from .lattice import IntMatrix, LatticeError
from .weyl import RootDatum, RootDatumError, build_root_datum

TOP_KEYS = {"group", "subtorus_restriction", "gamma_generators", "frobenius_twist", "metadata"}
META_KEYS = {"name", "description", "oracle"}


class SpecFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = ""):
        where = f"{source or '<spec>'}:{line}: " if line else (f"{source}: " if source else "")
        super().__init__(where + message)
        self.line = line
        self.raw_message = message


@dataclass
class SpecFile:
    group_json: dict
    group: RootDatum
    restriction: IntMatrix
    gamma_generators: list[IntMatrix]
    frobenius_twist: IntMatrix | None
    metadata: dict = field(default_factory=dict)
    source: str = ""

    @property
    def name(self) -> str:
        return self.metadata.get("name") or Path(self.source).stem

    def to_spec(self) -> HomogeneousSpec:
        return validate_spec(
            self.group, self.restriction, self.gamma_generators, self.frobenius_twist, name=self.name
        )

    def to_json(self) -> dict:
        doc = {
            "group": self.group_json,
            "subtorus_restriction": self.restriction.to_json(),
            "gamma_generators": [g.to_json() for g in self.gamma_generators],
        }
        if self.frobenius_twist is not None:
            doc["frobenius_twist"] = self.frobenius_twist.to_json()
        if self.metadata:
            doc["metadata"] = self.metadata
        return doc


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def parse_spec_text(text: str, source: str = "") -> SpecFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"malformed JSON: {exc.msg}", exc.lineno, source) from None

    def fail(msg, key):
        raise SpecFileError(msg, _line_of(text, key), source)

    if not isinstance(doc, dict):
        raise SpecFileError("top level must be a JSON object", 1, source)
    for key in doc:
        if key not in TOP_KEYS:
            fail(f"unknown key {key!r}", key)
    for key in ("group", "subtorus_restriction"):
        if key not in doc:
            raise SpecFileError(f"missing required key {key!r}", None, source)

    if not isinstance(doc["group"], dict):
        fail("group must be an object", "group")
    try:
        group = build_root_datum(doc["group"])
    except RootDatumError as exc:
        fail(str(exc), "group")
    d = group.rank

    def matrix(data, rows, cols, key, what):
        if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
            fail(f"{what} must be a list of rows", key)
        try:
            m = IntMatrix.from_json(data, cols=cols)
        except LatticeError as exc:
            fail(f"{what}: {exc}", key)
        if rows is not None and m.rows != rows:
            fail(f"{what} has {m.rows} rows, expected {rows}", key)
        return m

    restriction = matrix(doc["subtorus_restriction"], None, d, "subtorus_restriction",
                         f"subtorus_restriction (columns must match lattice rank {d})")
    h = restriction.rows

    gens_raw = doc.get("gamma_generators", [])
    if not isinstance(gens_raw, list):
        fail("gamma_generators must be a list of matrices", "gamma_generators")
    gens = []
    for i, g in enumerate(gens_raw):
        m = matrix(g, None, None if h == 0 else h, "gamma_generators", f"gamma generator {i}") if g else IntMatrix.identity(0)
        if m.shape != (h, h):
            fail(f"gamma generator {i} is {m.rows}x{m.cols} but acts on a rank-{h} lattice", "gamma_generators")
        gens.append(m)

    twist = None
    if "frobenius_twist" in doc:
        twist = matrix(doc["frobenius_twist"], d, d, "frobenius_twist", f"frobenius_twist ({d}x{d})")

    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        fail("metadata must be an object", "metadata")
    for key in meta:
        if key not in META_KEYS:
            fail(f"unknown metadata key {key!r}", key)

    return SpecFile(doc["group"], group, restriction, gens, twist, meta, source)


def parse_spec_file(path: str | Path) -> SpecFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise SpecFileError(f"cannot read spec file: {exc}", None, str(path)) from None
    return parse_spec_text(text, str(path))
