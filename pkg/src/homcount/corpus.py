"""Bundled example specs and the builders that generate them."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .specfile import SpecFile, parse_spec_text
from .weyl import build_root_datum


def _mat(rows) -> list[list[str]]:
    return [[str(x) for x in r] for r in rows]


def _ident(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def gl2r_h_r(r: int) -> dict:
    """GL(2r)/H_r: split r-torus t.e_{+-i} = t_i^{+-1} e_{+-i}, extended by the swap e_i <-> e_{-i}.

    The character lattice of GL(2r) is ordered along (e_1..e_r, e_-r..e_-1).
    """
    n = 2 * r
    rows = [[0] * n for _ in range(r)]
    for i in range(r):
        rows[i][i] = 1
        rows[i][n - 1 - i] = -1
    minus = [[-1 if i == j else 0 for j in range(r)] for i in range(r)]
    return {
        "group": {"preset": "GL", "n": n},
        "subtorus_restriction": _mat(rows),
        "gamma_generators": [_mat(minus)],
        "metadata": {
            "name": f"gl2r_h_r{r}",
            "description": f"GL({n}) modulo the r={r} torus extended by inversion",
            "oracle": {"case": "glr", "r": r},
        },
    }


def normalizer_of_torus(preset: str, n: int) -> dict:
    """G/N(T): restriction is the identity and Gamma is W acting on the characters."""
    rd = build_root_datum(preset, n)
    gens = [rd.reflection(i).to_rows() for i in range(rd.semisimple_rank)]
    return {
        "group": {"preset": preset, "n": n},
        "subtorus_restriction": _mat(_ident(rd.rank)),
        "gamma_generators": [_mat(g) for g in gens],
    }


def maximal_torus(preset: str, n: int) -> dict:
    rd = build_root_datum(preset, n)
    return {
        "group": {"preset": preset, "n": n},
        "subtorus_restriction": _mat(_ident(rd.rank)),
        "gamma_generators": [],
    }


def _with_meta(doc: dict, name: str, description: str, oracle: dict | None = None) -> dict:
    meta = {"name": name, "description": description}
    if oracle:
        meta["oracle"] = oracle
    doc = dict(doc)
    doc["metadata"] = meta
    return doc


def build_corpus() -> dict[str, dict]:
    docs = {
        "sl2_mod_torus": _with_meta(
            maximal_torus("SL", 2), "sl2_mod_torus",
            "SL(2)/T: ordered pairs of distinct points of P^1", {"case": "p1pairs", "mode": "ordered"}),
        "sl2_mod_normalizer": _with_meta(
            normalizer_of_torus("SL", 2), "sl2_mod_normalizer",
            "SL(2)/N(T), i.e. T extended by Gamma = {+-1}: unordered pairs of distinct points of P^1",
            {"case": "p1pairs", "mode": "unordered_variety"}),
        "conic_torus": {
            "group": {"preset": "Torus", "n": 1},
            "subtorus_restriction": [],
            "gamma_generators": [],
            "frobenius_twist": _mat([[-1]]),
            "metadata": {
                "name": "conic_torus",
                "description": "non-split rank-one torus, the affine conic x^2 - a y^2 = 1 with a a non-square",
                "oracle": {"case": "conic"},
            },
        },
        "gl2_mod_torus": _with_meta(maximal_torus("GL", 2), "gl2_mod_torus", "GL(2)/T"),
        "gl2_mod_normalizer": _with_meta(normalizer_of_torus("GL", 2), "gl2_mod_normalizer", "GL(2)/N(T)"),
        "sl3_mod_torus": _with_meta(maximal_torus("SL", 3), "sl3_mod_torus", "SL(3)/T"),
        "sl3_mod_normalizer": _with_meta(normalizer_of_torus("SL", 3), "sl3_mod_normalizer", "SL(3)/N(T)"),
        "su3_mod_torus": _with_meta(
            dict(maximal_torus("SL", 3), frobenius_twist=_mat([[0, 1], [1, 0]])),
            "su3_mod_torus", "quasi-split unitary SU(3) modulo a maximally split torus"),
        "sp4_mod_torus": _with_meta(maximal_torus("Sp", 4), "sp4_mod_torus", "Sp(4)/T"),
        "pgl2": _with_meta(
            {"group": {"preset": "GL", "n": 2}, "subtorus_restriction": _mat([[1, 1]]), "gamma_generators": []},
            "pgl2", "GL(2) modulo its centre"),
        "torus2_order3": {
            "group": {"preset": "Torus", "n": 2},
            "subtorus_restriction": [],
            "gamma_generators": [],
            "frobenius_twist": _mat([[0, -1], [1, -1]]),
            "metadata": {
                "name": "torus2_order3",
                "description": "rank-two torus split by a cubic extension",
                "oracle": {"case": "twisted-torus"},
            },
        },
    }
    for r in (1, 2, 3):
        docs[f"gl2r_h_r{r}"] = gl2r_h_r(r)
    return docs


def corpus_names() -> list[str]:
    files = resources.files("homcount") / "corpus"
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def load(name: str) -> SpecFile:
    name = name[:-5] if name.endswith(".json") else name
    res = resources.files("homcount") / "corpus" / f"{name}.json"
    if not res.is_file():
        raise FileNotFoundError(f"no bundled spec named {name!r}")
    return parse_spec_text(res.read_text(encoding="utf-8"), f"{name}.json")


def write_corpus(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, doc in build_corpus().items():
        path = directory / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        out.append(path)
    return out


def from_dict(doc: dict, source: str = "") -> SpecFile:
    return parse_spec_text(json.dumps(doc), source)
