"""Command-line entry point: ``homcount poly|factor|count|check|period|oracle|reduce``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from sympy import isprime

from . import corpus
from .arith import RatPoly, format_poly
from .engine import (
    CountingResult,
    SpecValidationError,
    ConsistencyCheckError,
    count_all,
    count_at,
    is_prime_power,
    period_bound,
)
from .lattice import IntMatrix, LatticeError, matrix_order
from .oracle import (
    MAX_TORUS_DOMAIN,
    OracleError,
    conic_count,
    flag_count,
    get_field,
    glr_closed_form,
    p1_pair_count,
    twisted_torus_count,
    twisted_torus_det,
)
from .reductions import ReductionError, ReductionTrace, parse_trace
from .specfile import SpecFile, SpecFileError, parse_spec_file, parse_spec_text
from .weyl import RootDatumError

log = logging.getLogger("homcount")

COMMANDS = ("poly", "factor", "count", "check", "period", "oracle", "reduce")
ORACLE_CASES = ("conic", "flags", "p1pairs", "twisted-torus", "glr")

# largest q^n handed to each brute-force comparison in `check`
ORACLE_LIMITS = {"p1pairs-ordered": 64, "p1pairs-unordered_variety": 9, "conic": 2048}


class CliError(Exception):
    def __init__(self, message: str, kind: str = "usage"):
        super().__init__(message)
        self.kind = kind


def load_spec(path: str) -> SpecFile:
    """A spec file on disk, or else a bundled corpus spec by name."""
    p = Path(path)
    if p.exists():
        return parse_spec_file(p)
    try:
        return corpus.load(p.name)
    except FileNotFoundError:
        raise CliError(f"no such spec file or bundled spec: {path}") from None


def _render_poly(p: RatPoly, fmt: str) -> str:
    return format_poly(p, "t", "latex" if fmt == "latex" else "text")


def prime_powers_upto(qmax: int) -> list[int]:
    return [q for q in range(2, qmax + 1) if is_prime_power(q)]


# --------------------------------------------------------------------------
# commands


def cmd_poly(args) -> tuple[object, int]:
    spec = load_spec(_need(args.input, "--input")).to_spec()
    res = count_all(spec)
    if args.format == "json":
        doc = res.to_json()
        if args.residue is not None:
            doc["polynomials"] = [e for e in doc["polynomials"] if e["residue"] == args.residue % res.period]
        return doc, 0
    residues = range(res.period) if args.residue is None else [args.residue % res.period]
    lines = []
    for k in residues:
        body = _render_poly(res.polys[k], args.format)
        if args.format == "latex":
            lines.append(rf"P_{{{k}}}(t) = {body} \qquad (n \equiv {k} \bmod {res.period})")
        else:
            lines.append(f"P_{k}(t) = {body}    [n = {k} mod {res.period}]")
    return "\n".join(lines), 0


def cmd_factor(args):
    spec = load_spec(_need(args.input, "--input")).to_spec()
    res = count_all(spec)
    if args.format == "json":
        return {
            "name": res.name,
            "dim": res.dim_x,
            "r": res.factor_r,
            "Q": res.q_x.to_json(),
            "P0": res.polys[0].to_json(),
        }, 0
    q = _render_poly(res.q_x, args.format)
    if args.format == "latex":
        return rf"P_X(t) = (t-1)^{{{res.factor_r}}}\, t^{{{res.dim_x - res.factor_r}}}\, Q_X(t^{{-1}}), \quad Q_X(t) = {q}", 0
    return f"r = {res.factor_r}\nQ_X(t) = {q}\nP_X(t) = {_render_poly(res.polys[0], 'text')}", 0


def cmd_count(args):
    spec = load_spec(_need(args.input, "--input")).to_spec()
    q, n = _need(args.q, "--q"), _need(args.n, "--n")
    value = count_at(spec, q, n)
    if args.format == "json":
        return {"name": spec.name, "q": q, "n": n, "residue": n % spec.period, "count": str(value)}, 0
    return str(value), 0


def cmd_period(args):
    spec = load_spec(_need(args.input, "--input")).to_spec()
    res = count_all(spec)
    doc = {
        "name": spec.name,
        "rank": spec.rank,
        "bound": period_bound(max(spec.rank, 1)),
        "period": res.period,
        "minimal_period": res.minimal_period,
    }
    doc["divides_bound"] = doc["bound"] % res.minimal_period == 0
    if args.format == "json":
        return doc, 0
    return "\n".join(f"{k}: {v}" for k, v in doc.items()), 0


def _check_entry(check, ok, **info):
    entry = {"check": check, "pass": bool(ok)}
    entry.update({k: (str(v) if isinstance(v, int) and not isinstance(v, bool) else v) for k, v in info.items()})
    return entry


def run_checks(sf: SpecFile, qmax: int, nmax: int) -> list[dict]:
    checks = []
    try:
        spec = sf.to_spec()
        res = count_all(spec)
    except ConsistencyCheckError as exc:
        return [_check_entry(exc.check, False, message=str(exc))]
    checks.append(_check_entry("polynomial", True, period=res.period))
    checks.append(_check_entry("factorization", True, r=res.factor_r, Q=res.q_x.to_json()))
    checks.append(_check_entry("shift-positivity", True))
    checks.append(_check_entry(
        "period-bound", res.period_bound % res.minimal_period == 0,
        minimal_period=res.minimal_period, bound=res.period_bound))

    oracle = sf.metadata.get("oracle") or {}
    case = oracle.get("case")
    for q in prime_powers_upto(qmax):
        for n in range(1, nmax + 1):
            qn = q ** n
            expected = res.poly_for(n)(qn)
            try:
                fixed = count_at(spec, q, n, check=False)
            except ConsistencyCheckError as exc:
                checks.append(_check_entry("fixed-points", False, q=q, n=n, message=str(exc)))
                continue
            checks.append(_check_entry("fixed-points", fixed == expected, q=q, n=n, polynomial=expected, fixed_points=fixed))
            brute = _oracle_value(case, oracle, spec, q, n)
            if brute is not None:
                checks.append(_check_entry(f"oracle:{case}", brute == expected, q=q, n=n,
                                           polynomial=expected, oracle=brute))
    return checks


def _oracle_value(case, oracle, spec, q, n):
    qn = q ** n
    if case == "p1pairs":
        mode = oracle.get("mode", "ordered")
        if qn > ORACLE_LIMITS[f"p1pairs-{mode}"]:
            return None
        return p1_pair_count(get_field(qn), mode)
    if case == "conic":
        # a is a non-square of the prime field F_q; it stays one in F_{q^n} iff n is odd
        if q % 2 == 0 or not isprime(q) or qn > ORACLE_LIMITS["conic"]:
            return None
        base = get_field(q)
        a = next(x for x in range(1, q) if not base.is_square(x))
        return conic_count(a, 1, get_field(qn))
    if case == "glr":
        return glr_closed_form(int(oracle["r"]), qn)
    if case == "twisted-torus":
        if spec.h != 0 or spec.group.all_roots:
            return None
        a = spec.f0 ** n
        k = matrix_order(a)
        if (qn ** k - 1) ** a.rows > MAX_TORUS_DOMAIN:
            return None
        return twisted_torus_count(a, qn, k)
    return None


def cmd_check(args):
    sf = load_spec(_need(args.input, "--input"))
    qmax = args.qmax if args.qmax is not None else 3
    nmax = args.nmax if args.nmax is not None else 3
    checks = run_checks(sf, qmax, nmax)
    ok = all(c["pass"] for c in checks)
    doc = {"name": sf.name, "qmax": qmax, "nmax": nmax, "passed": ok,
           "failed": sum(not c["pass"] for c in checks), "checks": checks}
    if args.format == "json":
        return doc, 0 if ok else 1
    lines = [f"{'PASS' if c['pass'] else 'FAIL'}  {c['check']}"
             + "".join(f"  {k}={v}" for k, v in c.items() if k not in ("check", "pass"))
             for c in checks]
    lines.append(f"{sf.name}: {'all checks passed' if ok else str(doc['failed']) + ' check(s) failed'}")
    return "\n".join(lines), 0 if ok else 1


def cmd_oracle(args):
    case = args.case
    if case is None:
        raise CliError(f"oracle needs a case: {', '.join(ORACLE_CASES)}")
    meta, extra = {}, {}
    if case == "conic":
        f = get_field(_need(args.q, "--q"))
        value = conic_count(_need(args.a, "--a"), args.b if args.b is not None else 1, f)
        meta = f.metadata()
    elif case == "flags":
        f = get_field(_need(args.q, "--q"))
        dims = [int(x) for x in _need(args.dims, "--dims").split(",") if x.strip()]
        value = flag_count(f, _need(args.n, "--n"), dims)
        meta = f.metadata()
    elif case == "p1pairs":
        f = get_field(_need(args.q, "--q"))
        value = p1_pair_count(f, args.mode or "ordered")
        meta = f.metadata()
    elif case == "twisted-torus":
        a = IntMatrix.from_json(json.loads(_need(args.matrix, "--matrix")))
        q = _need(args.q, "--q")
        k = args.split_degree or matrix_order(a)
        value = twisted_torus_count(a, q, k)
        extra = {"det": str(twisted_torus_det(a, q)), "split_degree": k}
    elif case == "glr":
        value = glr_closed_form(_need(args.r, "--r"), _need(args.q, "--q"))
    else:
        raise CliError(f"unknown oracle case {case!r}; expected one of {', '.join(ORACLE_CASES)}")
    if args.format == "json":
        doc = {"case": case, "value": str(value), **extra}
        if meta:
            doc["field"] = meta
        return doc, 0
    return str(value), 0


def cmd_reduce(args):
    path = _need(args.input, "--input")
    trace_path = _need(args.trace, "--trace")
    text = Path(path).read_text(encoding="utf-8") if Path(path).exists() else None
    data = json.loads(text) if text is not None else None
    if isinstance(data, dict) and "polynomials" in data:
        res = CountingResult.from_json(data)
    else:
        sf = parse_spec_text(text, path) if text is not None else load_spec(path)
        res = count_all(sf.to_spec())
    steps = parse_trace(json.loads(Path(trace_path).read_text(encoding="utf-8")))
    out = []
    for k, p in enumerate(res.polys):
        reduced = ReductionTrace(p, steps).replay()
        out.append({"residue": k, "base": p.to_json(), "reduced": reduced.to_json()})
    if args.format == "json":
        return {"name": res.name, "steps": [s.to_json() for s in steps], "polynomials": out}, 0
    return "\n".join(
        f"P_{e['residue']}: {_render_poly(RatPoly.from_json(e['reduced']), args.format)}" for e in out
    ), 0


def _need(value, flag):
    if value is None:
        raise CliError(f"missing required option {flag}")
    return value


HANDLERS = {
    "poly": cmd_poly,
    "factor": cmd_factor,
    "count": cmd_count,
    "check": cmd_check,
    "period": cmd_period,
    "oracle": cmd_oracle,
    "reduce": cmd_reduce,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="homcount",
        description="Periodic point-count polynomials of homogeneous varieties G/H over finite fields.",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("case", nargs="?", help="oracle case: " + ", ".join(ORACLE_CASES))
    ap.add_argument("--input", help="spec file (or bundled spec name); for reduce also a result file")
    ap.add_argument("--q", type=int)
    ap.add_argument("--n", type=int)
    ap.add_argument("--qmax", type=int)
    ap.add_argument("--nmax", type=int)
    ap.add_argument("--residue", type=int)
    ap.add_argument("--format", choices=("json", "text", "latex"))
    ap.add_argument("--out", help="write output here instead of stdout")
    # oracle / reduce parameters
    ap.add_argument("--a", type=int, help="conic coefficient (field element code)")
    ap.add_argument("--b", type=int, help="conic right-hand side (default 1)")
    ap.add_argument("--dims", help="flag dimension profile, e.g. 1,2")
    ap.add_argument("--mode", choices=("ordered", "unordered_variety"))
    ap.add_argument("--matrix", help="twist matrix as JSON, e.g. [[0,1],[1,0]]")
    ap.add_argument("--split-degree", type=int)
    ap.add_argument("--r", type=int)
    ap.add_argument("--trace", help="reduction trace JSON file")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _emit(doc, fmt: str, out: str | None) -> None:
    text = json.dumps(doc, indent=2) if fmt == "json" else str(doc)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.format is None:
        args.format = "text" if args.command in ("count", "oracle") else "json"
    try:
        doc, status = HANDLERS[args.command](args)
    except (CliError, SpecFileError, SpecValidationError, RootDatumError, LatticeError,
            OracleError, ReductionError, ValueError, json.JSONDecodeError, OSError) as exc:
        err = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ConsistencyCheckError):
            err["check"] = exc.check
        if isinstance(exc, SpecFileError) and exc.line:
            err["line"] = exc.line
        sys.stdout.write(json.dumps({"error": err}, indent=2) + "\n")
        return 1
    _emit(doc, args.format, args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
