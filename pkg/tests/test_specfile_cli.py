import json
import subprocess
import sys

import pytest

from homcount import corpus
from homcount.cli import main
from homcount.engine import CountingResult
from homcount.specfile import SpecFileError, parse_spec_file, parse_spec_text


def run(capsys, *argv):
    status = main(list(argv))
    return status, capsys.readouterr().out


def run_json(capsys, *argv):
    status, out = run(capsys, *argv)
    return status, json.loads(out)


# ---------------------------------------------------------------- spec files


def test_bundled_spec_parses():
    sf = corpus.load("sl2_mod_torus")
    assert sf.group.name == "SL(2)" and sf.restriction.shape == (1, 1)
    assert sf.to_spec().dim_x == 2


def test_gl4_preset():
    sf = parse_spec_text('{"group": {"preset": "GL", "n": 4}, "subtorus_restriction": [[1, 0, 0, 0]]}')
    assert sf.group.rank == 4 and len(sf.group.all_roots) == 12


def test_gamma_dimension_mismatch():
    text = """{
  "group": {"preset": "GL", "n": 2},
  "subtorus_restriction": [[1, 0], [0, 1]],
  "gamma_generators": [[[1, 0, 0], [0, 1, 0]]]
}"""
    with pytest.raises(SpecFileError) as info:
        parse_spec_text(text, "bad.json")
    assert info.value.line == 4
    assert "bad.json:4" in str(info.value)


@pytest.mark.parametrize("text,line,fragment", [
    ('{"group": {"preset": "GL", "n": 2},\n "subtorus_restriction": [],\n "colour": 1}', 3, "unknown key"),
    ('{"group": {"preset": "GL", "n": 2},\n "subtorus_restriction": [],\n "metadata": {"author": "x"}}', 3, "unknown metadata"),
    ('{"group": {"preset": "GL", "n": 2},\n "subtorus_restriction": [[1, 0, 0]]}', 2, "columns"),
    ('{"group": {"preset": "Q", "n": 2},\n "subtorus_restriction": []}', 1, "preset"),
    ('{"group": {"preset": "GL", "n": 2},\n "subtorus_restriction": [],\n "frobenius_twist": [[1]]}', 3, "2x2"),
    ('{"group": {"preset": "GL", "n": 2},\n "subtorus_restriction": [["x", 0]]}', 2, "integer"),
    ('{"group": {"preset": "GL", "n": 2},\n "subtorus_restriction": [[1, 0]],,}', 2, "malformed"),
])
def test_line_anchored_errors(text, line, fragment):
    with pytest.raises(SpecFileError, match=fragment) as info:
        parse_spec_text(text)
    assert info.value.line == line


def test_missing_keys_and_files(tmp_path):
    with pytest.raises(SpecFileError, match="missing"):
        parse_spec_text('{"group": {"preset": "GL", "n": 2}}')
    with pytest.raises(SpecFileError, match="top level"):
        parse_spec_text("[]")
    with pytest.raises(SpecFileError, match="cannot read"):
        parse_spec_file(tmp_path / "absent.json")


@pytest.mark.parametrize("name", corpus.corpus_names())
def test_spec_round_trip(name):
    sf = corpus.load(name)
    again = parse_spec_text(json.dumps(sf.to_json()))
    assert again.to_json() == sf.to_json()
    assert again.group == sf.group


def test_corpus_files_match_builders():
    built = corpus.build_corpus()
    assert sorted(built) == corpus.corpus_names()
    for name, doc in built.items():
        assert corpus.load(name).to_json() == parse_spec_text(json.dumps(doc)).to_json()


def test_write_corpus(tmp_path):
    paths = corpus.write_corpus(tmp_path)
    assert len(paths) == len(corpus.corpus_names())
    assert parse_spec_file(paths[0]).name


# ---------------------------------------------------------------- commands


def test_poly_example(capsys):
    status, doc = run_json(capsys, "poly", "--input", "sl2_mod_torus.json")
    assert status == 0
    assert [e["coeffs"] for e in doc["polynomials"]] == [["0", "1", "1"]]
    assert CountingResult.from_json(doc).to_json() == doc


def test_count_example(capsys):
    assert run(capsys, "count", "--input", "conic_torus.json", "--q", "3", "--n", "1") == (0, "4\n")


def test_check_example(capsys):
    status, doc = run_json(capsys, "check", "--input", "gl2r_h_r2.json", "--qmax", "3", "--nmax", "4")
    assert status == 0 and doc["passed"]
    kinds = {c["check"] for c in doc["checks"]}
    assert {"polynomial", "factorization", "shift-positivity", "fixed-points"} <= kinds
    assert any(c["check"].startswith("oracle") for c in doc["checks"])


@pytest.mark.parametrize("name", corpus.corpus_names())
def test_check_every_corpus_spec(capsys, name):
    status, doc = run_json(capsys, "check", "--input", name, "--qmax", "3", "--nmax", "2")
    assert status == 0, [c for c in doc["checks"] if not c["pass"]]


def test_deterministic_output(capsys):
    first = run(capsys, "poly", "--input", "su3_mod_torus")
    second = run(capsys, "poly", "--input", "su3_mod_torus")
    assert first == second


def test_factor_period_and_formats(capsys):
    status, doc = run_json(capsys, "factor", "--input", "gl2r_h_r1")
    assert (status, doc["r"], doc["Q"], doc["P0"]) == (0, 1, ["1"], ["0", "0", "-1", "1"])
    status, doc = run_json(capsys, "period", "--input", "conic_torus")
    assert (doc["bound"], doc["period"], doc["minimal_period"], doc["divides_bound"]) == (2, 2, 2, True)
    status, out = run(capsys, "poly", "--input", "conic_torus", "--format", "text")
    assert "P_0(t) = t - 1" in out and "P_1(t) = t + 1" in out
    status, out = run(capsys, "poly", "--input", "sl2_mod_torus", "--format", "latex")
    assert status == 0 and "t^{2}" in out
    status, doc = run_json(capsys, "poly", "--input", "conic_torus", "--residue", "3")
    assert [e["residue"] for e in doc["polynomials"]] == [1]


def test_out_flag(capsys, tmp_path):
    target = tmp_path / "res.json"
    status, out = run(capsys, "poly", "--input", "pgl2", "--out", str(target))
    assert status == 0 and out == ""
    assert json.loads(target.read_text())["dim"] == 3


@pytest.mark.parametrize("argv,expected", [
    (["oracle", "conic", "--q", "9", "--a", "2"], "8"),
    (["oracle", "flags", "--q", "3", "--n", "3", "--dims", "1,2"], "52"),
    (["oracle", "p1pairs", "--q", "3", "--mode", "unordered_variety"], "9"),
    (["oracle", "twisted-torus", "--q", "2", "--matrix", "[[0,1],[1,0]]"], "3"),
    (["oracle", "glr", "--r", "2", "--q", "2"], "11200"),
])
def test_oracle_command(capsys, argv, expected):
    assert run(capsys, *argv) == (0, expected + "\n")


def test_reduce_command(capsys, tmp_path):
    trace = tmp_path / "trace.json"
    trace.write_text(json.dumps([{"step": "unipotent", "d": 2}, {"step": "parabolic", "group": {"preset": "SL", "n": 2}, "subset": []}]))
    status, doc = run_json(capsys, "reduce", "--input", "sl2_mod_torus", "--trace", str(trace))
    assert status == 0
    # (t^2 + t) * t^2 * (1 + t)
    assert doc["polynomials"][0]["reduced"] == ["0", "0", "0", "1", "2", "1"]
    result = tmp_path / "res.json"
    main(["poly", "--input", "sl2_mod_torus", "--out", str(result)])
    status, doc2 = run_json(capsys, "reduce", "--input", str(result), "--trace", str(trace))
    assert doc2["polynomials"] == doc["polynomials"]


@pytest.mark.parametrize("argv,kind", [
    (["poly", "--input", "no_such_spec.json"], "CliError"),
    (["count", "--input", "conic_torus", "--q", "6", "--n", "1"], "ValueError"),
    (["count", "--input", "conic_torus"], "CliError"),
    (["oracle"], "CliError"),
    (["oracle", "conic", "--q", "3", "--a", "0"], "OracleError"),
])
def test_errors_are_machine_readable(capsys, argv, kind):
    status, doc = run_json(capsys, *argv)
    assert status == 1 and doc["error"]["type"] == kind


def test_spec_error_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n "group": {"preset": "GL", "n": 2},\n "subtorus_restriction": [[1, 0]],\n "extra": 1\n}')
    status, doc = run_json(capsys, "poly", "--input", str(bad))
    assert status == 1 and doc["error"]["line"] == 4


def test_theorem_check_error_tagged(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"group": {"preset": "Torus", "n": 1}, "subtorus_restriction": [[1]], "gamma_generators": [[[-1]]]}))
    status, doc = run_json(capsys, "poly", "--input", str(bad))
    assert status == 1 and doc["error"]["check"] == "polynomial"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "homcount.cli", "count", "--input", "sl2_mod_torus", "--q", "2", "--n", "1"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "6\n"
