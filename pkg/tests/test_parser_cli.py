import json
import subprocess
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissonlab.cli import main
from poissonlab.multivector import Multivector
from poissonlab.parser import (
    ParseError,
    parse_multivector,
    parse_poly,
    parse_problem_file,
    parse_rational,
)
from poissonlab.polyalg import VarContext
from poissonlab.report import generic_specialization
from support import AXES_CTX, AXES_PI_TEXT, axes_pi, multivectors, polys

DATA = resources.files("poissonlab") / "data"
GOLDEN = Path(__file__).parent / "golden" / "three_axes_report.json"


def data_file(name):
    return str(DATA / name)


def run_cli(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "poissonlab.cli", *argv],
        capture_output=True, text=True, timeout=60,
    )
    return proc.returncode, proc.stdout, proc.stderr


# expressions

def test_parse_example_bivector():
    pi = parse_multivector(AXES_PI_TEXT, AXES_CTX, degree=2)
    assert pi[(1, 2)] == parse_poly("c12*x1*x2", AXES_CTX)
    assert pi[(2, 1)] == -parse_poly("c12*x1*x2", AXES_CTX)
    assert len(pi.components) == 3


def test_zero_bivector():
    assert parse_multivector("0", AXES_CTX, degree=2) == Multivector.zero(AXES_CTX, 2)


def test_repeated_derivation_is_an_error():
    with pytest.raises(ParseError) as err:
        parse_multivector("x1 * d1^d1", AXES_CTX, degree=2)
    assert "repeated derivation index" in err.value.message
    assert (err.value.line, err.value.column) == (1, 8)


def test_wedge_order_and_sign():
    assert parse_multivector("d2^d1", AXES_CTX) == -parse_multivector("d1^d2", AXES_CTX)


def test_rationals():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_poly("1/2*x1 + 2/4*x1", AXES_CTX) == parse_poly("x1", AXES_CTX)
    with pytest.raises(ParseError):
        parse_rational("1/0")


@pytest.mark.parametrize("text, column, fragment", [
    ("x1 +", 5, "expected"),
    ("x1 * * x2", 6, "expected"),
    ("y7 + x1", 1, "undeclared"),
    ("x1 * d4", 6, "out of range"),
    ("(x1 + x2", 9, "expected"),
    ("x1 $ x2", 4, "unexpected character"),
    ("d1^2", 3, "power"),
])
def test_positioned_errors(text, column, fragment):
    with pytest.raises(ParseError) as err:
        parse_multivector(text, AXES_CTX)
    assert err.value.line == 1
    assert err.value.column == column
    assert fragment in str(err.value)


def test_mixed_degree_rejected():
    with pytest.raises(ParseError):
        parse_multivector("x1*d1 + d1^d2", AXES_CTX)
    with pytest.raises(ParseError):
        parse_multivector("d1", AXES_CTX, degree=2)


@settings(max_examples=150, deadline=None)
@given(polys(AXES_CTX, max_degree=3, max_terms=5, with_params=True))
def test_poly_round_trip(p):
    text = str(p)
    assert parse_poly(text, AXES_CTX) == p
    assert str(parse_poly(text, AXES_CTX)) == text


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 2).flatmap(lambda k: multivectors(AXES_CTX, k, max_degree=2)))
def test_multivector_round_trip(m):
    text = str(m)
    again = parse_multivector(text, AXES_CTX, degree=m.degree if m else None)
    assert again == m or (m.is_zero() and again.is_zero())
    assert str(again) == text


def test_parametric_round_trip():
    Z = parse_multivector("(-c12 - c13)*x1*d1 + (c12 - c23)*x2*d2 + (c13 + c23)*x3*d3", AXES_CTX)
    assert str(Z) == "(-c12 - c13)*x1*d1 + (c12 - c23)*x2*d2 + (c13 + c23)*x3*d3"
    assert parse_multivector(str(Z), AXES_CTX) == Z


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="x123cd+-*/^() 0", max_size=20))
def test_parser_totality(text):
    try:
        parse_multivector(text, AXES_CTX)
    except ParseError as err:
        assert err.line >= 1 and err.column >= 1


# problem files

def test_bundled_example_file():
    pf = parse_problem_file((DATA / "three_axes.poisson").read_text())
    assert pf.vars == ["x1", "x2", "x3"]
    assert pf.params == ["c12", "c13", "c23"]
    assert pf.pi == axes_pi()
    assert pf.specialize == {"c12": 1, "c13": 2, "c23": 3}
    assert sorted(pf.ideals) == ["L12", "L13", "L23"]


def test_problem_file_errors_are_positioned():
    text = "vars: x1, x2\nbivector: x1*d1^d2\nsubvariety A: x1 +\n"
    with pytest.raises(ParseError) as err:
        parse_problem_file(text)
    assert err.value.line == 3
    with pytest.raises(ParseError) as err:
        parse_problem_file("vars: x1\nbivector: x1\n")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_problem_file("vars: x1, x1\nbivector: 0\n")
    with pytest.raises(ParseError):
        parse_problem_file("vars: x1, d2\nbivector: 0\n")
    with pytest.raises(ParseError):
        parse_problem_file("bivector: 0\n")


def test_continuation_lines_and_comments():
    text = "vars: x1, x2, x3  # chart\nbivector: x1*d1^d2\n  + x2*d2^d3\n"
    pf = parse_problem_file(text)
    assert pf.pi == parse_multivector("x1*d1^d2 + x2*d2^d3", pf.ctx)


def test_generic_specialization_is_reproducible():
    a = generic_specialization(["c12", "c13", "c23"], 5)
    assert a == generic_specialization(["c12", "c13", "c23"], 5)
    assert len(set(a.values())) == 3
    assert all(v.denominator == 1 and 2 <= v <= 97 for v in a.values())


# command line

def test_report_matches_golden(capsysbinary):
    assert main(["report", "--input", data_file("three_axes.poisson"), "--format", "json"]) == 0
    out = capsysbinary.readouterr().out
    assert out == GOLDEN.read_bytes()


def test_golden_content():
    doc = json.loads(GOLDEN.read_text())
    res = doc["results"]
    assert doc["schema"] == "poissonlab-report/1"
    assert res["modular_field"]["specialized"] == "-3*x1*d1 - 2*x2*d2 + 5*x3*d3"
    assert res["strata"][0]["dimension"] == 1
    res0, res1 = res["residues"]
    assert res0["restrictions"] == {"L12": "5*x3*d3", "L13": "-2*x2*d2", "L23": "-3*x1*d1"}
    assert res1["value"] == "0"
    assert res["bondal"]["rows"][0]["verdict"] == "meets_bound"


def test_bracket_command(capsys):
    assert main(["bracket", "x1", "x2", "--input", data_file("three_axes.poisson"), "--specialize", "c12=1"]) == 0
    # an explicit partial specialization keeps the rest symbolic
    assert "x1*x2" in capsys.readouterr().out
    code, out, _ = run_cli("bracket", "x1", "x2", "--input", data_file("sl2.poisson"))
    assert code == 0 and "x3" in out


def test_bracket_symbolic(tmp_path, capsys):
    f = tmp_path / "ex.poisson"
    f.write_text("vars: x1, x2, x3\nparams: c12, c13, c23\nbivector: " + AXES_PI_TEXT + "\n")
    assert main(["bracket", "x1", "x2", "--input", str(f), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"]["bracket"] == "c12*x1*x2"


@pytest.mark.parametrize("name, code", [
    ("negative_nonjacobi.poisson", 1),
    ("negative_repeated_index.poisson", 2),
    ("negative_not_flat.poisson", 1),
])
def test_negative_files(name, code):
    got, out, err = run_cli("report", "--input", data_file(name))
    assert got == code, err


def test_verify_prints_trivector():
    code, out, _ = run_cli("verify", "--input", data_file("negative_nonjacobi.poisson"))
    assert code == 1
    assert "2*x3*d1^d2^d3" in out


def test_missing_input_file(tmp_path):
    assert main(["verify", "--input", str(tmp_path / "nope.poisson")]) == 2


def test_bad_arguments():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_unknown_field_is_input_error():
    assert main(["foliation-check", "nothere", "--input", data_file("three_axes.poisson")]) == 2


def test_foliation_and_ham_solve_commands(capsys):
    path = data_file("three_axes.poisson")
    assert main(["foliation-check", "modular", "--input", path, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"]["foliation"]["in_foliation"] is False
    assert main(["ham-solve", "modular", "--input", path, "--max-degree", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"]["ham_solve"]["solution"] is None


def test_generic_seed_determinism(capsysbinary):
    path = data_file("three_axes.poisson")
    argv = ["report", "--input", path, "--specialize", "generic", "--seed", "3", "--format", "json"]
    main(argv)
    first = capsysbinary.readouterr().out
    main(argv)
    assert capsysbinary.readouterr().out == first
    doc = json.loads(first)
    assert doc["specialization"]["mode"] == "generic"
    assert doc["specialization"]["seed"] == 3


def test_empty_strata_table_present(tmp_path, capsys):
    f = tmp_path / "zero.poisson"
    f.write_text("vars: x1, x2\nbivector: 0\n")
    assert main(["strata", "--input", str(f)]) == 0
    out = capsys.readouterr().out
    assert "strata: 0 row(s)" in out
    assert "k  dim" in out
    assert main(["strata", "--input", str(f), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["results"]["strata"] == []


def test_text_report_expressions_parse_back(capsys):
    path = data_file("three_axes.poisson")
    main(["report", "--input", path])
    out = capsys.readouterr().out
    ctx = AXES_CTX
    for line in out.splitlines():
        if line.startswith("modular field"):
            text = line.split(": ", 1)[1]
            assert str(parse_multivector(text, ctx)) == text
        if "Res" in line and "=" in line:
            text = line.split("= ", 1)[1]
            assert str(parse_multivector(text, ctx)) == text


@pytest.mark.parametrize("name", ["three_axes.poisson", "sl2.poisson", "log_symplectic_4.poisson"])
def test_bundled_files_report_ok(name):
    code, out, err = run_cli("report", "--input", data_file(name))
    assert code == 0, err


def test_log_symplectic_file(capsys):
    assert main(["rank", "--input", data_file("log_symplectic_4.poisson"), "--format", "json"]) == 0
    res = json.loads(capsys.readouterr().out)["results"]
    assert res["rank"] == 4
    assert res["symplectic_type"] == "log-symplectic"
