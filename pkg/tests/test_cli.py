import json
import pathlib
import subprocess
import sys

import pytest

from skewcalc.cli import parse_algebra_file, print_algebra
from skewcalc.errors import ExprSyntaxError
from skewcalc.families import FamilySpec
from skewcalc.presentation import Presentation

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "src/skewcalc/fixtures"


def _run(*argv, inp=None):
    return subprocess.run(
        [sys.executable, "-m", "skewcalc.cli", *argv],
        capture_output=True, input=inp,
    )


def test_parse_print_parse_identity_on_all_fixtures():
    for path in sorted(FIXTURES.glob("*.alg")):
        obj = parse_algebra_file(path.read_text())
        text = print_algebra(obj)
        obj2 = parse_algebra_file(text)
        assert print_algebra(obj2) == text
        if isinstance(obj, Presentation):
            assert obj.describe() == obj2.describe()
        else:
            assert obj == obj2


def test_parse_family_stanza():
    spec = parse_algebra_file("family quantum_torus n=2 l=3 a12=1")
    assert isinstance(spec, FamilySpec)
    assert spec.family_id == "QUANTUM_TORUS"
    assert str(spec.field) == "cyclotomic(3)"


def test_parse_error_has_position():
    with pytest.raises(ExprSyntaxError) as err:
        parse_algebra_file(
            "algebra a {\n  field rational;\n  gens x, y;\n  rule x*y = ;\n}"
        )
    assert err.value.line >= 1 and err.value.col >= 1


def test_reports_are_byte_identical():
    a = _run("divisor", str(FIXTURES / "a1q.alg"),
             "--from", "x*y - y*x", "--degree-cap", "3", "--max-rounds", "2")
    b = _run("divisor", str(FIXTURES / "a1q.alg"),
             "--from", "x*y - y*x", "--degree-cap", "3", "--max-rounds", "2")
    assert a.returncode == 0
    assert a.stdout == b.stdout


def test_center_command_basis(tmp_path):
    out = _run("center", str(FIXTURES / "minusone.alg"), "--max-degree", "4")
    assert out.returncode == 0
    report = json.loads(out.stdout)
    assert report["format_version"] == 1
    assert report["result"]["basis"] == ["1", "y^2", "x^2", "y^4", "x^2*y^2", "x^4"]


def test_gkdim_snaps_for_weyl():
    out = _run("gkdim", str(FIXTURES / "weyl1.alg"), "--N", "12")
    report = json.loads(out.stdout)
    assert report["result"]["snap"] == 2
    assert isinstance(report["result"]["estimate"], float)


def test_exit_code_contract(tmp_path):
    # 1: usage
    assert _run("no-such-command").returncode == 1
    assert _run("center", str(FIXTURES / "weyl1.alg"),
                "--max-degree", "0").returncode == 1
    # 2: parse
    bad = tmp_path / "bad.alg"
    bad.write_text("algebra a { field rational; gens x; rule x*x = ; }")
    assert _run("check", str(bad)).returncode == 2
    # 3: validation
    invalid = tmp_path / "invalid.alg"
    invalid.write_text(
        "algebra a { field rational; gens x, y; rule y*x = x*y + x*y^2; }"
    )
    assert _run("check", str(invalid)).returncode == 3
    # 4: resource
    assert _run("divisor", str(FIXTURES / "poly2.alg"),
                "--from", "x", "--degree-cap", "100").returncode == 4
    # 0: success
    assert _run("check", str(FIXTURES / "poly2.alg")).returncode == 0


def test_text_format_and_seed_flag():
    out = _run("check", str(FIXTURES / "a1q.alg"), "--format", "text", "--seed", "5")
    assert out.returncode == 0
    assert b"format_version: 1" in out.stdout


def test_assert_flag_attaches():
    out = _run("certify", str(FIXTURES / "minusone.alg"),
               "--assert", "ML_FULL", "--degree-cap", "2", "--N", "8")
    report = json.loads(out.stdout)
    rules = {v["rule"] for v in report["result"]["verdicts"]}
    assert "R10" in rules


def test_registry_command():
    out = _run("registry")
    report = json.loads(out.stdout)
    ids = {f["id"] for f in report["result"]["fixtures"]}
    assert ids == {"ex5_5_1", "ex5_5_2"}
