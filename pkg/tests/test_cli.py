"""Command-line surface: exit codes, output formats, parse failures."""

import json
import subprocess
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
MONOID = str(REPO / "theories" / "monoid.ua")
PROJ_INJ = str(REPO / "theories" / "first_projection_injective.ua")
PROJ = str(REPO / "theories" / "first_projection.ua")


def ualg(*args, env=None):
    return subprocess.run([sys.executable, "-m", "ualg.cli", *args],
                          capture_output=True, text=True, env=env)


def test_delta_check_pass():
    p = ualg("delta", "check", "--family", "bijections", "--max", "4")
    assert p.returncode == 0
    assert "pass" in p.stdout


def test_delta_check_failure_exit_code():
    p = ualg("delta", "check", "--family", "increasing", "--max", "3")
    assert p.returncode == 2
    assert "similarity: FAIL" in p.stdout
    assert "component" in p.stdout


def test_delta_check_identities():
    p = ualg("delta", "check", "--family", "identities", "--max", "5")
    assert p.returncode == 0


def test_delta_check_json_lines():
    p = ualg("--format", "json-lines", "delta", "check",
             "--family", "bijections", "--max", "3")
    assert p.returncode == 0
    records = [json.loads(line) for line in p.stdout.splitlines()]
    assert {r["check"] for r in records} == {
        "identities", "composition", "coproduct", "similarity"}
    assert all(r["ok"] for r in records)


def test_ctx_rel():
    p = ualg("ctx", "rel", "--structure", "cartesian", "x y z", "y x y x x")
    assert p.returncode == 0 and p.stdout.strip() == "true"
    p = ualg("ctx", "rel", "--structure", "bijective", "x y z", "y z x")
    assert p.returncode == 0 and p.stdout.strip() == "true"
    p = ualg("ctx", "rel", "--structure", "trivial", "x y", "y x")
    assert p.returncode == 0 and p.stdout.strip() == "false"


def test_ctx_terminal():
    p = ualg("ctx", "terminal", "--structure", "left-surjective", "x y x")
    assert p.returncode == 0 and p.stdout.strip() == "x y"
    p = ualg("ctx", "terminal", "--structure", "injective", "x x")
    assert p.returncode == 1 and p.stdout.strip() == "none"


def test_prove_success_and_trace():
    p = ualg("prove", MONOID, "--goal",
             "mul(e,mul(x,y)) ~ mul(x,y) ctx [ x:M y:M ]",
             "--depth", "3", "--ctx", "3", "--rounds", "5")
    assert p.returncode == 0
    assert p.stdout.splitlines()[0] == "proved"
    assert "axiom lunit" in p.stdout


def test_prove_trace_is_stable():
    args = ("prove", MONOID, "--goal",
            "mul(e,mul(x,y)) ~ mul(x,y) ctx [ x:M y:M ]",
            "--depth", "3", "--ctx", "3", "--rounds", "5")
    assert ualg(*args).stdout == ualg(*args).stdout


def test_prove_refuted_by_invariant():
    p = ualg("prove", PROJ_INJ, "--goal", "f(x,y) ~ x ctx [ x:A y:A ]",
             "--depth", "3")
    assert p.returncode == 1
    assert p.stdout.strip() == "refuted-by-invariant"


def test_prove_inconclusive():
    p = ualg("prove", MONOID, "--goal",
             "mul(x,y) ~ mul(y,x) ctx [ x:M y:M ]", "--depth", "3")
    assert p.returncode == 1
    assert p.stdout.startswith("inconclusive (truncated:")


def test_countermodel_found_and_none():
    p = ualg("countermodel", PROJ, "--goal",
             "f(x,y) ~ f(y,x) ctx [ x:A y:A ]", "--max-size", "2")
    assert p.returncode == 0
    assert "carrier A = 2" in p.stdout
    assert "table f :" in p.stdout
    p = ualg("countermodel", MONOID, "--goal",
             "mul(x,y) ~ mul(y,x) ctx [ x:M y:M ]", "--max-size", "2")
    assert p.returncode == 1 and p.stdout.strip() == "none"


def test_universal_classes():
    p = ualg("universal", PROJ_INJ, "--hom", "A A -> A", "--depth", "2")
    assert p.returncode == 0
    head = p.stdout.splitlines()[0]
    count = int(head.split()[0])
    assert count >= 2


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.ua"
    bad.write_text("theory X\nstructure nonsense\n")
    p = ualg("prove", str(bad), "--goal", "x ~ x ctx [ x:M ]")
    assert p.returncode == 3
    assert "error:" in p.stderr
    p = ualg("prove", str(tmp_path / "missing.ua"), "--goal", "x ~ x ctx []")
    assert p.returncode == 3


def test_bad_goal_exit_code():
    p = ualg("prove", MONOID, "--goal", "mul(x) ~ x ctx [ x:M ]")
    assert p.returncode == 3


def test_selftest_subset():
    p = ualg("selftest", "--only", "2,4")
    assert p.returncode == 0
    assert "criterion  2 [pass]" in p.stdout
    assert "criterion  4 [pass]" in p.stdout
    assert "all checks passed" in p.stdout
