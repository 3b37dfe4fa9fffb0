import json
import os
import re
import subprocess
from pathlib import Path

import pytest

BIN = os.environ["HORN_FORGE_BIN"]
CORPUS = Path(os.environ["HORN_FORGE_CORPUS"])


def hf(*args):
    return subprocess.run([BIN, *map(str, args)], capture_output=True, text=True)


def test_gen_prints_three_clauses():
    r = hf("gen", CORPUS / "p1.ts", "--schema", "safety-fwd")
    assert r.returncode == 0
    assert len(re.findall(r"^c\d+: ", r.stdout, re.M)) == 3


def test_gen_names_missing_roles():
    r = hf("gen", CORPUS / "p1.ts", "--schema", "exists-until")
    assert r.returncode == 4
    assert "missing roles: p, q" in r.stderr


def test_gen_emit_writes_horn_file(tmp_path):
    out = tmp_path / "out.smt2"
    r = hf("gen", CORPUS / "p1.ts", "--schema", "safety-fwd", "--emit", out)
    assert r.returncode == 0
    text = out.read_text()
    assert text.startswith("(set-logic HORN)")
    assert text.count("(assert ") == 3
    assert "(check-sat)" in text


def test_emit_rejects_wf():
    assert hf("emit", CORPUS / "p1.ts", "--schema", "termination").returncode == 4


def test_solve_exit_codes():
    r = hf("solve", CORPUS / "p1.ts", "--schema", "safety-fwd")
    assert r.returncode == 0
    assert r.stdout.startswith("SOLVED")
    assert "inv(x) :=" in r.stdout

    r = hf("solve", CORPUS / "p2.ts", "--schema", "safety-fwd")
    assert r.returncode == 1
    assert "inv(0)" in r.stdout and "inv(10)" in r.stdout
    facts = [l for l in r.stdout.splitlines() if "inv(" in l]
    assert len(facts) == 11

    assert hf("solve", CORPUS / "p4.ts", "--schema", "termination").returncode in (1, 2)


def test_solve_json_matches_human():
    for f, schema in [("p1.ts", "safety-fwd"), ("p2.ts", "safety-fwd"), ("p4.ts", "termination")]:
        human = hf("solve", CORPUS / f, "--schema", schema)
        machine = hf("solve", CORPUS / f, "--schema", schema, "--format", "json")
        doc = json.loads(machine.stdout)
        assert human.returncode == machine.returncode
        assert human.stdout.splitlines()[0] == doc["status"]


def test_solve_json_is_deterministic():
    a = hf("solve", CORPUS / "nonconvex.ts", "--format", "json").stdout
    b = hf("solve", CORPUS / "nonconvex.ts", "--format", "json").stdout
    assert a == b


def test_certify(tmp_path):
    good = tmp_path / "good.model"
    good.write_text("inv(x) := x >= 0 && x <= 10;\n")
    assert hf("certify", CORPUS / "p1.ts", "--model", good).returncode == 0

    weak = tmp_path / "weak.model"
    weak.write_text("inv(x) := x <= 9;\n")
    r = hf("certify", CORPUS / "p1.ts", "--model", weak)
    assert r.returncode == 1
    assert "x=9" in r.stdout and "x'=10" in r.stdout

    empty = tmp_path / "empty.model"
    empty.write_text("")
    assert hf("certify", CORPUS / "p1.ts", "--model", empty).returncode == 4


def test_certify_rechecks_a_solve_report(tmp_path):
    for f, schema in [("p1.ts", "termination"), ("p2.ts", "safety-fwd"), ("p6.ts", "exists-until")]:
        report = tmp_path / "report.json"
        report.write_text(hf("solve", CORPUS / f, "--schema", schema, "--format", "json").stdout)
        assert hf("certify", CORPUS / f, "--schema", schema, "--model", report).returncode == 0


def test_oracle():
    assert hf("oracle", CORPUS / "p1.ts", "--query", "safety").returncode == 0
    r = hf("oracle", CORPUS / "p5_leaky.ts", "--query", "noninterference", "--low-in", "l", "--low-out", "o")
    assert r.returncode == 1
    assert "run a" in r.stdout and "run b" in r.stdout
    assert hf("oracle", CORPUS / "rational.ts", "--query", "safety").returncode == 4


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["solve"],
        ["solve", "p1.ts", "--schema", "liveness"],
        ["solve", "p1.ts", "--budget-depth", "zero"],
        ["frobnicate", "p1.ts"],
    ],
)
def test_usage_errors(args):
    args = [CORPUS / a if a.endswith(".ts") else a for a in args]
    assert hf(*args).returncode == 3


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.ts"
    bad.write_text("var x: int[0,3];\ninit: x = 0\nnext: x' = x;\n")
    r = hf("solve", bad)
    assert r.returncode == 4
    assert "line" in r.stderr
    assert hf("solve", tmp_path / "missing.ts").returncode == 4


def test_caps_from_environment():
    env = dict(os.environ, HORN_FORGE_CAPS="states=10")
    r = subprocess.run([BIN, "oracle", CORPUS / "p1.ts"], capture_output=True, text=True, env=env)
    assert r.returncode == 2
