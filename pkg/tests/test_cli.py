import json
import subprocess
import sys

import pytest

from multisymplectic.builtins import builtin_document
from multisymplectic.cli import main


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_list_builtins(capsys):
    code, out, _ = run(["--list-builtins"], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 9


def test_run_builtin_passes(capsys):
    code, out, _ = run(["run-builtin", "presym_product"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and rep["scenario"] == "presym_product"


def test_reports_are_byte_identical(capsys, tmp_path):
    outs = []
    for _ in range(2):
        code, out, _ = run(["run-builtin", "embed_suite", "--seed", "12", "--tuples", "2"], capsys)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    target = tmp_path / "r.json"
    assert main(["run-builtin", "embed_suite", "--seed", "12", "--tuples", "2", "--out", str(target)]) == 0
    assert target.read_text() == outs[0]


def test_parallel_run_merges_deterministically(capsys):
    _, serial, _ = run(["run-builtin", "curved_suite", "--tuples", "1"], capsys)
    _, parallel, _ = run(["run-builtin", "curved_suite", "--tuples", "1", "--jobs", "3"], capsys)
    assert serial == parallel


def test_text_format(capsys):
    code, out, _ = run(["run-builtin", "torus_noowo", "--format", "text"], capsys)
    assert code == 0
    assert out.startswith("scenario torus_noowo (seed 2): PASS")


def test_malformed_file_exits_2_with_location(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"name": "bad", "charts": {"c": {"coords": ["x", 3]}}}')
    code, _, err = run(["verify", str(f)], capsys)
    assert code == 2
    assert "$.charts.c.coords" in err
    f.write_text("{not json")
    code, _, err = run(["verify", str(f)], capsys)
    assert code == 2 and "line 1" in err


def test_missing_file_and_unknown_builtin_exit_2(tmp_path, capsys):
    assert run(["verify", str(tmp_path / "none.json")], capsys)[0] == 2
    assert run(["run-builtin", "nope"], capsys)[0] == 2


def test_invariant_violation_exits_3(tmp_path, capsys):
    doc = builtin_document("presym_product")
    doc["actions"]["fa_action"]["generators"][0] = [[{"coeff": "1/1", "exponents": [1, 0]}], []]
    f = tmp_path / "inv.json"
    f.write_text(json.dumps(doc))
    code, _, err = run(["verify", str(f)], capsys)
    assert code == 3 and "fa_action" in err


@pytest.mark.parametrize("task,perturb", [
    ("product", ["a", 1, 1, "-1/1"]),
    ("embed_check", ["a", 1, 0, "-1/1"]),
])
def test_negative_control_scenarios_exit_1(tmp_path, capsys, task, perturb):
    name = "presym_product" if task == "product" else "embed_suite"
    doc = builtin_document(name)
    t = next(t for t in doc["tasks"] if t["type"] == task)
    t["perturb"] = perturb
    f = tmp_path / "neg.json"
    f.write_text(json.dumps(doc))
    code, out, _ = run(["verify", str(f)], capsys)
    assert code == 1
    rep = json.loads(out)
    failed = [r for r in rep["tasks"] if not r["passed"]]
    assert failed and failed[0]["defects"]


def test_builtin_written_to_file_verifies(tmp_path, capsys):
    f = tmp_path / "s.json"
    f.write_text(json.dumps(builtin_document("assoc_defect")))
    code, out, _ = run(["verify", str(f)], capsys)
    assert code == 0


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "multisymplectic.cli", "--list-builtins"], capture_output=True, text=True)
    assert res.returncode == 0 and "curved_suite" in res.stdout
