import json
import subprocess
import sys

import pytest

from pa_embed.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_budget(capsys):
    code, out, err = run(["budget", "--n", "3", "--m", "0"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["value"] == 2
    assert "g(3,0) = 2" in err and "h(3,0) = 2" in err


def test_budget_uncapped_too_large(capsys):
    code, out, _ = run(["budget", "--n", "5", "--m", "3", "--limit", "1000", "--quiet"], capsys)
    assert code == 2 and json.loads(out)["error"] == "BudgetExceeded"


def test_axioms(capsys):
    code, out, err = run(["axioms", "--model", "poly", "--samples", "100", "--seed", "7"], capsys)
    assert code == 0
    assert "15/15" in err
    assert json.loads(out)["all_passed"]


def test_usage_errors(capsys):
    assert run(["axioms", "--model", "poly"], capsys)[0] == 1
    assert run(["budget", "--n", "-1", "--m", "0"], capsys)[0] == 1
    assert run(["nosuch"], capsys)[0] == 1
    assert run(["render-table", "/nonexistent.json"], capsys)[0] == 1


def test_solve(tmp_path, capsys):
    path = tmp_path / "sys.json"
    path.write_text(json.dumps(["x0+x1=1+1+1", "x0*x1=1+1"]))
    code, out, _ = run(["solve", "--system", str(path), "--bound", "5"], capsys)
    assert code == 0 and json.loads(out)["solution"] == {"x0": 1, "x1": 2}


def test_embed_verify_render(tmp_path, capsys):
    elems = tmp_path / "el.json"
    elems.write_text(json.dumps(["0", "1", "X", "X+1"]))
    table = tmp_path / "t.json"
    code, _, _ = run(["embed", "--elements", str(elems), "--depth", "12", "--budget", "20",
                      "--out", str(table), "--quiet"], capsys)
    assert code == 0
    code, out, _ = run(["verify", str(table), "--bound", "50", "--quiet"], capsys)
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(["render-table", str(table), "--max-rows", "4"], capsys)
    lines = out.splitlines()
    assert code == 0 and "m1=0" in lines[0] and lines[2].startswith("P1")
    code, out, _ = run(["render-table", str(table), "--csv"], capsys)
    assert out.splitlines()[1].startswith("P1,")


def test_verify_failure_exit(tmp_path, capsys):
    elems = tmp_path / "el.json"
    elems.write_text(json.dumps(["0", "X"]))
    table = tmp_path / "t.json"
    run(["embed", "--elements", str(elems), "--depth", "5", "--budget", "5", "--out", str(table)], capsys)
    data = json.loads(table.read_text())
    data["rows"][-1][0] = 3
    table.write_text(json.dumps(data))
    code, out, _ = run(["verify", str(table), "--quiet"], capsys)
    report = json.loads(out)
    assert code == 2 and not report["ok"] and report["failures"]


def test_ufamily(capsys):
    code, out, err = run(["ufamily", "--alpha", "w+1", "--n-max", "64", "--check"], capsys)
    data = json.loads(out)
    assert code == 0 and data["check"]["ok"] and len(data["sets"]) == 64
    assert "(iii)" in err


def test_star(tmp_path, capsys):
    assign = tmp_path / "a.json"
    assign.write_text(json.dumps({"0": "0", "1": "1", "2": "X"}))
    out_path = tmp_path / "run.json"
    code, _, err = run(["star", "--index", "0,1,2", "--assign", str(assign), "--n-max", "8",
                        "--out", str(out_path)], capsys)
    data = json.loads(out_path.read_text())
    assert code == 0 and data["ok"] and data["soundness"]["ok"]
    assert "0 + 1 = 1: certified" in err


def test_star_assignment_list_length(tmp_path, capsys):
    assign = tmp_path / "a.json"
    assign.write_text(json.dumps(["0"]))
    assert run(["star", "--index", "0,1", "--assign", str(assign)], capsys)[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pa_embed", "budget", "--n", "3", "--m", "1", "--quiet"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 2
