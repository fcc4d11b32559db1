import json

import pytest

from flexcut.cli import main
from flexcut.model import FgcInstance

FOUR_NODE_TEXT = "4 8 3 1\n0 1 1 U\n0 1 1 S\n1 2 1 S\n1 2 1 S\n2 3 1 U\n2 3 1 S\n0 3 1 U\n0 3 1 U\n"


@pytest.fixture
def four_node_file(tmp_path):
    path = tmp_path / "four.fgc"
    path.write_text(FOUR_NODE_TEXT)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_verify(capsys, four_node_file):
    assert run(capsys, "verify", "--input", four_node_file) == (0, "(3,1) FEASIBLE\n")
    code, out = run(capsys, "verify", "--input", four_node_file, "--q", "2", "--json")
    assert code == 1
    assert json.loads(out) == {"p": 3, "q": 2, "feasible": False, "witness": "S={1,2} total=4 unsafe=2"}


def test_deficient_and_check_family(capsys, four_node_file, tmp_path):
    code, out = run(capsys, "deficient", "--input", four_node_file)
    assert code == 0 and out.splitlines()[0] == "S={1,2} total=4 unsafe=2"
    fam = tmp_path / "fam.txt"
    fam.write_text(out)
    assert run(capsys, "check-family", "--family", str(fam), "--n", "4") == (1, "FAIL pair=(S={1,2},S={2,3})\n")
    assert run(capsys, "check-family", "--family", str(fam), "--n", "4", "--weak") == (0, "PASS\n")
    assert run(capsys, "check-family", "--input", four_node_file, "--weak")[0] == 0


def test_solve_and_exact(capsys, data_dir, tmp_path):
    report = tmp_path / "out.json"
    path = str(data_dir / "seed1_n6_m12_p2.fgc")
    code, out = run(capsys, "solve", "--input", path, "--stage1", "exact", "--report", str(report))
    assert code == 0
    assert "certificates PASS (beta=2)" in out
    data = json.loads(report.read_text())
    assert data["certificates"]["ok"] and data["exact_opt"] == "11"
    code, out = run(capsys, "exact", "--input", path)
    assert code == 0
    assert out.strip() in (data_dir / "golden.txt").read_text().splitlines()


def test_counterexample_and_gap(capsys):
    code, out = run(capsys, "counterexample", "--k", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["pd_cost"] == "4" and data["waves"] == ["1/2", "1/4"]
    code, out = run(capsys, "gap", "--kmin", "2", "--kmax", "3", "--json")
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["opt"] for r in rows] == ["3", "5"]


def test_gen_is_deterministic(capsys, tmp_path):
    _, first = run(capsys, "gen", "--seed", "5", "--n", "5", "--m", "9", "--p", "2")
    _, second = run(capsys, "gen", "--seed", "5", "--n", "5", "--m", "9", "--p", "2")
    assert first == second
    inst = FgcInstance.from_text(first)
    assert (inst.n, inst.m, inst.p, inst.q) == (5, 9, 2, 2)
    out_file = tmp_path / "g.fgc"
    assert run(capsys, "gen", "--seed", "5", "--n", "5", "--m", "9", "--p", "2", "--out", str(out_file)) == (0, "")
    assert out_file.read_text() == first


def test_errors_exit_2(capsys, tmp_path, four_node_file):
    assert main(["solve", "--input", str(tmp_path / "missing.fgc")]) == 2
    assert main(["solve", "--input", four_node_file]) == 2  # not (3,2)-feasible
    assert "error:" in capsys.readouterr().err
