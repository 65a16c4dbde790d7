import json
import subprocess
import sys

import pytest

from cfdim import cli
from cfdim.errors import ConvergenceError, InfeasibleError
from cfdim.optimizer import TABLE_COLUMNS


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_rational(capsys):
    code, out, _ = run(capsys, "analyze", "3/7")
    assert code == 0
    assert out.startswith("# digits,2,3\n")
    assert "2,3,3,7,1/63" in out


def test_analyze_word_json(capsys):
    code, out, _ = run(capsys, "analyze", "1,2,1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["digits"] == [1, 2, 1]
    assert data["frequencies"][0] == {"digit": 1, "count": 2, "frequency": 0.666666666667, "exact": "2/3"}


@pytest.mark.parametrize("arg,pos", [("1,x,2", "character 3"), ("1,0", "character 3")])
def test_analyze_parse_error_position(capsys, arg, pos):
    code, _, err = run(capsys, "analyze", arg)
    assert code == 2 and pos in err


def test_analyze_out_of_range(capsys):
    assert run(capsys, "analyze", "3/2")[0] == 2
    assert run(capsys, "analyze", "0.1e")[0] == 2


def test_dimension_csv(capsys):
    code, out, _ = run(capsys, "dimension", "--probs", "0.5,0.3,0.2", "--N", "3", "--k", "1,2")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == ",".join(TABLE_COLUMNS)
    assert lines[2].startswith("3,2,0.627093107188,")
    assert "# value,0.627093107188" in lines
    # wall_time stays empty without --timing
    assert lines[1].split(",")[9] == ""


def test_dimension_deterministic(capsys, tmp_path):
    a = run(capsys, "dimension", "--probs", "0.7,0.3", "--N", "2", "--k", "1,2,3", "--format", "json")
    b = run(capsys, "dimension", "--probs", "0.7,0.3", "--N", "2", "--k", "1,2,3", "--format", "json")
    assert a == b and a[0] == 0


def test_dimension_timing(capsys):
    _, out, _ = run(capsys, "dimension", "--probs", "0.5,0.5", "--N", "2", "--k", "1", "--timing")
    assert out.splitlines()[1].split(",")[9] != ""


def test_dimension_budget_exit(capsys):
    code, _, err = run(capsys, "dimension", "--probs", "0.5,0.5", "--N", "2", "--k", "30")
    assert code == 4 and "budget" in err


def test_dimension_gauss_config(capsys, tmp_path):
    freq = tmp_path / "gauss.json"
    freq.write_text(json.dumps({"entries": [], "tail": {"family": "gauss"}}))
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"freq": str(freq), "N": [3, 4], "k": [2], "format": "json"}))
    code, out, _ = run(capsys, "dimension", "--config", str(cfg))
    data = json.loads(out)
    assert code == 0 and [r["N"] for r in data["table"]] == [3, 4]
    # flags override the config file
    code, out, _ = run(capsys, "dimension", "--config", str(cfg), "--N", "5", "--format", "csv")
    assert out.splitlines()[1].startswith("5,2,0.70291640684")


def test_dimension_missing_freq(capsys):
    assert run(capsys, "dimension", "--N", "2")[0] == 2
    assert run(capsys, "dimension", "--freq", "/nonexistent.json")[0] == 2


def test_dimension_error_exits(capsys, monkeypatch):
    def infeasible(*a, **k):
        raise InfeasibleError("no feasible law")

    def stuck(*a, **k):
        raise ConvergenceError("stuck")

    monkeypatch.setattr(cli, "dimension", infeasible)
    assert run(capsys, "dimension", "--probs", "1", "--N", "1", "--k", "1")[0] == 3
    monkeypatch.setattr(cli, "dimension", stuck)
    assert run(capsys, "dimension", "--probs", "1", "--N", "1", "--k", "1")[0] == 5


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "2.2", "--trials", "100", "--seed", "3")
    assert code == 0 and out == "suite 2.2: PASS (100 checks, 0 failures)\n"
    assert run(capsys, "verify", "--suite", "8.1")[0] == 2


def test_verify_failure_exit(capsys, monkeypatch):
    from cfdim.verify import SuiteReport

    def broken(rng, trials):
        rep = SuiteReport("2.1", checks=1)
        rep.fail("word (1,): determinant 0")
        return rep

    monkeypatch.setitem(cli.SUITES, "2.1", broken)
    code, out, _ = run(capsys, "verify", "--suite", "2.1")
    assert code == 1 and "counterexample: word (1,)" in out


def test_sample(capsys, tmp_path):
    code, out, _ = run(capsys, "sample", "--probs", "0.5,0.5", "--n", "50", "--count", "2", "--seed", "4")
    lines = out.splitlines()
    assert code == 0 and len(lines[0].split(",")) == 50
    assert lines[2] == "word,digit,frequency,target"
    target = tmp_path / "words.txt"
    code, out, _ = run(capsys, "sample", "--probs", "0.5,0.5", "--n", "50", "--out", str(target), "--seed", "4")
    assert target.read_text().splitlines()[0] == lines[0]
    assert out.startswith("word,digit")
    assert run(capsys, "sample", "--probs", "0.5,0.5", "--growth", "sqrt")[0] == 2


def test_profile(capsys):
    code, out, _ = run(capsys, "profile", "--log-b", "10", "--depth", "8", "--count", "2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "word,m,n,log_mass,log_length,ratio,corrected_ratio,bound_ok,verified"
    assert len(lines) == 1 + 2 * 8
    assert all(line.endswith("true,true") for line in lines[1:])
    same = run(capsys, "sample", "--profile", "--log-b", "10", "--depth", "8", "--count", "2")
    assert same[1] == out
    assert run(capsys, "profile", "--depth", "8")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "dimension", "--N", "a,b", "--probs", "1")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cfdim", "analyze", "5/8"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("# digits,1,1,1,2")
