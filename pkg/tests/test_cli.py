import json
import subprocess
import sys

import pytest

from rhlab import __version__
from rhlab.cli import COLUMNS, run


def read_csv(path):
    lines = path.read_text().splitlines()
    comments = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if not l.startswith("#")]
    return comments, body[0], body[1:]


GOLDEN = {
    "zeta-table": "m,zeta_2m,inv_zeta_2m",
    "ck": "k,c_k,precision",
    "riesz": "x,R_x",
    "bridge": "k,r_over_k,c_k,gap,bound,allowance,ratio,passed",
    "identity": "x,K,lhs,rhs,discrepancy",
    "altsum": "method,value,uncertainty",
    "lagarias": "n,sigma,threshold,ratio,near_miss",
    "koch": "x,pi_x,li_x,ratio",
    "li": "n,lambda_n,tail_bound,lower,verdict",
    "phi": "t,phi,terms_used",
    "hplot": "z,lambda,H,quadrature_error",
    "zeroscan": "index,lo,hi,z",
}


def test_column_sets_frozen():
    assert {k: ",".join(v) for k, v in COLUMNS.items()} == GOLDEN


SMALL_RUNS = {
    "zeta-table": ["--count", "5"],
    "ck": ["--kmin", "0", "--kmax", "10"],
    "riesz": ["--xmax", "2"],
    "bridge": ["--k", "20"],
    "identity": ["--x", "1", "--K", "40"],
    "altsum": [],
    "lagarias": ["--N", "1000"],
    "koch": ["--xmax", "300"],
    "phi": ["--tmax", "0.2"],
    "hplot": ["--zmax", "2"],
    "zeroscan": ["--zmin", "27", "--zmax", "30"],
}


@pytest.mark.parametrize("sub", sorted(SMALL_RUNS))
def test_every_subcommand_header(sub, tmp_path):
    out = tmp_path / "o.csv"
    assert run([sub, "--precision", "15", "--out", str(out)] + SMALL_RUNS[sub]) == 0
    comments, header, rows = read_csv(out)
    assert comments[0] == f"# rhlab {__version__}"
    cfg = json.loads(comments[1][len("# config "):])
    assert cfg["subcommand"] == sub and cfg["precision"] == 15
    assert header == GOLDEN[sub]
    assert rows


def test_li_subcommand(tmp_path, zero_table):
    from conftest import ZEROS_FILE
    out = tmp_path / "li.csv"
    assert run(["li", "--zeros", str(ZEROS_FILE), "--nmax", "5", "--out", str(out)]) == 0
    _, header, rows = read_csv(out)
    assert header == GOLDEN["li"] and len(rows) == 5
    assert all(r.endswith(",positive") for r in rows)


def test_ck_rows(tmp_path):
    out = tmp_path / "ck.csv"
    assert run(["ck", "--kmin", "0", "--kmax", "10", "--out", str(out)]) == 0
    _, header, rows = read_csv(out)
    assert header == "k,c_k,precision"
    assert len(rows) == 11
    assert rows[0].startswith("0,0.607927101854026628663276779")


def test_altsum_prints_value(capsys, tmp_path):
    assert run(["altsum", "--precision", "16", "--out", str(tmp_path / "a.csv")]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "0.7825279853253842"


def test_json_output(tmp_path):
    out = tmp_path / "o.json"
    assert run(["ck", "--kmax", "3", "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["rhlab_version"] == __version__
    assert doc["columns"] == ["k", "c_k", "precision"]
    assert doc["config"]["kmax"] == 3
    assert all(isinstance(v, str) for row in doc["rows"] for v in row)


def test_byte_identical_across_workers(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["ck", "--kmin", "100", "--kmax", "400", "--stride", "7", "--out", str(a)]) == 0
    assert run(["ck", "--kmin", "100", "--kmax", "400", "--stride", "7", "--workers", "3",
                "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_usage_errors(tmp_path, capsys):
    assert run(["ck", "--bogus"]) == 2
    assert "usage" in capsys.readouterr().err
    assert run(["nope"]) == 2
    assert run(["ck", "--precision", "5", "--out", str(tmp_path / "x")]) == 2
    assert run(["ck", "--kmin", "5", "--kmax", "1", "--out", str(tmp_path / "x")]) == 2
    assert run(["li", "--zeros", str(tmp_path / "missing.txt"), "--out", str(tmp_path / "x")]) == 2


def test_budget_error_exit_code(tmp_path, capsys):
    code = run(["ck", "--kmax", "100", "--working-precision", "30", "--out", str(tmp_path / "x")])
    assert code == 3
    assert "PrecisionBudgetError" in capsys.readouterr().err


def test_violation_exit_code(tmp_path):
    # an absurdly tight Koch bound is reported as a violated criterion
    assert run(["koch", "--xmax", "200", "--bound", "0.01", "--out", str(tmp_path / "k.csv")]) == 1
    assert run(["identity", "--x", "10", "--K", "30", "--out", str(tmp_path / "i.csv")]) == 1


def test_lagarias_million(tmp_path, capsys):
    out = tmp_path / "lag.csv"
    assert run(["lagarias", "--N", "1000000", "--out", str(out)]) == 0
    assert "violations: []" in capsys.readouterr().out
    _, _, rows = read_csv(out)
    assert any(r.startswith("12,28,") for r in rows)


def test_console_script(tmp_path):
    out = tmp_path / "a.csv"
    res = subprocess.run([sys.executable, "-m", "rhlab.cli", "altsum", "--precision", "16",
                          "--out", str(out)], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "0.7825279853253842"
