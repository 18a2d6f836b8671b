import io
import json
import math
import pathlib
import subprocess
import sys

import jsonschema
import pytest

from wolffkit.cli import main

SCHEMA = json.loads((pathlib.Path(__file__).parents[1] / "schemas" / "report.schema.json").read_text())
BASE = ["--n", "5", "--beta", "1", "--gamma", "2", "--s1", "0", "--s2", "0"]


def run(*argv, env_threads=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def validate(text):
    data = json.loads(text)
    jsonschema.validate(data, SCHEMA)
    return data


# ---------------------------------------------------------------- classify

def test_classify_admissible():
    code, out, _ = run("classify", *BASE, "--p", "3", "--q", "3")
    assert code == 0
    data = validate(out)
    assert data["regime"] == "Admissible"
    assert (data["q0"], data["p0"], data["a0"]) == (1.0, 1.0, 3.0)
    assert data["criticality_gap"] == -1.0


def test_classify_subproduct_nulls():
    code, out, _ = run("classify", *BASE, "--p", "1", "--q", "1")
    data = validate(out)
    assert code == 0 and data["regime"] == "NonexistenceSubproduct"
    assert data["q0"] is None and data["criticality_gap"] is None


def test_classify_table_format():
    code, out, _ = run("classify", *BASE, "--p", "3", "--q", "3", "--format", "table")
    assert code == 0
    assert out.splitlines()[0].split() == ["regime", "Admissible"]


def test_missing_flag_is_exit_2():
    code, out, err = run("classify", *BASE, "--p", "3")
    assert code == 2 and out == ""
    assert "--q" in err


@pytest.mark.parametrize("argv,needle", [
    (["classify", *BASE, "--p", "3", "--q", "3", "--gamma", "0.5"], "gamma"),
    (["classify", "--n", "4", "--beta", "2", "--gamma", "2", "--p", "3", "--q", "3",
      "--s1", "0", "--s2", "0"], "beta*gamma"),
    (["classify", *BASE, "--p", "3", "--q", "3", "--s1", "-3"], "sigma1"),
    (["classify", *BASE, "--p", "abc", "--q", "3"], "--p"),
    (["bogus"], "bogus"),
    ([], "command"),
])
def test_invalid_arguments(argv, needle):
    code, out, err = run(*argv)
    assert code == 2 and out == ""
    assert needle in err
    assert err.count("\n") == 1


def test_allow_nonconvention():
    code, out, _ = run("classify", *BASE, "--p", "3", "--q", "3", "--s1", "-3", "--allow-nonconvention")
    assert code == 0
    assert validate(out)["convention_holds"] is False


def test_config_file_defaults_and_override(tmp_path):
    conf = tmp_path / "params.conf"
    conf.write_text("# system\nn = 5\nbeta=1\ngamma = 2\n--p = 3\nq = 1\ns1 = 0\ns2 = 0\n")
    code, out, _ = run("--config", str(conf), "classify", "--q", "3")
    assert code == 0
    assert validate(out)["params"]["q"] == 3.0
    code, out, _ = run("--config", str(conf), "classify")
    assert validate(out)["params"]["q"] == 1.0
    bad = tmp_path / "bad.conf"
    bad.write_text("format = xml\n")
    assert run("--config", str(bad), "classify", *BASE, "--p", "3", "--q", "3")[0] == 2
    assert run("--config", str(tmp_path / "missing"), "classify")[0] == 2


# ---------------------------------------------------------------- eval

def test_eval_csv_contract():
    code, out, _ = run("eval", "--n", "3", "--beta", "1", "--gamma", "2", "--theta", "1",
                       "--power", "2", "--radii", "0,1,10", "--threads", "1")
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "r,value" and lines[-1] == "" and "\r" not in out
    rows = [line.split(",") for line in lines[1:-1]]
    assert [r for r, _ in rows] == ["0", "1", "10"]
    # I_2 of (1+r^2)^-2 at the origin in R^3: 4 pi int r/(1+r^2)^2 dr = 2 pi
    assert float(rows[0][1]) == pytest.approx(2 * math.pi, rel=1e-9)
    assert all(len(v.replace(".", "").replace("e-", "").lstrip("0")) >= 15 for _, v in rows)


def test_eval_json_and_range():
    code, out, _ = run("eval", "--n", "5", "--beta", "1", "--gamma", "2", "--theta", "1.5",
                       "--power", "3", "--range", "1:1000:4", "--format", "json")
    data = validate(out)
    assert code == 0 and [row["r"] for row in data["rows"]] == pytest.approx([1, 10, 100, 1000])


def test_eval_divergent_tail_is_usage_error():
    code, _, err = run("eval", "--n", "5", "--beta", "1", "--gamma", "2", "--theta", "0.5",
                       "--power", "2", "--radii", "1")
    assert code == 2 and "tail" in err


def test_eval_quadrature_failure_is_exit_3():
    code, _, err = run("eval", "--n", "5", "--beta", "1", "--gamma", "2", "--theta", "1.5",
                       "--power", "3", "--radii", "0.5,7", "--max-subdivisions", "8",
                       "--rel-tol", "1e-14", "--threads", "1")
    assert code == 3
    assert "radius" in err


def test_eval_radii_validation():
    common = ["eval", "--n", "5", "--beta", "1", "--gamma", "2", "--theta", "1.5"]
    assert run(*common)[0] == 2
    assert run(*common, "--radii", "1", "--range", "1:2:3")[0] == 2
    assert run(*common, "--radii", "-1")[0] == 2
    assert run(*common, "--range", "0:2:3")[0] == 2


def test_eval_thread_counts_identical():
    common = ["eval", "--n", "5", "--beta", "1", "--gamma", "1.5", "--theta", "1.2",
              "--sigma", "-0.5", "--power", "2", "--range", "0.01:1e6:13"]
    outs = {run(*common, "--threads", t)[1] for t in ("1", "3", "8")}
    assert len(outs) == 1


# ---------------------------------------------------------------- atlas

def test_atlas_two_by_two():
    code, out, err = run("atlas", *BASE, "--p-range", "0.5:6:2", "--q-range", "0.5:6:2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p,q,regime,q0,p0,a0,criticality_gap"
    assert len(lines) == 5
    assert "4 cells" in err


def test_atlas_diagonal_threshold():
    # 23 steps on [0.5, 6] put the grid at 0.5, 0.75, ..., 6; 5/3 lies between 1.5 and 1.75.
    code, out, _ = run("atlas", *BASE, "--p-range", "0.5:6:23", "--q-range", "0.5:6:23")
    rows = [line.split(",") for line in out.splitlines()[1:]]
    diag = [(float(p), regime) for p, q, regime, *_ in rows if p == q]
    below = [reg for p, reg in diag if p < 5 / 3]
    above = [reg for p, reg in diag if p > 5 / 3]
    assert all(reg.startswith("Nonexistence") for reg in below)
    assert all(reg == "Admissible" for reg in above)
    assert below and above


def test_atlas_threads_byte_identical(monkeypatch):
    argv = ["atlas", *BASE, "--p-range", "0.5:6:17", "--q-range", "0.5:6:19"]
    one = run(*argv, "--threads", "1")[1]
    eight = run(*argv, "--threads", "8")[1]
    monkeypatch.setenv("WOLFFKIT_THREADS", "4")
    env = run(*argv)[1]
    assert one == eight == env


@pytest.mark.parametrize("rng", ["1:1:3", "2:1:3", "0.5:6:1", "a:b:c", "1:2"])
def test_atlas_bad_ranges(rng):
    assert run("atlas", *BASE, "--p-range", rng, "--q-range", "1:2:2")[0] == 2


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("WOLFFKIT_THREADS", "many")
    assert run("atlas", *BASE, "--p-range", "1:2:2", "--q-range", "1:2:2")[0] == 2
    assert run("atlas", *BASE, "--p-range", "1:2:2", "--q-range", "1:2:2", "--threads", "0")[0] == 2


# ---------------------------------------------------------------- iterate

def test_iterate_unit_ratio():
    code, out, _ = run("iterate", *BASE, "--p", "1", "--q", "1")
    data = validate(out)
    assert code == 0
    assert data["a"] == [3.0, -1.0] and data["verdict"] == "DivergesNegative"


def test_iterate_admissible_stalls():
    code, out, _ = run("iterate", *BASE, "--p", "3", "--q", "3", "--max-iter", "5")
    data = validate(out)
    assert data["verdict"] == "Stalls" and data["a"][:3] == [3.0, 19.0, 163.0]


def test_iterate_overflow_is_null():
    code, out, _ = run("iterate", *BASE, "--p", "3", "--q", "3", "--max-iter", "400")
    data = validate(out)
    assert code == 0 and data["verdict"] == "Stalls"
    assert "Infinity" not in out and "NaN" not in out


# ---------------------------------------------------------------- verify

def test_verify_mode_unavailable():
    code, out, err = run("verify", *BASE, "--p", "1.4", "--q", "3", "--mode", "fast")
    assert code == 4 and out == "" and "fast pair" in err


def test_verify_not_admissible():
    assert run("verify", *BASE, "--p", "1.5", "--q", "1.5", "--mode", "slow")[0] == 4


@pytest.mark.parametrize("mode,theta", [("slow", 1.0), ("fast", 3.0)])
def test_verify_pairs(mode, theta):
    code, out, _ = run("verify", *BASE, "--p", "3", "--q", "3", "--mode", mode)
    data = validate(out)
    assert code == 0
    assert data["verdict"] == "DoubleBounded" and data["rates_ok"]
    assert data["theta_u"] == pytest.approx(theta, rel=0.02)


def test_verify_tight_tolerance_fails():
    code, out, _ = run("verify", *BASE, "--p", "3", "--q", "3", "--mode", "slow", "--rate-tol", "1e-12")
    assert code == 5
    assert validate(out)["rates_ok"] is False


# ---------------------------------------------------------------- entry points

def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "wolffkit", "classify", *BASE, "--p", "2", "--q", "4"]
    a = subprocess.run(cmd, capture_output=True, check=True)
    b = subprocess.run(cmd, capture_output=True, check=True)
    assert a.stdout == b.stdout and a.returncode == 0
    validate(a.stdout.decode())


def test_help_exits_zero():
    proc = subprocess.run([sys.executable, "-m", "wolffkit", "--help"], capture_output=True)
    assert proc.returncode == 0 and b"classify" in proc.stdout
