import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qentropy import cli, io, verify
from qentropy.linalg import random_density


@pytest.fixture
def mats(tmp_path):
    def write(name, a):
        path = tmp_path / f"{name}.json"
        io.save_matrix(path, a)
        return str(path)

    return write


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out


def _report(out):
    return json.loads(out.out)


def test_dre_equal_states(mats, capsys):
    rho = mats("rho", random_density(3, seed=1))
    code, out = _run(["dre", rho, rho], capsys)
    rep = _report(out)
    assert code == 0
    assert rep["spectral"] == pytest.approx(0, abs=1e-13)
    assert rep["integral_form1"] == pytest.approx(0, abs=1e-13)
    assert rep["integral_form2"] == pytest.approx(0, abs=1e-13)


def test_dre_log2(mats, capsys):
    code, out = _run(["dre", mats("r", np.diag([1.0, 0.0])), mats("s", np.eye(2) / 2)], capsys)
    rep = _report(out)
    assert code == 0 and rep["support_ok"] and not rep["infinite"]
    for key in ("spectral", "integral_form1", "integral_form2"):
        assert rep[key] == pytest.approx(math.log(2), abs=1e-8)
    assert rep["agreement_gap"] <= 1e-8


def test_dre_infinite(mats, capsys):
    code, out = _run(["dre", mats("r", np.eye(2) / 2), mats("s", np.diag([1.0, 0.0]))], capsys)
    rep = _report(out)
    assert code == 0 and rep["infinite"] is True and rep["support_ok"] is False


def test_dre_nonconvergence_exit_2(mats, capsys):
    r, s = mats("r", random_density(3, seed=1)), mats("s", random_density(3, seed=2))
    code, _ = _run(["dre", r, s, "--method", "integral", "--max-subdivisions", "2", "--rel-tol", "1e-15"], capsys)
    assert code == 2


def test_dre_bad_input_exit_1(mats, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = _run(["dre", str(bad), str(bad)], capsys)
    assert code == 1
    code, _ = _run(["dre", mats("a", np.diag([1.0, -1.0])), mats("b", np.eye(2))], capsys)
    assert code == 1
    code, _ = _run(["dre", str(tmp_path / "missing.json"), str(bad)], capsys)
    assert code == 1


def test_derivative_hand_value(mats, capsys):
    r, s = mats("r", np.eye(2) / 2), mats("s", np.diag([0.5, -0.5]))
    code, out = _run(["derivative", r, s, "--m", "2", "--check-fd"], capsys)
    rep = _report(out)
    assert code == 0
    assert rep["integral_value"] == pytest.approx(0.5, abs=1e-9)
    assert rep["fd_value"] == pytest.approx(0.5, abs=1e-6)


def test_derivative_zero_direction(mats, capsys):
    code, out = _run(["derivative", mats("r", np.eye(2) / 2), mats("s", np.zeros((2, 2)))], capsys)
    assert code == 0 and _report(out)["integral_value"] == 0.0


def test_derivative_order_cap(mats, capsys):
    code, out = _run(["derivative", mats("r", np.eye(2) / 2), mats("s", np.diag([0.5, -0.5])), "--m", "25"], capsys)
    assert code == 1 and "m exceeds 20" in out.err


def test_derivative_support_violation(mats, capsys):
    code, _ = _run(["derivative", mats("r", np.diag([1.0, 0.0])), mats("s", np.diag([0.5, -0.5]))], capsys)
    assert code == 1


def test_verify_dpi(capsys, tmp_path):
    out_path = tmp_path / "v.json"
    code, _ = _run(["verify", "--suite", "dpi", "--trials", "100", "--seed", "7", "--n", "4", "--out", str(out_path)],
                   capsys)
    rep = json.loads(out_path.read_text())
    assert code == 0 and rep["failures"] == 0 and rep["worst_slack"] >= -1e-8


def test_verify_zero_trials(capsys):
    code, _ = _run(["verify", "--trials", "0"], capsys)
    assert code == 1


def test_verify_bounds_emits_table(capsys):
    code, out = _run(["verify", "--suite", "bounds", "--trials", "5"], capsys)
    rep = _report(out)
    assert code == 0
    assert len(rep["bounds_table"]) == 441 and rep["bounds_ordering_slack"] >= -1e-10


def test_verify_all_suites(capsys):
    code, out = _run(["verify", "--suite", "all", "--trials", "6", "--seed", "3"], capsys)
    rep = _report(out)
    assert code == 0
    assert [s["suite"] for s in rep["suites"]] == list(verify.SUITES)


def test_verify_deterministic_modulo_timestamp(capsys):
    argv = ["verify", "--suite", "pencil", "--trials", "8", "--seed", "11", "--n", "3"]
    first = _report(_run(argv, capsys)[1])
    second = _report(_run(argv, capsys)[1])
    first.pop("timestamp")
    second.pop("timestamp")
    assert json.dumps(first) == json.dumps(second)


def test_property_failure_exit_3_and_replay(capsys, monkeypatch):
    real = verify.CHECKS["dpi"]
    # shift every slack down by 1 so trials with small true slack register as violations
    monkeypatch.setitem(verify.CHECKS, "dpi", lambda inputs: (real(inputs)[0] - 1.0, True))
    code, out = _run(["verify", "--suite", "dpi", "--trials", "3", "--seed", "5"], capsys)
    assert code == 3
    rep = _report(out)
    assert rep["failures"] >= 1
    record = rep["suites"][0]["failure_records"][0]
    slack, _ = verify.replay(record)
    assert slack == record["slack"]
    monkeypatch.setitem(verify.CHECKS, "dpi", real)
    assert verify.replay(record)[0] == pytest.approx(record["slack"] + 1.0, abs=1e-15)


def test_bounds_csv(tmp_path, capsys):
    path = tmp_path / "b.csv"
    code, _ = _run(["bounds", "--grid-T", "3", "--grid-q", "3", "--out", str(path)], capsys)
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 9
    mid = next(r for r in rows if float(r["T"]) == 1.0 and float(r["q1"]) == 0.5)
    assert float(mid["min_bound"]) == pytest.approx(float(mid["explicit_bound"]), abs=1e-9)
    assert float(mid["explicit_bound"]) == pytest.approx(0.1308120359, abs=1e-10)
    assert float(mid["kim_bound"]) == 0.125
    for r in rows:
        if float(r["T"]) == 0:
            assert float(r["min_bound"]) == float(r["explicit_bound"]) == float(r["kim_bound"]) == 0


def test_bounds_bad_path(capsys, tmp_path):
    code, _ = _run(["bounds", "--grid-T", "2", "--grid-q", "2", "--out", str(tmp_path / "no" / "such" / "dir.csv")], capsys)
    assert code == 1


def test_module_entry_point(tmp_path):
    path = tmp_path / "b.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "qentropy", "bounds", "--grid-T", "2", "--grid-q", "2", "--out", str(path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and path.exists()
