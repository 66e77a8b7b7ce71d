"""End-to-end command line checks via subprocess.

Each test invokes ``python -m gaplab.cli`` the way a user would, so argument
parsing, the in-process service round trip, exit codes, and byte-level output
formatting are all exercised together.
"""

import json
import subprocess
import sys

import pytest

DIAG_ONE = {
    "schema": 1,
    "kind": "diagonal",
    "symbol": {"prefix": [], "tail": {"type": "const", "value": [1.0, 0.0]}},
}

DIAG_TWO = {
    "schema": 1,
    "kind": "diagonal",
    "symbol": {"prefix": [], "tail": {"type": "const", "value": [2.0, 0.0]}},
}

SHIFT_ONE = {
    "schema": 1,
    "kind": "shifted_diagonal",
    "k": 1,
    "symbol": {"prefix": [], "tail": {"type": "const", "value": [1.0, 0.0]}},
}

ZERO_TAIL = {
    "schema": 1,
    "kind": "diagonal",
    "symbol": {"prefix": [], "tail": {"type": "const", "value": [0.0, 0.0]}},
}

DIAG_J = {
    "schema": 1,
    "kind": "diagonal",
    "symbol": {"prefix": [], "tail": {"type": "poly", "coeffs": [0.0, 1.0]}},
}


def mat_doc(x: float) -> dict:
    return {"schema": 1, "kind": "matrix", "entries": [[[x, 0.0]]]}


def run_cli(*args: str, timeout: float = 180.0) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "gaplab.cli", *args],
        capture_output=True,
        timeout=timeout,
    )


def write_doc(tmp_path, name: str, doc) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


FUGLEDE_3 = (
    b"n,d_tilde,gap_sup,riesz\n"
    b"1,1.00000000000,1.00000000000,1.41421356237\n"
    b"2,0.800000000000,0.800000000000,1.78885438200\n"
    b"3,0.600000000000,0.600000000000,1.89736659610\n"
)


def test_version_flag():
    proc = run_cli("--version")
    assert proc.returncode == 0
    assert proc.stdout.decode().startswith("gaplab ")


def test_fuglede_golden_output():
    proc = run_cli("fuglede", "--n-max", "3")
    assert proc.returncode == 0
    assert proc.stdout == FUGLEDE_3
    assert b"\r" not in proc.stdout


def test_fuglede_out_file_and_byte_determinism(tmp_path):
    stdout_run = run_cli("fuglede", "--n-max", "20")
    assert stdout_run.returncode == 0

    out = tmp_path / "sweep.csv"
    file_run = run_cli("fuglede", "--n-max", "20", "--out", str(out))
    assert file_run.returncode == 0
    assert file_run.stdout == b""
    assert out.read_bytes() == stdout_run.stdout

    again = tmp_path / "sweep2.csv"
    assert run_cli("fuglede", "--n-max", "20", "--out", str(again)).returncode == 0
    assert again.read_bytes() == out.read_bytes()


def test_density_rows_and_note(tmp_path):
    doc = write_doc(tmp_path, "t.json", DIAG_J)
    proc = run_cli("density", "--descriptor", doc, "--n-max", "5")
    assert proc.returncode == 0
    lines = proc.stdout.decode().splitlines()
    assert lines[0] == "n,riesz_to_t,gap_to_t,norm_F_Tn"
    assert len(lines) == 7
    for n, line in enumerate(lines[1:6], start=1):
        fields = line.split(",")
        assert fields[0] == str(n)
        assert float(fields[1]) == pytest.approx(1.0 / (n + 1), abs=1e-11)
        assert float(fields[3]) == pytest.approx(n / (n + 1), abs=1e-11)
    assert lines[6].startswith("# ")
    note = json.loads(lines[6][2:])
    assert note["input_unbounded"] is True
    assert note["all_approximants_bounded"] is True


def test_metric_json(tmp_path):
    a = write_doc(tmp_path, "a.json", mat_doc(0.0))
    b = write_doc(tmp_path, "b.json", mat_doc(1.0))
    proc = run_cli("metric", "--a", a, "--b", b, "--which", "gap_sup")
    assert proc.returncode == 0
    data = json.loads(proc.stdout.decode())
    assert data["value"] == pytest.approx(0.5, abs=1e-10)
    assert data["certified_error"] >= 0.0
    assert isinstance(data["method"], str)


def test_homotopy_connected_rows(tmp_path):
    a = write_doc(tmp_path, "a.json", DIAG_ONE)
    b = write_doc(tmp_path, "b.json", DIAG_TWO)
    proc = run_cli(
        "homotopy", "--a", a, "--b", b, "--steps", "5", "--eps-step", "0.5"
    )
    assert proc.returncode == 0
    lines = proc.stdout.decode().splitlines()
    assert lines[0] == "lambda,index,step_gap"
    assert len(lines) == 7
    lambdas = [line.split(",")[0] for line in lines[1:6]]
    assert lambdas == [
        "0.00000000000",
        "0.250000000000",
        "0.500000000000",
        "0.750000000000",
        "1.00000000000",
    ]
    assert all(line.split(",")[1] == "0" for line in lines[1:6])
    assert lines[1].split(",")[2] == "0.00000000000"
    assert lines[6].startswith("CONNECTED index=0 max_step_gap=0.")
    worst = max(float(line.split(",")[2]) for line in lines[1:6])
    reported = float(lines[6].split("max_step_gap=")[1])
    assert reported == pytest.approx(worst, abs=1e-12)
    assert 0.0 < worst < 0.5


def test_homotopy_no_path_exit_4(tmp_path):
    a = write_doc(tmp_path, "a.json", SHIFT_ONE)
    b = write_doc(tmp_path, "b.json", DIAG_ONE)
    proc = run_cli("homotopy", "--a", a, "--b", b)
    assert proc.returncode == 4
    assert proc.stdout == b"NO-PATH index_a=-1 index_b=0\n"


def test_homotopy_non_fredholm_endpoint_exit_2(tmp_path):
    a = write_doc(tmp_path, "a.json", ZERO_TAIL)
    b = write_doc(tmp_path, "b.json", DIAG_ONE)
    proc = run_cli("homotopy", "--a", a, "--b", b)
    assert proc.returncode == 2
    err = proc.stderr.decode()
    assert err.startswith("error: ")
    assert "not Fredholm: infinite-dimensional kernel" in err


def test_missing_descriptor_exit_2():
    proc = run_cli("density", "--n-max", "5")
    assert proc.returncode == 2
    assert "missing operator" in proc.stderr.decode()


def test_bad_config_exit_2(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    proc = run_cli("fuglede", "--config", str(broken))
    assert proc.returncode == 2
    assert "not valid JSON" in proc.stderr.decode()

    listy = tmp_path / "listy.json"
    listy.write_text("[1, 2]", encoding="utf-8")
    proc = run_cli("fuglede", "--config", str(listy))
    assert proc.returncode == 2
    assert "must contain a JSON object" in proc.stderr.decode()


def test_config_file_and_inline_override(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"n_max": 5}), encoding="utf-8")

    from_config = run_cli("fuglede", "--config", str(config))
    assert from_config.returncode == 0
    assert len(from_config.stdout.decode().splitlines()) == 6

    # inline flags win over the config file
    overridden = run_cli("fuglede", "--config", str(config), "--n-max", "3")
    assert overridden.returncode == 0
    assert overridden.stdout == FUGLEDE_3


def test_rejected_request_exit_2():
    proc = run_cli("suite", "--trials", "0")
    assert proc.returncode == 2
    assert "invalid configuration" in proc.stderr.decode()


def test_suite_small_run_exit_0():
    proc = run_cli("suite", "--seed", "11", "--trials", "4", "--dim-max", "4")
    assert proc.returncode == 0
    report = json.loads(proc.stdout.decode())
    assert report["failures"] == 0
    assert report["seed"] == 11
