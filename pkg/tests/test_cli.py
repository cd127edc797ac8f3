import csv
import io
import json
import subprocess
import sys

import pytest

from airyspec import cli, spectrum


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_eigenvalues_csv(capsys):
    code, out, err = run(["eigenvalues", "--count", "4"], capsys)
    assert code == 0
    assert "\r" not in out
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["n"] for r in rows] == ["1", "2", "3", "4"]
    assert rows[0]["lambda"] == format(1.0187929716474710, ".17g")
    assert all(r["bound_check"] == "pass" for r in rows)
    man = json.loads(err)
    assert man["command"] == "eigenvalues" and man["parameters"] == {"count": 4}
    assert set(man["versions"]) >= {"airyspec", "numpy", "scipy", "python", "backend", "config_hash"}


def test_json_output(capsys):
    code, out, _ = run(["trace", "--t-values", "0.5", "1", "--format", "json"], capsys)
    data = json.loads(out)
    assert code == 0 and len(data["rows"]) == 2
    assert data["rows"][1]["trace"] == spectrum.trace(1.0)
    assert data["manifest"]["seed"] is None


def test_eigenfunction_tail_column(capsys):
    code, out, _ = run(["eigenfunction", "--n", "2", "--x-min", "0", "--x-max", "30", "--points", "7"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["phi"] == "0"
    assert rows[0]["tail"] == "" and rows[-1]["tail"] != ""


def test_out_writes_sidecar(tmp_path, capsys):
    path = tmp_path / "ev.csv"
    code, out, _ = run(["eigenvalues", "--count", "3", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert path.read_bytes().count(b"\n") == 4
    man = json.loads((tmp_path / "ev.csv.manifest.json").read_text())
    assert man["parameters"]["count"] == 3


def test_replay_is_byte_identical(tmp_path, capsys):
    first = tmp_path / "hk.csv"
    second = tmp_path / "hk2.csv"
    argv = ["heatkernel", "--t", "1.5", "--x-min", "-1", "--x-max", "1", "--points", "3"]
    assert run(argv + ["--out", str(first)], capsys)[0] == 0
    assert run(["replay", str(first) + ".manifest.json", "--out", str(second)], capsys)[0] == 0
    assert first.read_bytes() == second.read_bytes()


def test_replay_json_manifest(tmp_path, capsys):
    first = tmp_path / "mc.json"
    argv = ["verify-mc", "--paths", "2000", "--steps", "20", "--format", "json", "--out", str(first)]
    run(argv, capsys)
    code, out, _ = run(["replay", str(first)], capsys)
    assert json.loads(out)["rows"] == json.loads(first.read_text())["rows"]
    assert json.loads(out)["manifest"]["seed"] == 20240601


def test_verify_mc_exit_code(capsys):
    code, out, _ = run(["verify-mc", "--paths", "20000", "--steps", "200"], capsys)
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == (0 if abs(float(row["z_score"])) <= 3 else 1)


@pytest.mark.parametrize("argv", [
    ["eigenvalues", "--count", "0"],
    ["eigenfunction", "--n", "0"],
    ["eigenfunction", "--x-min", "2", "--x-max", "1"],
    ["heatkernel", "--t", "0.1"],
    ["trace", "--t-values", "-1"],
    ["replay", "/nonexistent/manifest.json"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["eigenvalues", "--count", "many"])
    assert exc.value.code == 2


def test_convergence_exit_3(capsys):
    code, _, err = run(["heatkernel", "--t", "0.5", "--x-min", "-30", "--x-max", "30", "--points", "2"], capsys)
    assert code == 3 and "convergence" in err


def test_report_only(capsys):
    code, out, err = run(["report", "--only", "1", "8"], capsys)
    data = json.loads(out)
    assert code == 0 and [r["number"] for r in data["rows"]] == [1, 8]
    assert all(r["passed"] for r in data["rows"]) and data["manifest"]["command"] == "report"
    assert err.count("PASS") == 2


def test_report_csv_and_failure_exit(capsys):
    code, out, _ = run(["report", "--only", "7", "--format", "csv"], capsys)
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == (0 if row["passed"] == "true" else 1)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "airyspec.cli", "eigenvalues", "--count", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("n,parity,k,lambda")
