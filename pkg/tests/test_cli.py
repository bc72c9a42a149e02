import csv
import io

import pytest

from gaplab import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_psi_theta(capsys):
    code, out, _ = run(capsys, "psi", "--x", "10")
    assert code == 0 and out.strip() == "7.83201418051"
    code, out, _ = run(capsys, "theta", "--x", "2")
    assert out.strip().startswith("0.693147")


@pytest.mark.parametrize("x", ["1e18", "e^60"])
def test_psi_ceiling_exit_2(capsys, x):
    code, _, err = run(capsys, "psi", "--x", x)
    assert code == 2 and "CeilingExceeded" in err


def test_bad_number_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["psi", "--x", "ten"])
    assert exc.value.code == 2


def test_parse_x():
    assert cli.parse_x("e^60").log == 60.0
    assert cli.parse_x("e^1000").value is None
    assert cli.parse_x("1e6").value == 1e6


def test_ef_verify(capsys, zeros_path):
    code, out, _ = run(capsys, "ef-verify", "--x", "1000000.5", "--T", "10000", "--zeros", str(zeros_path),
                       "--no-timestamp")
    assert code == 0 and "verdict    pass" in out


def test_ef_verify_env_and_height(capsys, zeros_path, monkeypatch):
    monkeypatch.setenv("GAPLAB_ZEROS", str(zeros_path))
    code, _, _ = run(capsys, "ef-verify", "--x", "1000.5", "--T", "1e6")
    assert code == 2
    monkeypatch.delenv("GAPLAB_ZEROS")
    code, _, _ = run(capsys, "ef-verify", "--x", "1000.5", "--T", "100")
    assert code == 2


def test_ef_verify_half_odd(capsys, zeros_path):
    code, out, err = run(capsys, "ef-verify", "--x", "1000000", "--T", "10000", "--zeros", str(zeros_path),
                         "--no-timestamp")
    assert "not half an odd integer" in err and "x          1000000\n" in out
    code, out, err = run(capsys, "ef-verify", "--x", "1000000", "--T", "10000", "--zeros", str(zeros_path),
                         "--no-timestamp", "--half-odd-adjust")
    assert "x          1000000.5\n" in out


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", "--m", "3", "--from", "1", "--to", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1
    assert int(rows[0]["witness"]) in (2, 3, 5, 7) and rows[0]["status"] == "found"
    code, out, _ = run(capsys, "scan", "--m", "3", "--from", "1", "--to", "1e3")
    assert code == 0 and len(out.splitlines()) == 1001


def test_scan_csv_round_trip(capsys, tmp_path):
    path = tmp_path / "scan.csv"
    stub = tmp_path / "scan.gp"
    code, _, _ = run(capsys, "scan", "--m", "4", "--from", "1", "--to", "100", "--csv", str(path),
                     "--gnuplot-stub", str(stub))
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert [int(r["n"]) for r in rows] == list(range(1, 101))
    assert all(int(r["interval_lo"]) < int(r["witness"]) < int(r["interval_hi"]) for r in rows)
    assert str(path) in stub.read_text()


def test_scan_ceiling(capsys):
    code, _, _ = run(capsys, "scan", "--m", "3", "--from", "1", "--to", "1e9")
    assert code == 2


def test_tables_deterministic(capsys, tmp_path):
    path = tmp_path / "s.csv"
    a = run(capsys, "tables", "--which", "sensitivity", "--c-ford", "20", "--no-timestamp", "--csv", str(path))
    b = run(capsys, "tables", "--which", "sensitivity", "--c-ford", "20", "--no-timestamp")
    assert a[0] == 0 and a[1] == b[1]
    row = next(csv.DictReader(path.open()))
    assert float(row["loglog_n0"]) == pytest.approx(29.6, abs=0.1)


def test_tables_mpower_csv_round_trip(capsys, tmp_path):
    path = tmp_path / "m.csv"
    code, out, _ = run(capsys, "tables", "--which", "mpower", "--m-values", "4", "--csv", str(path))
    assert code == 0 and out.startswith("# gaplab")
    row = next(csv.DictReader(path.open()))
    assert int(row["m"]) == 4 and float(row["published_loglog_n0"]) == 29.24
    assert repr(float(row["loglog_n0"])) == row["loglog_n0"]


def test_reproduce_quick(capsys, zeros_path, tmp_path):
    path = tmp_path / "rep.csv"
    code, out, _ = run(capsys, "reproduce", "--quick", "--zeros", str(zeros_path), "--no-timestamp",
                       "--csv", str(path))
    lines = out.splitlines()
    assert any(l.startswith("cube threshold loglog_n0: 33.217") and l.endswith("pass") for l in lines)
    assert any(l.startswith("unconditional m-power bound") and l.endswith("pass") for l in lines)
    n_fail = sum(l.endswith(" fail") for l in lines)
    assert code == (1 if n_fail else 0)
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == len(lines) - 1
    assert sum(r["verdict"] == "fail" for r in rows) == n_fail


def test_reproduce_without_zeros_marks_na(capsys, monkeypatch):
    monkeypatch.delenv("GAPLAB_ZEROS", raising=False)
    from gaplab import report
    rows = report.ef_rows(None) + report.zero_table_rows(None)
    assert all(r.verdict == "n/a" for r in rows)
