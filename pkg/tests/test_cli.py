import csv
import json
import subprocess
import sys

import pytest

from partition_mac import analysis
from partition_mac.cli import ConfigError, demo_trace, main, parse_grid, parse_ints


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.reader(text.splitlines()))


def strip_timing(report):
    cells = report.get("cells", [report])
    for c in cells:
        c.pop("wall_clock_s", None)
    return report


# ---- parsing helpers ----


def test_parse_grid():
    assert parse_grid("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
    assert parse_grid("0.5") == [0.5]
    assert parse_grid("0.2,0.4") == [0.2, 0.4]
    assert parse_grid("") == []
    for bad in ["a:b:c", "0.1:0.3:0", "0.5:0.1:0.1", "x"]:
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_parse_ints():
    assert parse_ints("64,256") == [64, 256]
    assert parse_ints(8) == [8]
    assert parse_ints([4, 5]) == [4, 5]
    with pytest.raises(ConfigError):
        parse_ints("4,x")


# ---- rates ----


def test_rates_single_point(capsys):
    code, out, _ = run(["rates", "--grid", "0.5"], capsys)
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["p", "c_rate", "c_group"]
    assert float(rows[1][1]) == pytest.approx(analysis.c_rate(0.5))
    assert float(rows[1][2]) == pytest.approx(0.40564, abs=1e-5)
    assert rows[2][0] == "max"
    assert float(rows[2][1]) == pytest.approx(0.5896, abs=5e-4)
    assert float(rows[2][2]) == pytest.approx(0.5, abs=5e-4)
    assert rows[3][0] == "argmax"


def test_rates_empty_grid(capsys):
    code, out, _ = run(["rates", "--grid", ""], capsys)
    assert code == 0
    assert [r[0] for r in read_csv(out)] == ["p", "max", "argmax"]


def test_rates_csv_line_endings(tmp_path):
    path = tmp_path / "rates.csv"
    assert main(["rates", "--grid", "0.1:0.9:0.1", "--out", str(path)]) == 0
    raw = path.read_bytes()
    assert raw.count(b"\r\n") == 12 and b"\n" not in raw.replace(b"\r\n", b"")


def test_rates_grid_outside_interval(capsys):
    code, _, err = run(["rates", "--grid", "0,0.5"], capsys)
    assert code == 2 and "inside (0, 1)" in err


def test_unwritable_output(capsys, tmp_path):
    code, _, err = run(["rates", "--grid", "0.5", "--out", str(tmp_path / "missing" / "r.csv")], capsys)
    assert code == 3 and "I/O error" in err


# ---- fib ----


def test_fib_table(capsys):
    code, out, _ = run(["fib", "--kmax", "12", "--grid", "0.5,1.0"], capsys)
    assert code == 0
    rows = read_csv(out)
    header, body = rows[0], rows[1:]
    assert len(body) == 24
    col = {name: i for i, name in enumerate(header)}
    assert all(float(r[col["abs_diff"]]) <= 1e-10 for r in body)
    assert all(float(r[col["fib_recurrence"]]) == 1.0 for r in body if r[col["p"]] == "1.0")
    assert all(float(r[col["no_consec_zeros"]]) == 1.0 for r in body if r[col["k"]] == "1")


def test_fib_bad_kmax(capsys):
    assert run(["fib", "--kmax", "0"], capsys)[0] == 2


# ---- demo ----


def test_demo_summary():
    text, summary = demo_trace()
    assert summary["feedback"] == [1, 0, 1]
    assert summary["edges"] == [(1, 2), (1, 4)]
    z = summary["partition"]
    assert z[0] != z[1]
    assert "vertex deletion" in text and "clique deletion" in text


def test_demo_command(capsys):
    code, out, _ = run(["demo"], capsys)
    assert code == 0
    assert "feedback y = [1, 0, 1]" in out
    assert "remaining edges [(1, 2), (1, 4)]" in out


# ---- simulate ----


def test_simulate_bipartite(capsys):
    code, out, _ = run(["simulate", "--n", "16,64", "--p", "0.3", "--trials", "300", "--seed", "4"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "simulate"
    assert [c["n"] for c in report["cells"]] == [16, 64]
    cell = report["cells"][1]
    assert cell["t"] == 13 and cell["seed"] == 4
    est = cell["estimate"]
    assert est["ci_low"] <= est["point"] <= est["ci_high"]
    assert cell["reference"]["kind"] == "one_odd_cycle_union_bound"
    assert cell["wall_clock_s"] >= 0


def test_simulate_brute_force_under_bound(capsys):
    argv = ["simulate", "--scheme", "brute-force", "--n", "6", "--k", "3", "--l", "64", "--trials", "3000", "--seed", "9"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    cell = json.loads(out)["cells"][0]
    assert cell["t"] == 192
    est = cell["estimate"]
    assert est["point"] <= cell["reference"]["value"] + 3 * est["sigma"]


@pytest.mark.parametrize(
    "argv, msg",
    [
        (["simulate", "--p", "0.3", "--trials", "10"], "--seed"),
        (["simulate", "--p", "0.3", "--trials", "0", "--seed", "1"], "--trials"),
        (["simulate", "--trials", "10", "--seed", "1"], "--p"),
        (["simulate", "--scheme", "brute-force", "--trials", "10", "--seed", "1"], "--l"),
        (["simulate", "--p", "0.3", "--xi", "0.7", "--trials", "10", "--seed", "1"], "margin"),
        (["simulate", "--p", "0.3", "--k", "3", "--trials", "10", "--seed", "1"], "K = 2"),
        (["simulate", "--p", "0.3", "--trials", "10", "--seed", "1", "--threads", "0"], "--threads"),
    ],
)
def test_simulate_config_errors(argv, msg, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert msg in err


def test_simulate_deterministic_across_threads(tmp_path):
    reports = []
    for threads in ("1", "3"):
        path = tmp_path / f"r{threads}.json"
        argv = ["simulate", "--n", "32", "--p", "0.3", "--trials", "1200", "--seed", "11", "--threads", threads]
        assert main(argv + ["--out", str(path)]) == 0
        reports.append(json.dumps(strip_timing(json.loads(path.read_text())), sort_keys=True))
    assert reports[0] == reports[1]


def test_config_file_with_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": "16", "p": 0.3, "trials": 100, "seed": 2, "t": 5}))
    code, out, _ = run(["simulate", "--config", str(cfg), "--t", "9"], capsys)
    assert code == 0
    cell = json.loads(out)["cells"][0]
    assert (cell["n"], cell["trials"], cell["t"]) == (16, 100, 9)


def test_config_file_errors(tmp_path, capsys):
    bad_key = tmp_path / "a.json"
    bad_key.write_text(json.dumps({"bogus": 1}))
    assert run(["simulate", "--config", str(bad_key)], capsys)[0] == 2
    bad_json = tmp_path / "b.json"
    bad_json.write_text("{")
    assert run(["simulate", "--config", str(bad_json)], capsys)[0] == 2
    assert run(["simulate", "--config", str(tmp_path / "none.json")], capsys)[0] == 3


# ---- source ----


def test_source_report(capsys):
    code, out, _ = run(["source", "--n", "6", "--k", "3", "--l", "8", "--trials", "2000", "--seed", "7"], capsys)
    assert code == 0
    r = json.loads(out)
    assert r["group_sizes"] == [2, 2, 2]
    assert r["w_bits"] == pytest.approx(1.321928, abs=1e-6)
    # the two schemes fail on exactly the same draws
    assert r["source_estimate"]["failures"] == r["brute_force_estimate"]["failures"]
    assert abs(r["source_estimate"]["point"] - r["exact_ensemble_error"]) <= 4 * r["source_estimate"]["sigma"]


def test_source_needs_seed(capsys):
    assert run(["source"], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "partition_mac", "demo"], capture_output=True, text=True)
    assert proc.returncode == 0 and "remaining edges" in proc.stdout
