import csv
import io
import json

import numpy as np
import pytest

from qwalk.cli import main, parse_range
from qwalk.statevec_full import FullState, uniform_state


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_parse_range():
    assert parse_range("4..12") == (4, 12)
    assert parse_range("8") == (8, 8)


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "8")
    assert code == 0
    assert out.startswith("#schema=qwalk.spectrum/1")
    rows = csv_rows(out)
    assert len(rows) == 32
    assert sum(r["operator"] == "U" for r in rows) == 16
    assert sum(r["operator"] == "Uprime" and r["on_arc"] == "true" for r in rows) == 2


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "4", "--format", "json")
    assert code == 0
    records = json.loads(out)
    assert len(records) == 16
    assert set(records[0]) == {"n", "operator", "re", "im", "residual", "on_arc"}


def test_spectrum_odd_n_allowed(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "3")
    assert code == 0
    assert len(csv_rows(out)) == 12


def test_search_json(capsys):
    code, out, _ = run(capsys, "search", "--n", "8", "--seed", "1", "--trials", "10000")
    assert code == 0
    data = json.loads(out)
    assert data["t_f"] == 18
    assert data["p_exact"] == pytest.approx(0.43447149924738, abs=1e-12)
    assert abs(data["p_empirical"] - data["p_exact"]) <= 4 * np.sqrt(0.25 / 10000)


def test_search_target_relabeling(capsys):
    _, a, _ = run(capsys, "search", "--n", "8", "--target", "137", "--backend", "full", "--trials", "10")
    _, b, _ = run(capsys, "search", "--n", "8", "--backend", "full", "--trials", "10")
    assert abs(json.loads(a)["p_exact"] - json.loads(b)["p_exact"]) <= 1e-12


def test_search_capacity_error(capsys):
    code, out, err = run(capsys, "search", "--n", "40", "--backend", "full")
    assert code == 2
    assert "cap" in err and out == ""


def test_search_capacity_env(capsys, monkeypatch):
    monkeypatch.setenv("QWALK_MAX_N", "6")
    code, _, _ = run(capsys, "search", "--n", "8", "--backend", "full")
    assert code == 2


def test_search_stated_convention(capsys):
    _, out, _ = run(capsys, "search", "--n", "8", "--t-f-convention", "stated", "--trials", "10")
    assert json.loads(out)["t_f"] == 25


def test_curve(capsys):
    code, out, _ = run(capsys, "curve", "--n", "8", "--t-max", "54")
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 55
    ps = [float(r["p_target"]) for r in rows]
    assert abs(int(np.argmax(ps)) - 18) <= 2


def test_evolve_zero_steps(capsys):
    code, out, _ = run(capsys, "evolve", "--n", "4", "--steps", "0")
    assert code == 0
    state = FullState.from_dict(json.loads(out))
    np.testing.assert_array_equal(state.amps, uniform_state(4).amps)


def test_evolve_collapsed_csv(capsys):
    code, out, _ = run(capsys, "evolve", "--n", "4", "--steps", "3", "--backend", "collapsed", "--format", "csv")
    assert code == 0
    assert len(csv_rows(out)) == 8


def test_verify_range(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, _, _ = run(capsys, "verify", "--n-range", "4..10", "--output", str(path))
    report = json.loads(path.read_text())
    assert [r["n"] for r in report["results"]] == [4, 6, 8, 10]
    for r in report["results"]:
        arc = next(c for c in r["checks"] if c["name"] == "arc_count")
        assert arc["value"] == 2
    assert code == 0


def test_verify_n8_reports_p0_slack(capsys):
    code, out, _ = run(capsys, "verify", "--n-range", "8..8")
    report = json.loads(out)
    check = next(c for c in report["results"][0]["checks"] if c["name"] == "overlap_p0")
    assert check["bound"] == 0.453125
    assert check["slack"] == pytest.approx(check["value"] - 0.453125)
    assert check["slack"] > 0
    assert code == 0


def test_verify_failure_exit_code(capsys):
    # the curve-peak location criterion does not hold at n = 12 (see README)
    code, out, _ = run(capsys, "verify", "--n-range", "12..12")
    report = json.loads(out)
    failed = [c["name"] for c in report["results"][0]["checks"] if not c["passed"]]
    assert failed == ["curve_peak_offset"]
    assert code == 1


def test_verify_rejects_odd_only(capsys):
    code, _, err = run(capsys, "verify", "--n-range", "5..5")
    assert code == 2
    assert "even" in err


def test_usage_errors(capsys):
    assert run(capsys, "spectrum")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "verify", "--n-range", "10..4")[0] == 2
    assert run(capsys, "search", "--n", "4", "--target", "99")[0] == 2


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--n-range", "4..12")
    assert code == 0
    rows = csv_rows(out)
    assert [int(r["n"]) for r in rows] == list(range(4, 13))
    for r in rows:
        n = int(r["n"])
        assert float(r["p_grover"]) >= 1 - 2.0**-n
        assert 0.5 - 4 / n <= float(r["p_walk"]) <= 0.5


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"n": 6, "trials": 20, "seed": 5}))
    code, out, _ = run(capsys, "search", "--config", str(cfg))
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 6 and data["trials"] == 20 and data["seed"] == 5
    # explicit flags override the config
    _, out, _ = run(capsys, "search", "--config", str(cfg), "--n", "8")
    assert json.loads(out)["n"] == 8


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text("[1, 2]")
    assert run(capsys, "search", "--config", str(cfg))[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--n", "6"],
        ["search", "--n", "8", "--seed", "7", "--trials", "5000"],
        ["curve", "--n", "6"],
        ["compare", "--n-range", "4..8", "--format", "json"],
    ],
)
def test_byte_identical_outputs(capsys, tmp_path, argv):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(argv + ["--output", str(a)]) == 0
    assert main(argv + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
