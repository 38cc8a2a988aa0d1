import json

import pytest

from eigenbond import benchmark
from eigenbond.cli import main, parse_config, preset_config
from eigenbond.errors import ValidationError


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------


def test_preset_round_trip():
    doc = preset_config("swiss1987", "cir")
    cfg = parse_config(doc)
    sched = benchmark.swiss1987_schedule()
    assert cfg["model"].kind == "cir"
    assert cfg["model"].kappa == benchmark.MODEL_PARAMS["cir"]["kappa"]
    assert cfg["sub"].is_trivial
    assert cfg["schedule"] == sched
    assert cfg["eps"] == 1e-7
    # serializing and re-parsing yields the identical schedule again
    cfg2 = parse_config(json.loads(json.dumps(doc)))
    assert cfg2["schedule"] == sched


def test_preset_with_put_and_jump_model():
    doc = preset_config("swiss1987", "subvasicek_pj", include_put=True)
    cfg = parse_config(doc)
    assert cfg["sub"].family == "ig"
    assert cfg["sub"].drift == 0.0
    assert cfg["schedule"].put_prices is not None


def test_unknown_keys_rejected():
    doc = preset_config("swiss1987", "cir")
    doc["model"]["vol_of_vol"] = 0.3
    with pytest.raises(ValidationError):
        parse_config(doc)
    doc = preset_config("swiss1987", "cir")
    doc["extras"] = {}
    with pytest.raises(ValidationError):
        parse_config(doc)


def test_empty_rates_rejected():
    doc = preset_config("swiss1987", "cir")
    doc["run"]["rates"] = []
    with pytest.raises(ValidationError):
        parse_config(doc)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def test_price_table_output(capsys):
    code, out, err = run_cli(
        capsys, "price", "--model", "cir", "--rates", "0.05", "--eps", "1e-6"
    )
    assert code == 0 and not err
    assert "0.8498" in out
    assert "n.a." in out  # rootless dates of the call-only benchmark


def test_price_csv_is_bit_stable(capsys):
    args = ("price", "--model", "cir", "--rates", "0.03,0.05", "--eps", "1e-6", "--format", "csv")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    header = out1.splitlines()[1].split(",")
    assert header[:3] == ["rate", "value", "issue_level"]
    assert "," in out1 and ";" not in out1.splitlines()[2]


def test_price_empty_rates_is_validation_error(capsys):
    code, _, err = run_cli(capsys, "price", "--model", "cir", "--rates", "")
    assert code == 2
    assert "rate" in err


def test_price_bad_config_path(capsys):
    code, _, err = run_cli(capsys, "price", "--config", "/nonexistent/cfg.json")
    assert code == 2


def test_price_numerical_failure_exit_code(tmp_path, capsys):
    doc = preset_config("swiss1987", "cir")
    doc["schedule"] = {
        "coupon": 0.0,
        "coupon_times": [1.0, 2.0, 3.0],
        "protection_index": 1,
        "notice_delta": 0.1,
        "put_prices": [5.0, 5.0],
    }
    doc["run"]["rates"] = [0.05]
    path = tmp_path / "degenerate.json"
    path.write_text(json.dumps(doc))
    code, _, err = run_cli(capsys, "price", "--config", str(path))
    assert code == 3
    assert "put region" in err


def test_reproduce_t5_matches_reference(capsys):
    code, out, _ = run_cli(capsys, "reproduce", "--table", "T5")
    assert code == 0
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert rows[0].split(",")[:2] == ["rate", "cir"]
    diffs = [float(r.split(",")[2]) for r in rows[1:]]
    assert len(diffs) == 10
    assert max(diffs) <= 5e-6


def test_reproduce_t3_has_na_cells(capsys):
    code, out, _ = run_cli(capsys, "reproduce", "--table", "T3")
    assert code == 0
    assert "n.a." in out
    # the CIR column keeps five roots and five absent cells
    rows = [line for line in out.splitlines() if line.startswith("tau_")]
    cir_cells = [r.split(",")[1] for r in rows]
    assert cir_cells.count("n.a.") == 5


def test_reproduce_unknown_table(capsys):
    code, _, err = run_cli(capsys, "reproduce", "--table", "T8")
    assert code == 2


def test_bench_validation(capsys):
    code, _, err = run_cli(capsys, "bench", "--model", "cir", "--repetitions", "1")
    assert code == 2


def test_bench_runs(capsys):
    code, out, _ = run_cli(capsys, "bench", "--model", "cir", "--repetitions", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[1].split() == ["eps", "median", "ms", "p95", "ms"]
    medians = [float(line.split()[1]) for line in lines[2:5]]
    # tighter tolerance never makes the pricing faster by more than noise
    assert medians[0] <= medians[2] * 1.5 + 5.0


def test_threads_env_is_validated(monkeypatch, capsys):
    monkeypatch.setenv("EIGENBOND_THREADS", "two")
    code, _, err = run_cli(capsys, "reproduce", "--table", "T5")
    assert code == 2


def test_threads_env_fanout(monkeypatch, capsys):
    monkeypatch.setenv("EIGENBOND_THREADS", "4")
    code, out, _ = run_cli(capsys, "reproduce", "--table", "T5")
    assert code == 0
    diffs = [
        float(line.split(",")[2])
        for line in out.splitlines()
        if not line.startswith("#") and not line.startswith("rate")
    ]
    assert max(diffs) <= 5e-6
