"""CLI tests: config handling, output formats, exit statuses, subcommands."""

import json
import math

import pytest

from fuzzycorr import OptimizerConfig, StateSpec, bell_spec, find_critical_delta
from fuzzycorr.cli import RESULT_FIELDS, ConfigError, main, parse_grid


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config ")
    config = json.loads(lines[0][len("# config "):])
    header = lines[1].split(",")
    assert header == RESULT_FIELDS
    rows = [dict(zip(header, line.split(","))) for line in lines[2:]]
    return config, rows


# ------------------------------------------------------------- parse_grid

def test_parse_grid_range():
    assert parse_grid("0:1:0.5") == [0.0, 0.5, 1.0]


def test_parse_grid_list():
    assert parse_grid("0,0.25,2") == [0.0, 0.25, 2.0]


def test_parse_grid_bad_step():
    with pytest.raises(ConfigError):
        parse_grid("0:1:-0.5")


def test_parse_grid_bad_shape():
    with pytest.raises(ConfigError):
        parse_grid("0:1")


# -------------------------------------------------------------- correlate

def test_correlate_sharp_value(tmp_path):
    out = tmp_path / "rows.csv"
    code = main(["correlate", "--n", "5", "--out", str(out)])
    assert code == 0
    config, rows = read_csv(out)
    assert config["n"] == 5 and config["seed"] == 0
    resolution = [r for r in rows if r["witness_kind"] == "corr_resolution"]
    assert float(resolution[0]["witness_value"]) == pytest.approx(-1.0)


def test_correlate_reference_closed_form(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"Delta_sq": 0.25, "angle_pairs": [[0.3, -0.3]]}))
    out = tmp_path / "rows.csv"
    assert main(["correlate", "--config", str(cfg), "--out", str(out)]) == 0
    _, rows = read_csv(out)
    reference = [r for r in rows if r["witness_kind"] == "corr_reference"]
    assert float(reference[0]["witness_value"]) == pytest.approx(
        -math.exp(-1.0), abs=1e-6
    )


def test_descending_grid_exits_2(tmp_path, capsys):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"delta_sq_grid": [2.0, 1.0]}))
    assert main(["profile", "--config", str(cfg)]) == 2
    assert "delta_sq_grid" in capsys.readouterr().err


def test_unknown_config_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"no_such_key": 1}))
    assert main(["correlate", "--config", str(cfg)]) == 2
    assert "no_such_key" in capsys.readouterr().err


def test_profile_without_grid_exits_2(capsys):
    assert main(["profile"]) == 2
    assert "grid" in capsys.readouterr().err


# ---------------------------------------------------------------- profile

def test_profile_sharp_optima(tmp_path):
    out = tmp_path / "bell.csv"
    code = main([
        "profile", "--witness", "bell", "--m", "2", "--n", "5",
        "--delta-sq-grid", "0", "--restarts", "8", "--out", str(out),
    ])
    assert code == 0
    _, rows = read_csv(out)
    assert float(rows[0]["witness_value"]) == pytest.approx(2 * math.sqrt(2), abs=1e-6)
    assert rows[0]["violated"] == "true"

    out = tmp_path / "steer.csv"
    code = main([
        "profile", "--witness", "steering", "--m", "3", "--n", "5",
        "--delta-sq-grid", "0", "--restarts", "8", "--out", str(out),
    ])
    assert code == 0
    _, rows = read_csv(out)
    assert float(rows[0]["witness_value"]) == pytest.approx(math.sqrt(3), abs=1e-6)


def test_profile_curve_crosses_bound(tmp_path):
    out = tmp_path / "curve.csv"
    code = main([
        "profile", "--witness", "bell", "--m", "2", "--n", "5",
        "--delta-sq-grid", "0:16:4", "--restarts", "6", "--out", str(out),
    ])
    assert code == 0
    _, rows = read_csv(out)
    values = [float(r["witness_value"]) for r in rows]
    assert values[0] > 2.0 and values[-1] < 2.0
    # plot companion: variance, value and constant bound
    plot = (tmp_path / "curve.csv.plot.csv").read_text().splitlines()
    assert plot[0] == "variance,witness_value,bound"
    assert len(plot) == len(rows) + 1
    assert all(line.endswith(",2") for line in plot[1:])


def test_profile_reproducible_and_thread_invariant(tmp_path):
    args = [
        "profile", "--witness", "steering", "--m", "2", "--n", "5",
        "--delta-sq-grid", "0:6:2", "--restarts", "6",
    ]
    outs = []
    for name, threads in (("a.csv", "1"), ("b.csv", "1"), ("c.csv", "4")):
        out = tmp_path / name
        assert main(args + ["--threads", threads, "--out", str(out)]) == 0
        outs.append(out.read_text())
    # identical config (apart from the output path header) => identical rows
    assert outs[0].splitlines()[1:] == outs[1].splitlines()[1:]
    # different worker counts chunk the warm-started sweep differently, so
    # only demand agreement to optimizer accuracy, not bit-exactness
    for line1, line4 in zip(outs[0].splitlines()[2:], outs[2].splitlines()[2:]):
        value1 = float(line1.split(",")[6])
        value4 = float(line4.split(",")[6])
        assert value1 == pytest.approx(value4, abs=1e-7)


def test_profile_json_format(tmp_path):
    out = tmp_path / "rows.json"
    code = main([
        "profile", "--witness", "bell", "--m", "2", "--n", "5",
        "--delta-sq-grid", "0", "--restarts", "6",
        "--format", "json", "--out", str(out),
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    assert set(payload) == {"config", "rows"}
    assert payload["config"]["witness"] == "bell"
    assert set(payload["rows"][0]) == set(RESULT_FIELDS)


# --------------------------------------------------------------- boundary

def test_boundary_single_point(tmp_path):
    out = tmp_path / "boundary.csv"
    code = main([
        "boundary", "--witness", "bell", "--m", "2", "--n", "5",
        "--Delta-sq-grid", "0", "--restarts", "6",
        "--transition-tol", "0.005", "--out", str(out),
    ])
    assert code == 0
    _, rows = read_csv(out)
    direct = find_critical_delta(
        bell_spec(2), StateSpec(5, 1.0), tol=5e-3, config=OptimizerConfig(restarts=6)
    )
    assert float(rows[0]["delta_sq"]) == pytest.approx(direct.delta_sq, abs=1e-2)
    plot = (tmp_path / "boundary.csv.plot.csv").read_text().splitlines()
    assert plot[0] == "Delta_sq,delta_sq"


def test_boundary_no_transition_exits_3(capsys):
    # p = 0.5 is below the sharp-limit threshold 1/sqrt(2): nothing violates
    code = main([
        "boundary", "--witness", "bell", "--m", "2", "--n", "5",
        "--p", "0.5", "--Delta-sq-grid", "0", "--restarts", "6",
    ])
    assert code == 3
    assert "error" in capsys.readouterr().err


# ----------------------------------------------------------------- table1

def test_table1_smoke(tmp_path, capsys):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"p_list": [0.85]}))
    out = tmp_path / "table.csv"
    code = main([
        "table1", "--config", str(cfg), "--restarts", "6",
        "--transition-tol", "0.005", "--out", str(out),
    ])
    assert code == 0
    printed = capsys.readouterr().out.splitlines()
    assert any("bell" in line for line in printed)
    assert any("steering" in line for line in printed)
    _, rows = read_csv(out)
    assert len(rows) == 4  # (delta and Delta point) x (bell and steering)
    # the Delta^2 column follows the closed form ln(sqrt(2) p)/4
    expected = math.log(math.sqrt(2.0) * 0.85) / 4.0
    D2 = [float(r["Delta_sq"]) for r in rows if float(r["delta_sq"]) == 0.0]
    for value in D2:
        assert value == pytest.approx(expected, abs=5e-3)
