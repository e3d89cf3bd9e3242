import numpy as np
import pytest
from dataclasses import replace

from zalmsim import preset, run, sweep
from zalmsim.pipeline import (COLUMNS, PLOTDATA, ConfigError, OutputConfig, config_from_dict, emit,
                              load_config, parse_csv, selected_channels, to_csv, with_value)

from conftest import column


def one(cfg, *chans, **out):
    return replace(cfg, outputs=replace(cfg.outputs, channels=tuple(chans), **out))


def test_presets():
    c1, c2 = preset("case1"), preset("case2")
    assert c1.source.sigma_P == 160e-12 and c2.source.sigma_P == 16e-12
    assert c1.plan == c2.plan and c1.plan.N == 81
    with pytest.raises(ConfigError):
        preset("case3")


def test_config_rejects_unknown():
    with pytest.raises(ConfigError, match="section"):
        config_from_dict({"preset": "case1", "pump": {}})
    with pytest.raises(ConfigError, match="sigma"):
        config_from_dict({"preset": "case1", "source": {"sigma": 1e-12}})
    with pytest.raises(ConfigError):
        config_from_dict({"preset": "case1", "memory": {"mode": "magic"}})
    with pytest.raises(ConfigError):
        config_from_dict({"preset": "case1", "outputs": {"channels": [50]}})
    with pytest.raises(ConfigError):
        config_from_dict({"source": {"sigma_P": 1e-12}})  # no preset, missing fields


def test_config_from_toml(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("""
[source]
sigma_P = 16e-12
omega_PM = 4.002389e13

[plan]
delta_B = 25e9
Delta_B = 30e9
N = 11

[outputs]
channels = [-1, 0, 1]
guard_stride = 1
""")
    cfg = load_config(p)
    assert cfg.plan.N == 11 and cfg.outputs.channels == (-1, 0, 1)
    bad = tmp_path / "bad.toml"
    bad.write_text("[source\n")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_case2_channel0_row():
    row = run(one(preset("case2"), 0)).rows[0]
    assert row["pr_S_given_I"] == pytest.approx(0.44, abs=0.01)
    assert row["purity_single"] == pytest.approx(0.992, abs=0.002)
    assert row["bsm_purity"] == pytest.approx(0.985, abs=0.004)
    assert row["pr_e"] == pytest.approx(3.87e-3, abs=3e-4)
    assert row["F_a"] == pytest.approx(0.996, abs=0.001)
    assert row["R_n"] == pytest.approx(row["pr_herald"] * row["bsm_efficiency"] * row["pr_c"])


def test_empty_selection():
    t = run(one(preset("case1")))
    assert t.rows == [] and t.footer is None
    assert to_csv(t).strip() == ",".join(COLUMNS)


def test_guard_stride_selection():
    cfg = replace(preset("case1"), outputs=OutputConfig(guard_stride=3))
    assert len(selected_channels(cfg)) == 27


def test_undefined_not_nan():
    t = run(one(preset("case2"), 39, 40))
    text = to_csv(t)
    assert "nan" not in text.lower()
    assert t.rows[1]["chi_1"] is None and t.rows[0]["chi_1"] is not None
    assert t.rows[0]["chi_2"] is None
    assert "undefined" in text


def test_csv_roundtrip():
    t = run(one(preset("case2"), -3, 0, 3))
    back = parse_csv(to_csv(t))
    for r, b in zip(t.rows, back):
        for c in COLUMNS:
            if r[c] is None:
                assert b[c] is None
            elif isinstance(r[c], float):
                assert b[c] == float(f"{r[c]:.9e}")
            else:
                assert b[c] == r[c]
    assert back[-1]["n"] == "total"
    assert back[-1]["R_total"] == float(f"{t.footer['R_total']:.9e}")


def test_deterministic_across_workers():
    a = to_csv(run(one(preset("case1"), -2, 5, 9, workers=1)))
    b = to_csv(run(one(preset("case1"), -2, 5, 9, workers=4)))
    assert a == b


def test_metric_subset():
    t = run(one(preset("case1"), 0, metrics=("pr_I", "pr_e")))
    assert t.columns == ["n", "pr_I", "pr_e"]
    with pytest.raises(ConfigError):
        config_from_dict({"preset": "case1", "outputs": {"metrics": ["nope"]}})


def test_verify_grid_columns():
    t = run(one(preset("case2"), 0, verify_grid=True))
    assert t.columns[-2:] == ["grid_drift", "grid_warning"]
    assert t.rows[0]["grid_drift"] < 1e-3 and t.rows[0]["grid_warning"] is False


@pytest.mark.parametrize("mode", ["narrowband", "broadband"])
def test_memory_modes(mode):
    cfg = one(preset("case2"), 0)
    cfg = replace(cfg, memory=replace(cfg.memory, mode=mode))
    row = run(cfg).rows[0]
    assert 0 < row["eta_cavity"] < 1
    assert 0 < row["F_b"] <= row["pr_c"] + 1e-12
    assert row["R_n"] > 0


def test_emit_plotdata(tables, tmp_path):
    files = emit(tables("case1"), "plotdata", tmp_path)
    assert {f.stem for f in files} == set(PLOTDATA)
    rows = parse_csv((tmp_path / "fig8_purity.csv").read_text())
    assert len(rows) == 81 and list(rows[0]) == ["n", "purity_single"]
    with pytest.raises(ConfigError):
        emit(tables("case1"), "xlsx", tmp_path)


def test_emit_csv_to_directory(tmp_path):
    [p] = emit(run(one(preset("case1"), 0)), "csv", tmp_path)
    assert p.name == "report.csv" and p.read_text().startswith("n,")


def test_sweep_recovers_presets():
    cfg = one(preset("case1"), 0, 7)
    t = sweep(cfg, "sigma_P", [160e-12, 16e-12])
    rows = [r for r in t.rows if r["n"] != "total"]
    c1 = run(cfg).rows
    c2 = run(one(preset("case2"), 0, 7)).rows
    for got, ref in zip(rows, c1 + c2):
        for c in COLUMNS:
            assert got[c] == ref[c]


def test_sweep_single_value_is_run():
    cfg = one(preset("case2"), -1, 2)
    t = sweep(cfg, "sigma_P", [16e-12])
    r = run(cfg)
    assert [dict((c, x[c]) for c in COLUMNS) for x in t.rows[:-1]] == r.rows
    assert t.rows[-1]["R_total"] == r.footer["R_total"]


def test_sweep_tradeoff_monotone():
    sigmas = [5e-12, 10e-12, 20e-12, 40e-12, 80e-12, 160e-12, 320e-12]
    t = sweep(one(preset("case1"), 0), "sigma_P", sigmas)
    rows = [r for r in t.rows if r["n"] != "total"]
    eff = np.array([r["pr_S_given_I"] for r in rows])
    pur = np.array([r["purity_single"] for r in rows])
    assert np.all(np.diff(eff) >= 0)
    assert np.all(np.diff(pur) <= 0)


def test_sweep_unknown_param():
    with pytest.raises(ConfigError):
        sweep(preset("case1"), "temperature", [1.0])
    with pytest.raises(ConfigError):
        with_value(preset("case1"), "sigma_P", -1.0)


def test_full_run_columns_flat(tables):
    t = tables("case1")
    assert len(t.rows) == 81
    assert [r["n"] for r in t.rows] == list(range(-40, 41))
    pe = column(t, "pr_e")
    assert np.ptp(pe) / pe.mean() < 0.01
