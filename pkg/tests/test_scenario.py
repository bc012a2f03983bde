import json
import math

import numpy as np
import pytest

from qincompat.bloch import P1, P2
from qincompat.channels import DephasingParams, LorentzianParams, PbgParams
from qincompat.entangle import concurrence
from qincompat.errors import ConfigError, ConsistencyError
from qincompat.scenario import (
    PRESETS,
    ScenarioConfig,
    TimeSeries,
    Transition,
    _Evaluator,
    all_transitions,
    detect_transitions,
    emit,
    is_finite_record,
    load_configs,
    load_preset,
    parse_configs,
    run_scenario,
    write_output,
)

ROOT = 1 - 1 / math.sqrt(2)


def small(model="dephasing", **kw):
    kw.setdefault("n_steps", 41)
    return ScenarioConfig(model=model, **kw)


# config validation

def test_defaults():
    cfg = ScenarioConfig(model="dephasing")
    assert cfg.params == DephasingParams()
    assert cfg.pairs == (P1, P2)
    assert cfg.t_max == 4.0 and cfg.n_steps == 600 and cfg.tol_root == 1e-10
    assert ScenarioConfig(model="lorentzian", params=LorentzianParams(r=50)).t_max == 2.0
    assert ScenarioConfig(model="pbg").t_max == 10.0


@pytest.mark.parametrize(
    "d",
    [
        {"model": "markov"},
        {"model": "dephasing", "t_max": 0},
        {"model": "dephasing", "n_steps": 1},
        {"model": "dephasing", "n_steps": 2.5},
        {"model": "dephasing", "bias": 2},
        {"model": "dephasing", "output_format": "xml"},
        {"model": "dephasing", "pairs": []},
        {"model": "dephasing", "pairs": ["P1", "P1"]},
        {"model": "dephasing", "pairs": ["P3"]},
        {"model": "dephasing", "pairs": [{"label": "q", "first": [1, 1, 0, 0], "second": [1, 0, 0]}]},
        {"model": "dephasing", "pairs": [{"label": "q", "first": [1, 2, 0, 0], "second": [1, 0, 1, 0]}]},
        {"model": "dephasing", "pairs": [{"label": "q", "first": [1, 1, 0, 0], "second": [1, 0, 1, 0], "x": 1}]},
        {"model": "dephasing", "params": {"sigma": -1}},
        {"model": "dephasing", "params": {"gamma": 1}},
        {"model": "depolarizing", "params": {"r": 1}},
        {"model": "depolarizing", "t_max": 1.5},
        {"model": "dephasing", "tmax": 3},
        {"t_max": 3},
        "dephasing",
    ],
)
def test_bad_configs_rejected(d):
    with pytest.raises(ConfigError):
        parse_configs(d)


def test_custom_pair_and_roundtrip():
    d = {
        "name": "custom",
        "model": "lorentzian",
        "params": {"r": 0.3},
        "pairs": ["P2", {"label": "tilted", "first": [1, 0.6, 0.6, 0], "second": [1.1, 0, 0.5, 0.5]}],
        "bias": 0.2,
        "t_max": 3,
        "n_steps": 11,
    }
    (cfg,) = parse_configs(d)
    assert cfg.pairs[1].label == "tilted"
    again = ScenarioConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg


def test_load_configs_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_configs(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_configs(bad)


@pytest.mark.parametrize("name", PRESETS)
def test_presets_load(name):
    cfgs = load_preset(name)
    assert cfgs and all(c.pairs == (P1, P2) for c in cfgs)
    assert len({c.name for c in cfgs}) == len(cfgs)


def test_unknown_preset():
    with pytest.raises(ConfigError):
        load_preset("fig9")


# sweeps

def test_grid_and_initial_record():
    cfg = small(t_max=3.0, n_steps=7)
    series = run_scenario(cfg)
    assert len(series) == 7
    assert np.allclose(series.times, np.linspace(0, 3, 7)) and series.times[-1] == 3.0
    r0 = series[0]
    assert (r0.t, r0.a, r0.c_re, r0.c_im, r0.concurrence) == (0.0, 1.0, 1.0, 0.0, 1.0)
    assert all(abs(v - ROOT) < 1e-9 for v in r0.incompatibility)


def test_two_point_sweep():
    series = run_scenario(small(t_max=1e-12, n_steps=2))
    assert series[1].concurrence == pytest.approx(1.0)
    assert series[1].incompatibility[0] == pytest.approx(ROOT, abs=1e-9)


@pytest.mark.parametrize(
    "cfg",
    [
        small(),
        small("lorentzian", params=LorentzianParams(r=80)),
        small("pbg", params=PbgParams(z=0.0)),
        small("depolarizing"),
        small(bias=0.5, params=DephasingParams(A=1.0, delta_omega=16)),
    ],
    ids=["dephasing", "lorentzian", "pbg", "depolarizing", "biased"],
)
def test_record_invariants(cfg):
    for r in run_scenario(cfg):
        assert is_finite_record(r)
        assert 0 <= r.concurrence <= 1
        assert all(0 <= v <= 0.5 + cfg.tol_root for v in r.incompatibility)
        assert abs(r.c_re + 1j * r.c_im) ** 2 <= r.a + 1e-9


def test_column_access():
    series = run_scenario(small(n_steps=5))
    assert np.array_equal(series.column("I_P1"), [r.incompatibility[0] for r in series])
    assert np.array_equal(series.column("concurrence"), [r.concurrence for r in series])


def test_errors_carry_time():
    cfg = small("pbg", params=PbgParams(z=-(27 / 4) ** (1 / 3)), n_steps=3)
    with pytest.raises(ConsistencyError, match="t=0.0"):
        run_scenario(cfg)


# transitions

def test_markov_dephasing_single_death():
    series = run_scenario(small(n_steps=200, t_max=4.0))
    assert detect_transitions(series, 0) == [Transition(pytest.approx(math.sqrt(math.log(2)), abs=1e-9), "death", "P1")]
    assert detect_transitions(series, 1) == []


def test_revivals_alternate():
    series = run_scenario(small(params=DephasingParams(A=1.0, delta_omega=16.0), n_steps=400))
    events = detect_transitions(series, 0)
    kinds = [e.kind for e in events]
    assert kinds[0] == "death" and "revival" in kinds
    assert all(a != b for a, b in zip(kinds, kinds[1:]))
    assert all(a.time < b.time for a, b in zip(events, events[1:]))


def test_refinement_uses_true_function():
    # a coarse grid and a fine grid give the same refined time
    coarse = detect_transitions(run_scenario(small(n_steps=9)), 0)
    fine = detect_transitions(run_scenario(small(n_steps=900)), 0)
    assert abs(coarse[0].time - fine[0].time) < 1e-10


def test_positive_tolerance_variant():
    series = run_scenario(small(n_steps=100))
    (e,) = detect_transitions(series, 0, tol_dead=1e-9)
    assert abs(e.time - math.sqrt(math.log(2))) < 1e-6


def test_empty_series_rejected():
    with pytest.raises(ValueError):
        detect_transitions(TimeSeries(small()), 0)


@pytest.mark.parametrize(
    "cfg",
    [
        small(params=DephasingParams(A=1.0, delta_omega=16.0), n_steps=300),
        small("lorentzian", params=LorentzianParams(r=0.2), t_max=10, n_steps=200),
        small("lorentzian", params=LorentzianParams(r=100), t_max=2, n_steps=300),
        small("pbg", params=PbgParams(z=0.0), t_max=10, n_steps=200),
    ],
    ids=["dephasing", "lorentzian-markov", "lorentzian-oscillating", "pbg"],
)
def test_incompatibility_dies_before_entanglement(cfg):
    series = run_scenario(cfg)
    ev = _Evaluator(cfg)
    for e in all_transitions(series):
        if e.kind != "death":
            continue
        _, c, rho = ev.channel(e.time)
        e_conc = concurrence(rho)
        assert e_conc > 0
        if e.pair == "P1":
            assert e_conc >= 1 / math.sqrt(2) - 1e-6


# emission

def test_csv_layout():
    series = run_scenario(small(n_steps=3))
    text = emit(series, [], "csv").decode()
    lines = text.split("\n")
    assert lines[0] == "t,a,c_re,c_im,concurrence,I_P1,I_P2"
    assert lines[1].startswith("0,1,1,0,1,0.292893218")
    assert text.endswith("\n") and "\r" not in text
    assert len(lines) == 5


def test_json_layout_empty_transitions():
    series = run_scenario(small(model="dephasing", params=DephasingParams(A=0.0), t_max=0.5, n_steps=3))
    doc = json.loads(emit(series, all_transitions(series), "json"))
    assert doc["transitions"] == []
    assert set(doc) == {"config", "records", "transitions"}
    assert doc["records"][0]["I_P1"] == pytest.approx(ROOT)
    assert ScenarioConfig.from_dict(doc["config"]) == series.config


def test_json_transitions_listed():
    series = run_scenario(small(n_steps=50))
    doc = json.loads(emit(series, all_transitions(series), "json"))
    assert [t["kind"] for t in doc["transitions"]] == ["death"]
    assert doc["transitions"][0]["pair"] == "P1"


def test_no_negative_zero():
    series = run_scenario(small(params=DephasingParams(A=1.0, delta_omega=8.0, omega1=1.0), n_steps=50))
    assert "-0," not in emit(series, [], "csv").decode()
    assert "-0.0," not in emit(series, [], "json").decode()


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_byte_determinism(fmt):
    cfg = small("lorentzian", params=LorentzianParams(r=50), n_steps=60)
    a = run_scenario(cfg)
    b = run_scenario(cfg)
    assert emit(a, all_transitions(a), fmt) == emit(b, all_transitions(b), fmt)


def test_unknown_format():
    with pytest.raises(ValueError):
        emit(run_scenario(small(n_steps=2)), [], "xml")


def test_write_output_reports_path(tmp_path):
    target = tmp_path / "no" / "such" / "dir" / "out.csv"
    with pytest.raises(OSError, match="out.csv"):
        write_output(b"x", target)
