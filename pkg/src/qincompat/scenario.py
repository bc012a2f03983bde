"""Time sweeps of incompatibility and probe concurrence, with sudden-death detection."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple

import numpy as np

from . import channels
from .bloch import NAMED_PAIRS, MeasurementPair
from .channels import DephasingParams, LorentzianParams, PbgParams, heisenberg_evolve
from .compat import TOL_ROOT, incompatibility, is_compatible
from .entangle import concurrence, depolarized_bell_state, evolved_bell_state
from .errors import ConfigError, ConsistencyError

MODELS = {
    "dephasing": DephasingParams,
    "lorentzian": LorentzianParams,
    "pbg": PbgParams,
    "depolarizing": None,
}
FORMATS = ("csv", "json")
DEFAULT_STEPS = 600
# a pair counts as dead when its incompatibility is <= this; 0 means "exactly compatible"
TOL_DEAD = 0.0
PRESETS = ("fig1", "fig2", "fig3", "fig4", "fig5")


def default_t_max(model: str, params) -> float:
    if model == "dephasing":
        return 4.0
    if model == "lorentzian":
        return 10.0 if params.r <= 1.0 else 2.0
    if model == "pbg":
        return 10.0
    return 1.0


def _parse_pair(item, index: int) -> MeasurementPair:
    if isinstance(item, str):
        try:
            return NAMED_PAIRS[item]
        except KeyError:
            raise ConfigError(f"pairs[{index}]: unknown named pair {item!r}") from None
    if not isinstance(item, dict):
        raise ConfigError(f"pairs[{index}]: expected a name or an object")
    extra = set(item) - {"label", "first", "second"}
    if extra:
        raise ConfigError(f"pairs[{index}]: unknown fields {sorted(extra)}")
    try:
        first, second = item["first"], item["second"]
    except KeyError as e:
        raise ConfigError(f"pairs[{index}]: missing field {e}") from None
    if len(first) != 4 or len(second) != 4:
        raise ConfigError(f"pairs[{index}]: four-vectors need exactly 4 components")
    try:
        return MeasurementPair.make(first, second, str(item.get("label", f"pair{index}")))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"pairs[{index}]: {e}") from None


def _pair_dict(pair: MeasurementPair) -> dict:
    if NAMED_PAIRS.get(pair.label) == pair:
        return pair.label
    return {"label": pair.label, "first": list(pair.first), "second": list(pair.second)}


@dataclass(frozen=True)
class ScenarioConfig:
    model: str
    params: object = None
    pairs: tuple = (NAMED_PAIRS["P1"], NAMED_PAIRS["P2"])
    bias: float = 0.0
    t_max: float | None = None
    n_steps: int = DEFAULT_STEPS
    tol_root: float = TOL_ROOT
    output_format: str = "csv"
    name: str = "scenario"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {sorted(MODELS)}")
        cls = MODELS[self.model]
        if cls is not None and self.params is None:
            object.__setattr__(self, "params", cls())
        if cls is not None and not isinstance(self.params, cls):
            raise ConfigError(f"model {self.model!r} needs {cls.__name__} parameters")
        if self.t_max is None:
            object.__setattr__(self, "t_max", default_t_max(self.model, self.params))
        if not self.t_max > 0:
            raise ConfigError(f"t_max must be positive, got {self.t_max}")
        if self.model == "depolarizing" and self.t_max > 1:
            raise ConfigError("depolarizing sweeps the noise strength s, so t_max must be <= 1")
        if isinstance(self.n_steps, bool) or not isinstance(self.n_steps, int) or self.n_steps < 2:
            raise ConfigError(f"n_steps must be an integer >= 2, got {self.n_steps!r}")
        if not -1 <= self.bias <= 1:
            raise ConfigError(f"bias must lie in [-1, 1], got {self.bias}")
        if not self.tol_root > 0:
            raise ConfigError("tol_root must be positive")
        if self.output_format not in FORMATS:
            raise ConfigError(f"output_format must be one of {FORMATS}")
        if not self.pairs:
            raise ConfigError("at least one measurement pair is required")
        labels = [p.label for p in self.pairs]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"duplicate pair labels {labels}")

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        if not isinstance(d, dict):
            raise ConfigError("scenario config must be a JSON object")
        known = {"model", "params", "pairs", "bias", "t_max", "n_steps", "tol_root", "output_format", "name"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config fields {sorted(extra)}")
        if "model" not in d:
            raise ConfigError("missing required field 'model'")
        kw = dict(d)
        model = kw["model"]
        pcls = MODELS.get(model)
        raw = kw.pop("params", None) or {}
        if not isinstance(raw, dict):
            raise ConfigError("params must be an object")
        if pcls is None:
            if raw and model in MODELS:
                raise ConfigError("the depolarizing model takes no parameters")
        else:
            try:
                kw["params"] = pcls(**raw)
            except TypeError as e:
                raise ConfigError(f"bad {model} params: {e}") from None
            except ValueError as e:
                raise ConfigError(f"bad {model} params: {e}") from None
        if "pairs" in kw:
            if not isinstance(kw["pairs"], list):
                raise ConfigError("pairs must be a list")
            kw["pairs"] = tuple(_parse_pair(p, i) for i, p in enumerate(kw["pairs"]))
        for key in ("bias", "t_max", "tol_root"):
            if key in kw and kw[key] is not None and not isinstance(kw[key], (int, float)):
                raise ConfigError(f"{key} must be a number")
        return cls(**kw)

    def to_dict(self) -> dict:
        params = {} if self.params is None else dict(vars(self.params))
        return {
            "name": self.name,
            "model": self.model,
            "params": params,
            "pairs": [_pair_dict(p) for p in self.pairs],
            "bias": self.bias,
            "t_max": self.t_max,
            "n_steps": self.n_steps,
            "tol_root": self.tol_root,
            "output_format": self.output_format,
        }


def parse_configs(data) -> list[ScenarioConfig]:
    """A config file holds one scenario object or a list of them (panels)."""
    items = data if isinstance(data, list) else [data]
    if not items:
        raise ConfigError("empty scenario list")
    return [ScenarioConfig.from_dict(item) for item in items]


def load_configs(path) -> list[ScenarioConfig]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror or e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON: {e}") from None
    return parse_configs(data)


def load_preset(name: str) -> list[ScenarioConfig]:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; expected one of {PRESETS}")
    text = resources.files("qincompat.presets").joinpath(f"{name}.json").read_text(encoding="utf-8")
    return parse_configs(json.loads(text))


class TimeSeriesRecord(NamedTuple):
    t: float
    a: float
    c_re: float
    c_im: float
    concurrence: float
    incompatibility: tuple


class Transition(NamedTuple):
    time: float
    kind: str  # "death" or "revival"
    pair: str = ""


@dataclass
class TimeSeries:
    """Records of one sweep, kept together with the config that produced them."""

    config: ScenarioConfig
    records: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.records])

    def column(self, name: str) -> np.ndarray:
        """Column by record field name or by ``I_<label>``."""
        if name.startswith("I_"):
            labels = [p.label for p in self.config.pairs]
            k = labels.index(name[2:])
            return np.array([r.incompatibility[k] for r in self.records])
        return np.array([getattr(r, name) for r in self.records])


class _Evaluator:
    """Everything at one dimensionless time ``tau`` for a fixed config."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg

    def channel(self, tau: float):
        if self.cfg.model == "depolarizing":
            k = 1.0 - tau
            return k, complex(k), depolarized_bell_state(tau)
        s = channels.snapshot(self.cfg.params, tau)
        return s.a, complex(s.c), evolved_bell_state(s)

    def evolved(self, tau: float, pair: MeasurementPair):
        if self.cfg.model == "depolarizing":
            return channels.depolarize(pair.first, tau), channels.depolarize(pair.second, tau)
        s = channels.snapshot(self.cfg.params, tau)
        return heisenberg_evolve(pair.first, s), heisenberg_evolve(pair.second, s)

    def incompatibility(self, tau: float, pair: MeasurementPair) -> float:
        x, y = self.evolved(tau, pair)
        return incompatibility(x, y, self.cfg.bias, self.cfg.tol_root)

    def alive(self, tau: float, pair: MeasurementPair, tol_dead: float) -> bool:
        if tol_dead == 0.0:
            x, y = self.evolved(tau, pair)
            return not is_compatible(x, y)
        return self.incompatibility(tau, pair) > tol_dead

    def record(self, tau: float) -> TimeSeriesRecord:
        a, c, rho = self.channel(tau)
        inc = tuple(self.incompatibility(tau, p) for p in self.cfg.pairs)
        return TimeSeriesRecord(tau, a, c.real, c.imag, concurrence(rho), inc)


def _time_grid(cfg: ScenarioConfig) -> np.ndarray:
    grid = np.linspace(0.0, cfg.t_max, cfg.n_steps)
    grid[-1] = cfg.t_max
    return grid


def run_scenario(cfg: ScenarioConfig) -> TimeSeries:
    """Evaluate every record on the uniform grid of ``n_steps`` points over ``[0, t_max]``."""
    ev = _Evaluator(cfg)
    out = TimeSeries(cfg)
    for tau in _time_grid(cfg):
        tau = float(tau)
        try:
            out.records.append(ev.record(tau))
        except ConsistencyError as e:
            raise ConsistencyError(f"{cfg.name}: at t={tau!r}: {e}") from e
        except ValueError as e:
            raise ValueError(f"{cfg.name}: at t={tau!r}: {e}") from e
    return out


def detect_transitions(series: TimeSeries, pair_index: int, tol_dead: float = TOL_DEAD,
                       t_tol: float | None = None) -> list[Transition]:
    """Sudden-death and revival times of one pair's incompatibility.

    Grid points with incompatibility ``<= tol_dead`` count as dead.  Each grid
    interval where the state flips is refined by bisection on the exact
    evolved pair (not on interpolated grid values) down to ``t_tol``, which
    defaults to ``t_max * 1e-12``.
    """
    if not len(series):
        raise ValueError("empty time series")
    cfg = series.config
    pair = cfg.pairs[pair_index]
    ev = _Evaluator(cfg)
    if t_tol is None:
        t_tol = cfg.t_max * 1e-12
    alive = [r.incompatibility[pair_index] > tol_dead for r in series.records]
    events = []
    for k in range(len(alive) - 1):
        if alive[k] == alive[k + 1]:
            continue
        lo, hi = series.records[k].t, series.records[k + 1].t
        state_lo = alive[k]
        while hi - lo > t_tol:
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if ev.alive(mid, pair, tol_dead) == state_lo:
                lo = mid
            else:
                hi = mid
        events.append(Transition(0.5 * (lo + hi), "death" if state_lo else "revival", pair.label))
    return events


def all_transitions(series: TimeSeries, tol_dead: float = TOL_DEAD) -> list[Transition]:
    events = []
    for i in range(len(series.config.pairs)):
        events.extend(detect_transitions(series, i, tol_dead))
    return events


def _fmt(v: float) -> str:
    s = format(float(v), ".12g")
    return "0" if s == "-0" else s


def _clean(v: float) -> float:
    return 0.0 if v == 0 else float(v)


def emit(series: TimeSeries, transitions, fmt: str = "csv") -> bytes:
    """Serialise a sweep as CSV (records only) or JSON (config, records, transitions)."""
    labels = [p.label for p in series.config.pairs]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "a", "c_re", "c_im", "concurrence"] + [f"I_{lab}" for lab in labels])
        for r in series.records:
            w.writerow([_fmt(v) for v in (r.t, r.a, r.c_re, r.c_im, r.concurrence, *r.incompatibility)])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        records = []
        for r in series.records:
            row = {"t": _clean(r.t), "a": _clean(r.a), "c_re": _clean(r.c_re),
                   "c_im": _clean(r.c_im), "concurrence": _clean(r.concurrence)}
            row.update({f"I_{lab}": _clean(v) for lab, v in zip(labels, r.incompatibility)})
            records.append(row)
        doc = {
            "config": series.config.to_dict(),
            "records": records,
            "transitions": [{"pair": e.pair, "time": e.time, "kind": e.kind} for e in transitions],
        }
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    raise ValueError(f"unknown output format {fmt!r}")


def write_output(data: bytes, path) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as e:
        raise OSError(f"cannot write output to {path}: {e.strerror or e}") from e


def is_finite_record(r: TimeSeriesRecord) -> bool:
    return all(math.isfinite(v) for v in (r.t, r.a, r.c_re, r.c_im, r.concurrence, *r.incompatibility))
