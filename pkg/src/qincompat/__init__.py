"""Incompatibility dynamics of qubit measurement pairs under open-system noise."""
from .bloch import P1, P2, FourVector, MeasurementPair, complement, is_valid_effect, mink, rotate
from .channels import (
    ChannelSnapshot,
    DephasingParams,
    LorentzianParams,
    PbgParams,
    dephasing_snapshot,
    depolarize,
    heisenberg_evolve,
    lorentzian_snapshot,
    pbg_snapshot,
)
from .compat import NoiseParams, busch_c, deform, incompatibility, is_compatible
from .entangle import XStateMatrix, concurrence, evolved_bell_state
from .errors import ConfigError, ConsistencyError
from .scenario import ScenarioConfig, TimeSeries, detect_transitions, emit, run_scenario
from .specfun import erf_complex

__version__ = "0.1.0"
