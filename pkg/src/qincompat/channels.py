"""Qubit dynamical maps parameterised by a damping factor ``a`` and coherence factor ``c``.

In the Schrodinger picture a snapshot ``(a, c)`` acts on a 2x2 matrix as::

    [[T00, T01],      [[a T00,        c T01          ],
     [T10, T11]]  ->   [c* T10,  T11 + (1 - a) T00   ]]

Dephasing has ``a = 1``; amplitude damping has ``a = |G|**2`` and ``c = G``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .bloch import TOL_GEOM, FourVector
from .errors import ConsistencyError
from .specfun import erfc_scaled


class ChannelSnapshot(NamedTuple):
    a: float
    c: complex

    def is_valid(self, tol: float = TOL_GEOM) -> bool:
        """Complete positivity: ``|c|^2 <= a <= 1`` and ``a >= 0``."""
        return -tol <= self.a <= 1.0 + tol and abs(self.c) ** 2 <= self.a + tol


IDENTITY = ChannelSnapshot(1.0, 1.0 + 0j)


@dataclass(frozen=True)
class DephasingParams:
    """Two-Gaussian photon frequency distribution.

    ``delta_omega`` and ``omega1`` are measured in units of ``sigma``.
    """

    A: float = 0.0
    delta_omega: float = 2.0
    sigma: float = 1.0
    omega1: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not self.A >= 0:
            raise ValueError(f"A must be non-negative, got {self.A}")

    @property
    def time_scale(self) -> float:
        return self.sigma


@dataclass(frozen=True)
class LorentzianParams:
    """Leaky-cavity reservoir; ``r`` is the coupling over the spectral width."""

    r: float = 0.2
    lambda_width: float = 1.0

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if not self.lambda_width > 0:
            raise ValueError(f"lambda_width must be positive, got {self.lambda_width}")

    @property
    def time_scale(self) -> float:
        return self.lambda_width


@dataclass(frozen=True)
class PbgParams:
    """Photonic band-gap reservoir; ``z`` is the detuning from the gap edge over ``beta``."""

    beta: float = 1.0
    z: float = 0.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")

    @property
    def time_scale(self) -> float:
        return self.beta


def dephasing_snapshot(t: float, p: DephasingParams) -> ChannelSnapshot:
    s = p.sigma * t
    w1 = p.omega1 * s
    w2 = (p.omega1 + p.delta_omega) * s
    c = math.exp(-0.5 * s * s) / (1.0 + p.A) * (cmath.exp(-1j * w1) + p.A * cmath.exp(-1j * w2))
    return ChannelSnapshot(1.0, c)


def lorentzian_propagator(t: float, p: LorentzianParams) -> float:
    """Excited-state amplitude G(t) for the Lorentzian reservoir.

    ``d = sqrt(1 - 2r)`` is taken in complex arithmetic, so ``r > 1/2`` turns the
    hyperbolic functions into damped oscillations with the same code.
    """
    half = 0.5 * p.lambda_width * t
    d = cmath.sqrt(1.0 - 2.0 * p.r)
    dh = d * half
    if abs(d) < 1e-8:
        sinh_over_d = half * (1.0 + dh * dh / 6.0)
    else:
        sinh_over_d = cmath.sinh(dh) / d
    g = math.exp(-half) * (cmath.cosh(dh) + sinh_over_d)
    if abs(g.imag) >= 1e-12:
        raise ConsistencyError(f"Lorentzian G({t}) has imaginary part {g.imag:.3e}")
    return g.real


def _amplitude_snapshot(g: complex) -> ChannelSnapshot:
    mod = abs(g)
    if mod > 1.0 + 1e-9:
        raise ConsistencyError(f"|G| = {mod!r} exceeds 1")
    return ChannelSnapshot(min(mod * mod, 1.0), complex(g))


def lorentzian_snapshot(t: float, p: LorentzianParams) -> ChannelSnapshot:
    return _amplitude_snapshot(lorentzian_propagator(t, p))


DEGENERATE_SPLIT = 1e-6


class PbgCoefficients(NamedTuple):
    b: tuple  # b1, b2, b3
    v: tuple  # v1, v2, v3
    root_b2: tuple  # principal sqrt(b_j ** 2)


@lru_cache(maxsize=64)
def pbg_coefficients(z: float) -> PbgCoefficients:
    """Coefficients of the band-gap propagator for scaled detuning ``z``.

    ``sqrt(b_j**2)`` uses the principal branch, so it equals ``+-b_j`` depending on
    the half plane of ``b_j``; ``G(0) = 1`` is verified before returning.
    """
    disc = cmath.sqrt(1.0 + 4.0 / 27.0 * z**3)
    a_plus = (0.5 + 0.5 * disc) ** (1.0 / 3.0)
    a_minus = (0.5 - 0.5 * disc) ** (1.0 / 3.0)
    e = cmath.exp
    pi = math.pi
    b1 = (a_plus + a_minus) * e(1j * pi / 4)
    b2 = (a_plus * e(-1j * pi / 6) - a_minus * e(1j * pi / 6)) * e(-1j * pi / 4)
    b3 = (a_plus * e(1j * pi / 6) - a_minus * e(-1j * pi / 6)) * e(3j * pi / 4)
    b = (b1, b2, b3)
    for i in range(3):
        for j in range(i + 1, 3):
            # b2 and b3 merge at 1 + 4 z^3 / 27 = 0; the split there grows like a square root
            if abs(b[i] - b[j]) < DEGENERATE_SPLIT:
                raise ConsistencyError(f"degenerate band-gap coefficients at z={z}: b{i+1} == b{j+1}")
    v = tuple(b[j] / ((b[j] - b[(j + 1) % 3]) * (b[j] - b[(j + 2) % 3])) for j in range(3))
    roots = tuple(cmath.sqrt(bj * bj) for bj in b)
    coef = PbgCoefficients(b, v, roots)
    g0 = _pbg_sum(coef, 0.0, 0.0)
    if abs(g0 - 1.0) > 1e-6:
        raise ConsistencyError(f"band-gap propagator G(0) = {g0} != 1 at z={z}")
    return coef


def _pbg_sum(coef: PbgCoefficients, bt: float, detuning_t: float) -> complex:
    (b1, b2, _), (v1, v2, _), (_, s2, _) = coef.b, coef.v, coef.root_b2
    g = 2.0 * v1 * b1 * cmath.exp(b1 * b1 * bt) + v2 * (b2 + s2) * cmath.exp(b2 * b2 * bt)
    for bj, vj, sj in zip(coef.b, coef.v, coef.root_b2):
        # [1 - Phi(sqrt(u))] exp(u) with u = beta b_j^2 t
        g -= vj * sj * erfc_scaled(cmath.sqrt(bj * bj * bt))
    return g * cmath.exp(1j * detuning_t)


def pbg_propagator(t: float, p: PbgParams) -> complex:
    bt = p.beta * t
    return _pbg_sum(pbg_coefficients(float(p.z)), bt, p.z * bt)


def pbg_snapshot(t: float, p: PbgParams) -> ChannelSnapshot:
    return _amplitude_snapshot(pbg_propagator(t, p))


_SNAPSHOTS = {
    DephasingParams: dephasing_snapshot,
    LorentzianParams: lorentzian_snapshot,
    PbgParams: pbg_snapshot,
}


def snapshot(params, tau: float) -> ChannelSnapshot:
    """Snapshot at dimensionless time ``tau`` (``sigma t``, ``lambda t`` or ``beta t``)."""
    return _SNAPSHOTS[type(params)](tau / params.time_scale, params)


def heisenberg_evolve(x, s: ChannelSnapshot) -> FourVector:
    """Four-vector of the effect ``x`` transported back to time zero by the snapshot's dual map."""
    a, c = s.a, complex(s.c)
    return FourVector(
        x[0] + (a - 1.0) * x[3],
        c.real * x[1] - c.imag * x[2],
        c.imag * x[1] + c.real * x[2],
        a * x[3],
    )


def depolarize(x, s_noise: float) -> FourVector:
    """Heisenberg action of ``(1 - s) Id + s tr(.) I/2``: shrinks the Bloch part by ``1 - s``."""
    if not 0.0 <= s_noise <= 1.0:
        raise ValueError(f"depolarizing strength must lie in [0, 1], got {s_noise}")
    k = 1.0 - s_noise
    return FourVector(x[0], k * x[1], k * x[2], k * x[3])
