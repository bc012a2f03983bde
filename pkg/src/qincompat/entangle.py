"""Concurrence of two-qubit X states, used for the locally evolved Bell probe."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import TOL_GEOM


@dataclass(frozen=True)
class XStateMatrix:
    """Two-qubit density matrix supported on the diagonal and anti-diagonal.

    ``diag`` holds the populations ``(p00, p01, p10, p11)``; ``anti`` holds the
    coherences ``q1 = <00|rho|11>`` and ``q2 = <01|rho|10>``.
    """

    diag: tuple
    anti: tuple

    def __post_init__(self):
        p00, p01, p10, p11 = self.diag
        q1, q2 = self.anti
        if min(self.diag) < -TOL_GEOM:
            raise ValueError(f"negative population in {self.diag}")
        if abs(sum(self.diag) - 1.0) > 1e-12:
            raise ValueError(f"populations sum to {sum(self.diag)!r}, not 1")
        if abs(q1) ** 2 > p00 * p11 + TOL_GEOM or abs(q2) ** 2 > p01 * p10 + TOL_GEOM:
            raise ValueError("coherences violate positivity of the 2x2 blocks")

    def to_matrix(self) -> np.ndarray:
        p00, p01, p10, p11 = self.diag
        q1, q2 = self.anti
        return np.array(
            [
                [p00, 0, 0, q1],
                [0, p01, q2, 0],
                [0, np.conj(q2), p10, 0],
                [np.conj(q1), 0, 0, p11],
            ],
            dtype=complex,
        )


def evolved_bell_state(s) -> XStateMatrix:
    """Apply the snapshot ``(a, c)`` to the first qubit of ``(|00> + |11>)/sqrt(2)``."""
    a, c = float(s[0]), complex(s[1])
    return XStateMatrix((0.5 * a, 0.0, 0.5 * (1.0 - a), 0.5), (0.5 * c, 0j))


def depolarized_bell_state(s_noise: float) -> XStateMatrix:
    """Isotropic state ``(1 - s) |Psi0><Psi0| + s I/4``."""
    k = 1.0 - s_noise
    p_in, p_out = 0.5 * k + 0.25 * s_noise, 0.25 * s_noise
    return XStateMatrix((p_in, p_out, p_out, p_in), (0.5 * k + 0j, 0j))


def concurrence(rho: XStateMatrix) -> float:
    p00, p01, p10, p11 = rho.diag
    q1, q2 = rho.anti
    k1 = abs(q1) - math.sqrt(max(p10 * p01, 0.0))
    k2 = abs(q2) - math.sqrt(max(p00 * p11, 0.0))
    return 2.0 * max(0.0, k1, k2)
