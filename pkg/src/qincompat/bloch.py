"""Minkowski four-vector geometry for binary qubit effects.

A binary qubit POVM is fixed by its effect ``E1 = (x0 * I + x . sigma) / 2``,
which we store as the four-vector ``(x0, x1, x2, x3)``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

# absolute slack on cone-membership inequalities
TOL_GEOM = 1e-12


class FourVector(NamedTuple):
    x0: float
    x1: float
    x2: float
    x3: float

    @property
    def spatial(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    def operator(self) -> np.ndarray:
        """The 2x2 effect operator ``(x0 I + x . sigma) / 2``."""
        x0, x1, x2, x3 = self
        return 0.5 * np.array(
            [[x0 + x3, x1 - 1j * x2], [x1 + 1j * x2, x0 - x3]], dtype=complex
        )


def mink(x, y) -> float:
    """Minkowski scalar product ``x0*y0 - x1*y1 - x2*y2 - x3*y3``."""
    return x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3]


def complement(x) -> FourVector:
    """Four-vector of the other outcome's effect, ``E0 = I - E1``."""
    return FourVector(2 - x[0], -x[1], -x[2], -x[3])


def _in_cone(x, tol: float) -> bool:
    return mink(x, x) >= -tol and x[0] >= -tol


def is_valid_effect(x, tol: float = TOL_GEOM) -> bool:
    """True when ``0 <= E1 <= I``, i.e. both ``x`` and its complement lie in the forward cone."""
    return _in_cone(x, tol) and _in_cone(complement(x), tol)


def rotate(x, R, tol: float = TOL_GEOM) -> FourVector:
    """Apply a proper rotation ``R`` to the spatial (Bloch) part of ``x``."""
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise ValueError(f"rotation must be 3x3, got shape {R.shape}")
    if not np.allclose(R @ R.T, np.eye(3), rtol=0.0, atol=tol) or abs(np.linalg.det(R) - 1.0) > tol:
        raise ValueError("R is not a proper rotation (orthogonal with det +1)")
    v = R @ np.array([x[1], x[2], x[3]], dtype=float)
    return FourVector(float(x[0]), float(v[0]), float(v[1]), float(v[2]))


class MeasurementPair(NamedTuple):
    """Two binary measurements whose joint measurability is tracked."""

    first: FourVector
    second: FourVector
    label: str = "pair"

    @classmethod
    def make(cls, first, second, label: str = "pair") -> "MeasurementPair":
        """Build a pair, rejecting members that are not valid effects."""
        first, second = FourVector(*map(float, first)), FourVector(*map(float, second))
        for name, v in (("first", first), ("second", second)):
            if not is_valid_effect(v):
                raise ValueError(f"{label}: {name} member {tuple(v)} is not a valid effect")
        return cls(first, second, label)


# maximally incompatible sharp x/y measurements
P1 = MeasurementPair.make((1, 1, 0, 0), (1, 0, 1, 0), "P1")
# sharp x/z measurements
P2 = MeasurementPair.make((1, 1, 0, 0), (1, 0, 0, 1), "P2")

NAMED_PAIRS = {"P1": P1, "P2": P2}
