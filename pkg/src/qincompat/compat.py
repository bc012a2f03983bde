"""Joint measurability of qubit effect pairs and their noise-robustness incompatibility.

The incompatibility of a pair ``(x, y)`` is the least weight ``lam`` of classical
selection noise (outcome 1 drawn with probability ``(1 + bias) / 2``) that makes
the deformed pair jointly measurable.  It lies in ``[0, 1/2]``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .bloch import TOL_GEOM, FourVector, complement, mink
from .errors import ConsistencyError

TOL_ROOT = 1e-10
MAX_BISECT = 60

# |busch_c| above this is decided in floating point; below it the sign is
# settled in exact rational arithmetic on the (binary) inputs.
_EXACT_GUARD = 1e-9


class NoiseParams(NamedTuple):
    lam: float
    bias: float = 0.0


def deform(x, lam: float, bias: float = 0.0) -> FourVector:
    """Mix the effect ``x`` with a biased coin of weight ``lam``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"noise weight must lie in [0, 1], got {lam}")
    if not -1.0 <= bias <= 1.0:
        raise ValueError(f"bias must lie in [-1, 1], got {bias}")
    k = 1.0 - lam
    return FourVector(k * x[0] + lam * (1.0 + bias), k * x[1], k * x[2], k * x[3])


def _c_terms(x, y):
    xp, yp = complement(x), complement(y)
    rad = mink(x, x) * mink(xp, xp) * mink(y, y) * mink(yp, yp)
    poly = (
        -mink(x, xp) * mink(y, yp)
        + mink(x, yp) * mink(xp, y)
        + mink(x, y) * mink(xp, yp)
    )
    return rad, poly


def busch_c(x, y) -> float:
    """Compatibility function of two qubit effects; the pair is compatible iff it is >= 0.

    Raises
    ------
    ValueError
        If the square-root radicand is negative beyond rounding, i.e. an input
        is not a valid effect.
    """
    rad, poly = _c_terms(x, y)
    if rad < -TOL_GEOM:
        raise ValueError(f"negative radicand {rad:.3e}: inputs are not valid effects")
    return math.sqrt(max(rad, 0.0)) + poly


def is_compatible(x, y) -> bool:
    c = busch_c(x, y)
    if abs(c) > _EXACT_GUARD:
        return c > 0.0
    # sqrt(rad) + poly >= 0  <=>  poly >= 0 or rad >= poly**2
    fx = [Fraction(v) for v in x]
    fy = [Fraction(v) for v in y]
    rad, poly = _c_terms(fx, fy)
    if poly >= 0:
        return True
    return max(rad, Fraction(0)) >= poly * poly


def incompatibility(x, y, bias: float = 0.0, tol_root: float = TOL_ROOT) -> float:
    """Noise-robustness incompatibility of the pair ``(x, y)``.

    Returns 0 for compatible pairs. Otherwise the compatibility boundary in
    ``lam`` is located by bisection on ``[0, 1/2]`` to absolute tolerance
    ``tol_root``; the midpoint of the final bracket is returned.
    """
    if not tol_root > 0:
        raise ValueError("tol_root must be positive")
    if is_compatible(x, y):
        return 0.0

    def compatible_at(lam):
        return is_compatible(deform(x, lam, bias), deform(y, lam, bias))

    if not compatible_at(0.5):
        c_half = busch_c(deform(x, 0.5, bias), deform(y, 0.5, bias))
        if c_half < -TOL_GEOM:
            raise ConsistencyError(
                f"no compatibility boundary on [0, 1/2] for {tuple(x)}, {tuple(y)} "
                f"(C at 1/2 = {c_half:.3e})"
            )
    lo, hi = 0.0, 0.5
    for _ in range(MAX_BISECT):
        if hi - lo <= tol_root:
            break
        mid = 0.5 * (lo + hi)
        if compatible_at(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def pair_incompatibility(pair, bias: float = 0.0, tol_root: float = TOL_ROOT) -> float:
    return incompatibility(pair[0], pair[1], bias, tol_root)
