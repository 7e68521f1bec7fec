"""Cumulant of the sum, its derivative, the saddlepoint, and the rate function.

The cumulant is cum(lam) = sum_i log E e^(lam xi_i), convex with cum(0) = 0.
Its derivative equals the mean of the sum under the exponential tilt, so it
increases from 0 to the essential supremum of the sum; the saddlepoint solver
exploits that monotonicity (bracket doubling, Brent, then Newton polish with
the exact second derivative, which is the tilted variance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from ._tiltmath import tilted_stats
from .errors import NoSaddlepointError, ParameterError
from .models import SumModel

#: relative tolerance on cum'(lam) at the returned saddlepoint
ROOT_RTOL = 1e-12

#: beyond lam = 700 / a_max the tilt saturates in float64
_LAM_EXP_CAP = 700.0

#: threshold this close (relative) to the essential sup has no interior saddlepoint
_BOUNDARY_RTOL = 1e-12


def cumulant(model: SumModel, lam: float) -> float:
    """sum_i log E e^(lam xi_i), each term via a max-shifted log-sum-exp."""
    if lam < 0:
        raise ParameterError(f"lam must be >= 0, got {lam}")
    if lam == 0.0:
        return 0.0
    total = 0.0
    for dist, m in model.components:
        log_mgf, _, _, _ = tilted_stats(dist.values, dist.probs, lam)
        total += m * log_mgf
    return total


def cumulant_deriv(model: SumModel, lam: float) -> float:
    """cum'(lam) = sum_i E[xi_i e^(lam xi_i)] / E[e^(lam xi_i)], the tilted mean."""
    if lam < 0:
        raise ParameterError(f"lam must be >= 0, got {lam}")
    total = 0.0
    for dist, m in model.components:
        _, mean, _, _ = tilted_stats(dist.values, dist.probs, lam)
        total += m * mean
    return total


def _tilted_variance(model: SumModel, lam: float) -> float:
    total = 0.0
    for dist, m in model.components:
        _, _, var, _ = tilted_stats(dist.values, dist.probs, lam)
        total += m * var
    return total


@dataclass(frozen=True)
class Saddlepoint:
    """Solution of cum'(lam) = target, with the optimized log bound."""

    lam: float
    cumulant_value: float
    log_bound: float       # -lam * target + cum(lam), always <= 0
    bracket_width: float   # width of the final root bracket


def solve_target(model: SumModel, target: float) -> Saddlepoint:
    """Solve cum'(lam) = target for a raw threshold (not in sigma units)."""
    if target < 0:
        raise ParameterError(f"threshold must be >= 0, got {target}")
    sup = model.max_support
    if target >= sup * (1.0 - _BOUNDARY_RTOL):
        raise NoSaddlepointError(
            f"threshold {target:.17g} is at or beyond the essential sup {sup:.17g}"
        )
    if target == 0.0:
        return Saddlepoint(lam=0.0, cumulant_value=0.0, log_bound=0.0, bracket_width=0.0)

    lam_cap = _LAM_EXP_CAP / model.a_max
    lo, hi = 0.0, min(1.0, lam_cap)
    while cumulant_deriv(model, hi) < target:
        lo = hi
        hi = min(2.0 * hi, lam_cap)
        if hi == lo:
            raise NoSaddlepointError(
                f"tilt saturates before reaching threshold {target:.17g} "
                f"(lam capped at {lam_cap:.6g})"
            )

    lam = brentq(
        lambda t: cumulant_deriv(model, t) - target, lo, hi, xtol=1e-300, rtol=8.9e-16
    )
    # Newton polish with the exact second derivative (the tilted variance).
    for _ in range(3):
        resid = cumulant_deriv(model, lam) - target
        if abs(resid) <= ROOT_RTOL * max(1.0, target):
            break
        var = _tilted_variance(model, lam)
        if var <= 0.0:
            break
        lam = max(0.0, lam - resid / var)
    resid = cumulant_deriv(model, lam) - target
    if abs(resid) > ROOT_RTOL * max(1.0, target):
        raise NoSaddlepointError(
            f"saddlepoint solve stalled: residual {resid:.3e} at lam={lam:.17g}"
        )
    psi = cumulant(model, lam)
    return Saddlepoint(
        lam=lam,
        cumulant_value=psi,
        log_bound=min(0.0, psi - lam * target),
        bracket_width=hi - lo,
    )


def solve_saddlepoint(model: SumModel, x: float) -> Saddlepoint:
    """Saddlepoint for threshold x * sigma (x in standard-deviation units)."""
    return solve_target(model, x * model.sigma)


def chernoff_log(model: SumModel, x: float) -> float:
    """log inf_(lam >= 0) E e^(lam (S_n - x sigma))."""
    return solve_saddlepoint(model, x).log_bound


def chernoff_bound(model: SumModel, x: float) -> float:
    """The optimized exponential-Markov bound inf_(lam >= 0) E e^(lam (S_n - x sigma))."""
    return math.exp(chernoff_log(model, x))


def fenchel_legendre(model: SumModel, y: float) -> float:
    """Rate at mean level y: sup_(lam >= 0) { lam y - cum(lam)/n }.

    Zero for y <= 0 (the one-sided transform); consistent with
    chernoff_bound via exp(-n * rate(x sigma / n)).
    """
    if y <= 0.0:
        return 0.0
    n = model.n
    sp = solve_target(model, n * y)
    return sp.lam * y - sp.cumulant_value / n
