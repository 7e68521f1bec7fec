"""Sharp tail expansions: Gaussian-shaped intervals around the optimized
exponential-Markov bound, with fully explicit constants.

Each interval function returns a :class:`SharpInterval` whose center is a
scaled-normal-tail factor times the optimized Markov (Chernoff) bound and
whose half-width is an explicit error term.  Out-of-range x never
extrapolates: the result is flagged invalid and carries only the always-valid
capped Hoeffding upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .classical import SQRT_2PI, SQRT_PI, bernstein_arg, hoeffding_bound, mills_ratio, normal_cdf
from .errors import HypothesisError, ParameterError, RangeError
from .models import SumModel
from .rate import chernoff_bound, solve_saddlepoint
from .tilting import tilt

_HYP_TOL = 1e-12

#: Berry-Esseen constants for third-moment normalization: the universal one,
#: the identically-distributed refinement, the binomial refinement, and the
#: known lower bound.
C3_UNIVERSAL = 0.56
C3_IID = 0.4784
C3_BINOMIAL = 0.4215
C3_LOWER_BOUND = 0.4097


@dataclass(frozen=True)
class BerryEsseenConstants:
    """Constant policy: the universal value by default, refinements opt-in.

    For delta < 1 no numeric constant ships with the package; callers must
    supply their own via `c_user`.
    """

    c3_universal: float = C3_UNIVERSAL
    c3_iid: float = C3_IID
    c3_binomial: float = C3_BINOMIAL
    c3_lower: float = C3_LOWER_BOUND
    c_user: float | None = None

    def resolve(self, delta: float = 1.0, regime: str = "universal") -> float:
        if not (0.0 < delta <= 1.0):
            raise ParameterError(f"delta must lie in (0, 1], got {delta}")
        if delta < 1.0:
            if self.c_user is None:
                raise ParameterError(
                    "no built-in normal-approximation constant for delta < 1; supply c_user"
                )
            return self.c_user
        if self.c_user is not None:
            return self.c_user
        table = {
            "universal": self.c3_universal,
            "iid": self.c3_iid,
            "binomial": self.c3_binomial,
        }
        try:
            return table[regime]
        except KeyError:
            raise ParameterError(f"unknown constant regime {regime!r}") from None


@dataclass(frozen=True)
class SharpInterval:
    """Two-sided enclosure of the exact strict tail P(S > x sigma)."""

    name: str
    x: float
    lower: float
    center: float
    upper: float
    band: float            # half-width of the enclosure before capping
    t_param: float         # cap on B * saddle tilt used inside the constants
    range_limit: float     # largest admissible x for this bound
    valid: bool
    constants: dict = field(default_factory=dict)
    note: str | None = None

    def contains(self, p: float) -> bool:
        return self.lower <= p <= self.upper

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "x": self.x,
            "lower": self.lower,
            "center": self.center,
            "upper": self.upper,
            "band": self.band,
            "t_param": self.t_param,
            "range_limit": self.range_limit,
            "valid": self.valid,
            "constants": dict(self.constants),
        }
        if self.note is not None:
            out["note"] = self.note
        return out


def _flagged(name, model, x, range_limit, constants, note):
    """Out-of-range fallback: only the capped Hoeffding bound is asserted."""
    h = hoeffding_bound(x, model.sigma, model.n)
    return SharpInterval(
        name=name, x=x, lower=0.0, center=math.nan, upper=min(1.0, h),
        band=math.inf, t_param=math.nan, range_limit=range_limit,
        valid=False, constants=constants, note=note,
    )


def tilt_cap(x: float, sigma: float, B: float) -> float:
    """t = 2r / (1 + sqrt(1 - 4r)) with r = x B / sigma: an upper bound on
    B times the saddle tilt, finite for r < 1/4 and increasing in x."""
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    if not (sigma > 0 and B > 0):
        raise ParameterError("sigma and B must be positive")
    r = x * B / sigma
    if r >= 0.25:
        raise RangeError(f"x B / sigma = {r:.6g} is outside [0, 0.25)")
    return 2.0 * r / (1.0 + math.sqrt(1.0 - 4.0 * r))


def expansion_error(model: SumModel, x: float, B: float, delta: float = 1.0,
                    C: float = C3_UNIVERSAL) -> float:
    """The additive error term of the one-term expansion around the scaled
    normal tail, for models bounded above by 1 satisfying the curvature
    condition with constant B."""
    t = tilt_cap(x, model.sigma, B)
    lyap = model.abs_moment_sum(2 + delta) / model.sigma ** (2 + delta)
    return (math.exp(t) / (1.0 - 2.0 * t)) * (
        1.58 / SQRT_PI * B / model.sigma
        + 2.0 ** (3 + delta) * C / (1.0 - 2.0 * t) ** (delta / 2.0) * lyap
    )


def _interval_from_band(name, model, x, theta, band, t, limit, constants, note=None):
    ch = chernoff_bound(model, x)
    h = hoeffding_bound(x, model.sigma, model.n)
    center = theta * ch
    upper = min((theta + band) * ch, min(1.0, theta + band) * h, 1.0)
    lower = max(0.0, (theta - band) * ch)
    return SharpInterval(
        name=name, x=x, lower=lower, center=center, upper=upper,
        band=band * ch, t_param=t, range_limit=limit, valid=True,
        constants=constants, note=note,
    )


def expansion_interval(model: SumModel, x: float, B: float, delta: float = 1.0,
                       C: float = C3_UNIVERSAL) -> SharpInterval:
    """Enclosure Theta(x) +/- eps times the optimized Markov bound, valid for
    xi_i <= 1 under the curvature condition with constant B, x < 0.25 sigma/B.

    The caller attests the curvature condition (grid check or the
    third-moment ratio criterion); only the support hypothesis is enforced
    here.
    """
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    if model.a_max > 1.0 + _HYP_TOL:
        raise HypothesisError(f"needs xi_i <= 1, got a_max = {model.a_max}")
    constants = {"B": B, "delta": delta, "C": C}
    limit = 0.25 * model.sigma / B
    if x >= limit:
        return _flagged("expansion", model, x, limit, constants, "x out of range")
    t = tilt_cap(x, model.sigma, B)
    eps = expansion_error(model, x, B, delta, C)
    return _interval_from_band("expansion", model, x, mills_ratio(x), eps, t,
                               limit, constants)


def saddlepoint_interval(model: SumModel, x: float, delta: float = 1.0,
                         C: float = C3_UNIVERSAL) -> SharpInterval:
    """Enclosure centered at Theta(lam sigma_bar(lam)) times the optimized
    Markov bound, where lam is the saddle tilt.  Needs only bounded support
    (B = a_max) and finite (2+delta) moments; valid wherever the saddlepoint
    exists, with no range restriction in x."""
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    B = model.a_max
    sp = solve_saddlepoint(model, x)
    state = tilt(model, sp.lam)
    sbar = math.sqrt(state.variance)
    theta = mills_ratio(sp.lam * sbar)
    eps = (
        2.0 ** (3 + delta) * C * math.exp(B * sp.lam)
        * model.abs_moment_sum(2 + delta) / sbar ** (2 + delta)
    )
    ch = math.exp(sp.log_bound)
    h = hoeffding_bound(x, model.sigma, model.n) if model.a_max <= 1.0 + _HYP_TOL else 1.0
    center = theta * ch
    upper = min((theta + eps) * ch, min(1.0, theta + eps) * h, 1.0)
    lower = max(0.0, (theta - eps) * ch)
    return SharpInterval(
        name="saddlepoint", x=x, lower=lower, center=center, upper=upper,
        band=eps * ch, t_param=B * sp.lam, range_limit=math.inf, valid=True,
        constants={"B": B, "delta": delta, "C": C, "lam": sp.lam, "sigma_bar": sbar},
    )


def third_moment_interval(model: SumModel, x: float, B: float | None = None) -> SharpInterval:
    """Enclosure Theta(x) +/- 16 B / sigma times the optimized Markov bound,
    for xi_i <= 1 with the third-moment ratio constant B, x <= 0.1 sigma/B.

    B defaults to the model's ratio constant; explicit larger values keep the
    hypothesis true and only widen the band.
    """
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    if model.a_max > 1.0 + _HYP_TOL:
        raise HypothesisError(f"needs xi_i <= 1, got a_max = {model.a_max}")
    if B is None:
        B = model.b_ratio
    elif B < model.b_ratio * (1 - _HYP_TOL):
        raise HypothesisError(
            f"B = {B} is below the third-moment ratio {model.b_ratio:.6g}"
        )
    constants = {"B": B}
    limit = 0.1 * model.sigma / B
    if x > limit:
        return _flagged("third_moment", model, x, limit, constants, "x out of range")
    band = 16.0 * B / model.sigma
    return _interval_from_band("third_moment", model, x, mills_ratio(x), band,
                               tilt_cap(x, model.sigma, B), limit, constants)


def normal_tail_upper(model: SumModel, x: float, B: float | None = None) -> float:
    """Upper bound (1 - Phi(xc)) (1 + 16 sqrt(2 pi) (1 + xc) B / sigma) with
    the Bernstein-shrunk argument xc; recovers the normal-tail shape while
    decaying at the exponential rate.  Same hypotheses and range as
    :func:`third_moment_interval`."""
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    if model.a_max > 1.0 + _HYP_TOL:
        raise HypothesisError(f"needs xi_i <= 1, got a_max = {model.a_max}")
    if B is None:
        B = model.b_ratio
    elif B < model.b_ratio * (1 - _HYP_TOL):
        raise HypothesisError(
            f"B = {B} is below the third-moment ratio {model.b_ratio:.6g}"
        )
    if x > 0.1 * model.sigma / B:
        raise RangeError(f"x = {x} is beyond 0.1 sigma / B = {0.1 * model.sigma / B:.6g}")
    xc = bernstein_arg(x, model.sigma)
    return (1.0 - normal_cdf(xc)) * (1.0 + 16.0 * SQRT_2PI * (1.0 + xc) * B / model.sigma)


def subgaussian_multiplier(x: float, sigma: float, B: float,
                           C3: float = C3_UNIVERSAL) -> float:
    """The full coefficient of (1 + x) B / sigma in the sub-Gaussian-case
    normal-tail bound; at most 32.47 for x B / sigma <= 0.1 with the
    universal constant."""
    t = tilt_cap(x, sigma, B)
    return (
        math.exp(t + t * t) / (1.0 - t)
        * (math.sqrt(2.0) + 16.0 * SQRT_2PI * C3 * math.exp(0.5 * t * t) / math.sqrt(1.0 - t))
    )


def subgaussian_upper(model: SumModel, x: float, C3: float = C3_UNIVERSAL,
                      B: float | None = None) -> float:
    """(1 - Phi(x)) (1 + c_x (1 + x) B / sigma) for models with
    xi_i <= sigma_i componentwise and third-moment ratio constant B,
    x < 0.25 sigma / B.  Here the normal argument is x itself, not the
    Bernstein-shrunk value."""
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    bad = [d.upper - math.sqrt(d.variance) for d, _ in model.components
           if d.upper > math.sqrt(d.variance) + _HYP_TOL]
    if bad:
        raise HypothesisError("needs xi_i <= sigma_i for every component")
    if B is None:
        B = model.b_ratio
    elif B < model.b_ratio * (1 - _HYP_TOL):
        raise HypothesisError(
            f"B = {B} is below the third-moment ratio {model.b_ratio:.6g}"
        )
    if x >= 0.25 * model.sigma / B:
        raise RangeError(f"x = {x} is beyond 0.25 sigma / B = {0.25 * model.sigma / B:.6g}")
    cx = subgaussian_multiplier(x, model.sigma, B, C3)
    return (1.0 - normal_cdf(x)) * (1.0 + cx * (1.0 + x) * B / model.sigma)


def two_sided_multiplier(x: float, sigma: float) -> float:
    """The band constant c_x for sums with |xi_i| <= 1: at most 3.08 for
    x <= 0.1 sigma, finite up to x = 0.606 sigma."""
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    r = x / sigma
    t = r * math.exp(0.5 * math.e * r * r)
    if t >= 1.0:
        raise RangeError(f"x / sigma = {r:.6g} puts the tilt cap at t = {t:.6g} >= 1")
    return (
        2.24 * math.exp(0.5 * t * t) / math.sqrt(1.0 - t)
        + math.exp(t + t * t) / (SQRT_PI * (1.0 - t))
    )


def two_sided_interval(model: SumModel, x: float) -> SharpInterval:
    """Enclosure Theta(x) +/- c_x / sigma times the optimized Markov bound,
    for |xi_i| <= 1 and x <= 0.606 sigma.  Beyond that range only the capped
    Hoeffding upper bound is returned, flagged invalid."""
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    if model.a_max > 1.0 + _HYP_TOL or model.lower_min < -1.0 - _HYP_TOL:
        raise HypothesisError("needs |xi_i| <= 1 for every component")
    limit = 0.606 * model.sigma
    if x > limit:
        return _flagged("two_sided", model, x, limit, {}, "x out of range")
    r = x / model.sigma
    t = r * math.exp(0.5 * math.e * r * r)
    cx = two_sided_multiplier(x, model.sigma)
    band = cx / model.sigma
    return _interval_from_band("two_sided", model, x, mills_ratio(x), band, t,
                               limit, {"c_x": cx})
