"""Closed-form classical tail bounds and the scaled normal-tail functions.

Everything here is evaluated in log space and exponentiated last, because the
exponents reach order n ~ 1e4 in the sweeps.  The scaled Gaussian tail
(Mill's ratio) goes through scipy's erfcx instead of the literal product
(1 - Phi(x)) * exp(x^2/2), which overflows past x ~ 37.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special

from .errors import ParameterError

SQRT_PI = math.sqrt(math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)


def normal_cdf(x: float) -> float:
    """Standard normal distribution function Phi(x)."""
    return float(special.ndtr(x))


def mills_ratio(x: float) -> float:
    """(1 - Phi(x)) * exp(x^2/2), stable for x up to 1e4 and beyond.

    Equals erfcx(x/sqrt(2)) / 2; strictly decreasing from 1/2 at x = 0 and
    sandwiched between 1/(sqrt(2 pi)(1+x)) and 1/(sqrt(pi)(1+x)).
    """
    if x < 0:
        raise ParameterError(f"mills_ratio requires x >= 0, got {x}")
    return 0.5 * float(special.erfcx(x / math.sqrt(2.0)))


def bennett_log(x: float, sigma: float) -> float:
    """log of the Bennett bound."""
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    return x * sigma - (sigma * x + sigma * sigma) * math.log1p(x / sigma)


def bennett_bound(x: float, sigma: float) -> float:
    """((x+sigma)/sigma)^(-sigma x - sigma^2) * e^(x sigma)."""
    return math.exp(bennett_log(x, sigma))


def hoeffding_log(x: float, sigma: float, n: int) -> float:
    """log of the Hoeffding bound; -inf beyond the support range x > n/sigma."""
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    xs = x * sigma
    if xs > n:
        return -math.inf
    s2 = sigma * sigma
    log_first = -(xs + s2) * math.log1p(x / sigma)
    log_second = 0.0 if xs >= n else -(n - xs) * math.log1p(-xs / n)
    return (n / (n + s2)) * (log_first + log_second)


def hoeffding_bound(x: float, sigma: float, n: int) -> float:
    """The variance-aware Hoeffding tail bound for n summands with xi_i <= 1.

    Zero for x > n/sigma; at the boundary x = n/sigma the inner factor
    (n/(n - x sigma))^(n - x sigma) is taken to be 1.
    """
    lg = hoeffding_log(x, sigma, n)
    return 0.0 if lg == -math.inf else math.exp(lg)


def bernstein_arg(x: float, sigma: float) -> float:
    """The shrunk argument x / sqrt(1 + x/(3 sigma)) of the Bernstein exponent."""
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    return x / math.sqrt(1.0 + x / (3.0 * sigma))


def bernstein_bound(x: float, sigma: float) -> float:
    """exp(-xc^2/2) with xc = bernstein_arg(x, sigma)."""
    xc = bernstein_arg(x, sigma)
    return math.exp(-0.5 * xc * xc)


@dataclass(frozen=True)
class BoundValue:
    """A named bound value with its validity flag, for reports."""

    name: str
    value: float
    valid: bool = True

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "valid": self.valid}
