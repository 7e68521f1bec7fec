"""Ground truth: exact lattice tails, Monte-Carlo estimators, and the
log-concave tail hull.

The exact oracle puts every atom on a common rational grid (denominators
capped at 1e6; values that do not fit are rounded and the rounding is
reported, never hidden) and convolves the component mass vectors with the
selected kernel backend.  Threshold comparisons against lattice points are
exact rational comparisons, so strict and non-strict tails are separated
correctly on the lattice and coincide off it.

Monte-Carlo sampling uses counter-based Philox streams with the split rule
key = (seed, component_index), so runs are reproducible and components could
be sampled in parallel without collisions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from ._backend import convolve_repeat
from ._tiltmath import tilted_stats
from .errors import HypothesisError, ParameterError, UnsupportedModelError
from .models import SumModel, extremal_model
from .rate import Saddlepoint, solve_target

#: largest denominator used when snapping atom values to a rational grid
DENOMINATOR_CAP = 10**6

#: hard cap on the convolved lattice length
MAX_LATTICE_POINTS = 10**8


@dataclass(frozen=True)
class TailEstimate:
    """A tail probability with its provenance and error bar."""

    p: float
    stderr: float
    method: str               # "exact", "mc" or "tilted_mc"
    n_samples: int
    seed: int | None = None
    lam: float | None = None  # tilt used by the importance sampler

    def to_dict(self) -> dict:
        out = {
            "p": self.p,
            "stderr": self.stderr,
            "method": self.method,
            "n_samples": self.n_samples,
            "seed": self.seed,
        }
        if self.lam is not None:
            out["lam"] = self.lam
        return out


class LatticeDistribution:
    """Mass vector of the sum on a rational grid: point k has value (base+k)*step."""

    def __init__(self, step: Fraction, base: int, masses: np.ndarray,
                 mass_drift: float, quantization_error: float):
        self.step = step
        self.base = base
        self.masses = masses
        self.mass_drift = mass_drift
        self.quantization_error = quantization_error

    def __len__(self):
        return len(self.masses)

    def value(self, k: int) -> float:
        return float((self.base + k) * self.step)

    @cached_property
    def values(self) -> np.ndarray:
        num = np.arange(self.base, self.base + len(self.masses), dtype=float)
        return num * float(self.step)

    def _first_index_above(self, threshold: float, strict: bool) -> int:
        # exact rational comparison of (base + k) * step against the threshold
        t = Fraction(threshold) / self.step - self.base
        if strict:
            k = math.floor(t) + 1
        else:
            k = math.ceil(t)
        return max(k, 0)

    def tail(self, threshold: float, strict: bool = True) -> float:
        """P(S > threshold) (strict) or P(S >= threshold), exactly rounded."""
        k = self._first_index_above(threshold, strict)
        if k >= len(self.masses):
            return 0.0
        return min(1.0, math.fsum(self.masses[k:]))

    @cached_property
    def suffix_sums(self) -> np.ndarray:
        """P(S >= value_k) for every lattice point, by compensated backward accumulation."""
        out = np.empty(len(self.masses), dtype=float)
        s = 0.0
        c = 0.0
        for i in range(len(self.masses) - 1, -1, -1):
            y = self.masses[i] - c
            t = s + y
            c = (t - s) - y
            s = t
            out[i] = s
        return np.minimum(out, 1.0)


def _rationalize(value: float) -> Fraction:
    return Fraction(value).limit_denominator(DENOMINATOR_CAP)


def _lattice_layout(raw_components):
    """Common pitch and integer offsets for [(values, probs, mult), ...]."""
    denom = 1
    fracs = []
    quant = 0.0
    for values, _, _ in raw_components:
        row = []
        for v in values:
            f = _rationalize(float(v))
            quant = max(quant, abs(float(f) - float(v)))
            row.append(f)
            denom = denom * f.denominator // math.gcd(denom, f.denominator)
        fracs.append(row)
    step = Fraction(1, denom)
    layouts = []
    for (values, probs, mult), row in zip(raw_components, fracs):
        offsets = np.array([int(f * denom) for f in row], dtype=np.int64)
        layouts.append((offsets, np.asarray(probs, dtype=float), int(mult)))
    return step, layouts, quant


def _convolve_components(step, layouts, quant):
    total = sum((int(offs[-1] - offs[0])) * m for offs, _, m in layouts)
    if total + 1 > MAX_LATTICE_POINTS:
        raise UnsupportedModelError(
            f"lattice would need {total + 1} points (cap {MAX_LATTICE_POINTS})"
        )
    # deterministic processing order: small spans first
    order = sorted(
        layouts, key=lambda t: (int(t[0][-1] - t[0][0]), t[0].tolist(), t[1].tolist())
    )
    masses = np.ones(1, dtype=float)
    base = 0
    for offsets, probs, mult in order:
        lo = int(offsets[0])
        base += mult * lo
        masses = convolve_repeat(masses, offsets - lo, probs, mult)
    drift = abs(math.fsum(masses) - 1.0)
    return LatticeDistribution(step, base, masses, drift, quant)


def build_lattice(model: SumModel) -> LatticeDistribution:
    """Exact distribution of the sum on its rational lattice."""
    raw = [(d.values, d.probs, m) for d, m in model.components]
    step, layouts, quant = _lattice_layout(raw)
    return _convolve_components(step, layouts, quant)


def build_tilted_lattice(model: SumModel, lam: float) -> LatticeDistribution:
    """Exact distribution of the sum under the exponential tilt lam."""
    raw = []
    for d, m in model.components:
        _, _, _, tp = tilted_stats(d.values, d.probs, lam)
        raw.append((d.values, tp, m))
    step, layouts, quant = _lattice_layout(raw)
    return _convolve_components(step, layouts, quant)


def exact_tail(model: SumModel, threshold: float, strict: bool = True) -> TailEstimate:
    """Exact P(S > threshold) (or >=) by dynamic-programming convolution."""
    lat = build_lattice(model)
    return TailEstimate(
        p=lat.tail(threshold, strict), stderr=0.0, method="exact", n_samples=0
    )


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def _component_rng(seed: int, index: int) -> np.random.Generator:
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(index)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _sample_sums(components, n_samples: int, seed: int) -> np.ndarray:
    """Sample n_samples values of the sum; components are (values, probs, mult)."""
    sums = np.zeros(n_samples, dtype=float)
    for ci, (values, probs, mult) in enumerate(components):
        rng = _component_rng(seed, ci)
        counts = rng.multinomial(mult, probs, size=n_samples)
        sums += counts @ values
    return sums


def mc_tail(model: SumModel, threshold: float, strict: bool,
            n_samples: int, seed: int) -> TailEstimate:
    """Plain Monte-Carlo frequency estimate of the tail."""
    if n_samples < 1:
        raise ParameterError(f"n_samples must be >= 1, got {n_samples}")
    comps = [(d.values, d.probs, m) for d, m in model.components]
    sums = _sample_sums(comps, n_samples, seed)
    hits = (sums > threshold) if strict else (sums >= threshold)
    p = float(hits.mean())
    stderr = math.sqrt(p * (1.0 - p) / n_samples)
    return TailEstimate(p=p, stderr=stderr, method="mc", n_samples=n_samples, seed=seed)


def tilted_mc_tail(model: SumModel, threshold: float, strict: bool,
                   n_samples: int, seed: int) -> TailEstimate:
    """Importance-sampling estimate under the saddlepoint tilt.

    Components are drawn from their tilted laws and each sample is weighted
    by exp(cum(lam) - lam * S), which makes the weighted indicator unbiased
    for the true tail.  At threshold 0 the tilt is 0 and this reduces to
    plain Monte Carlo.
    """
    if n_samples < 1:
        raise ParameterError(f"n_samples must be >= 1, got {n_samples}")
    sp: Saddlepoint = solve_target(model, threshold)
    lam = sp.lam
    comps = []
    for d, m in model.components:
        _, _, _, tp = tilted_stats(d.values, d.probs, lam)
        comps.append((d.values, tp, m))
    sums = _sample_sums(comps, n_samples, seed)
    hits = (sums > threshold) if strict else (sums >= threshold)
    logw = sp.cumulant_value - lam * sums
    est = np.where(hits, np.exp(logw), 0.0)
    p = float(est.mean())
    stderr = float(est.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else 0.0
    return TailEstimate(
        p=p, stderr=stderr, method="tilted_mc", n_samples=n_samples, seed=seed, lam=lam
    )


# ---------------------------------------------------------------------------
# Log-concave tail hull
# ---------------------------------------------------------------------------

def log_concave_hull(tail):
    """Pointwise-smallest log-concave sequence dominating `tail`.

    Works on the logs: the upper concave majorant of (k, log tail_k) over the
    positive entries (zeros map to -inf and stay zero outside the positive
    range; zeros strictly inside it are lifted to the chord).  One monotone
    pass over the points, so O(n) after the scan.
    """
    t = np.asarray(tail, dtype=float)
    if t.ndim != 1:
        raise ParameterError("tail must be a 1-d sequence")
    if t.size == 0:
        return t.copy()
    if np.any(~np.isfinite(t)) or t.min() < 0.0 or t.max() > 1.0:
        raise ParameterError("tail values must lie in [0, 1]")
    pos = np.flatnonzero(t > 0.0)
    if pos.size == 0:
        return t.copy()
    i0, i1 = int(pos[0]), int(pos[-1])
    xs = pos.astype(float)
    ys = np.log(t[pos])
    # upper hull, slopes strictly decreasing left to right
    hx: list[float] = []
    hy: list[float] = []
    for x, y in zip(xs, ys):
        while len(hx) >= 2:
            # pop the middle point when it lies on or below the chord
            if (hy[-1] - hy[-2]) * (x - hx[-2]) <= (y - hy[-2]) * (hx[-1] - hx[-2]):
                hx.pop()
                hy.pop()
            else:
                break
        hx.append(x)
        hy.append(y)
    out = t.copy()
    grid = np.arange(i0, i1 + 1, dtype=float)
    hull_log = np.interp(grid, hx, hy)
    out[i0:i1 + 1] = np.maximum(out[i0:i1 + 1], np.exp(hull_log))
    return out


def bentkus_bound(model: SumModel, x: float) -> float:
    """(e^2/2) times the log-concave hull of the extremal two-point sum's
    tail, evaluated at x * sigma; capped at 1.

    The reference sum uses n i.i.d. copies of the two-point law with variance
    sigma^2 / n.  Between lattice points the hull is interpolated
    log-linearly; if sigma^2 / n is not exactly rational the lattice is the
    reported quantization of it.
    """
    if x < 0:
        raise ParameterError(f"x must be >= 0, got {x}")
    if model.a_max > 1.0 + 1e-12:
        raise HypothesisError("needs xi_i <= 1 for every component")
    v = model.sigma2 / model.n
    ref = extremal_model(v, model.n)
    lat = build_lattice(ref)
    hull = log_concave_hull(lat.suffix_sums)
    target = x * model.sigma
    vals = lat.values
    if target <= vals[0]:
        hull_at = 1.0
    elif target > vals[-1]:
        hull_at = 0.0
    else:
        j = int(np.searchsorted(vals, target, side="right")) - 1
        if j >= len(vals) - 1:
            hull_at = float(hull[-1])
        else:
            lo, hi = float(hull[j]), float(hull[j + 1])
            w = (target - vals[j]) / (vals[j + 1] - vals[j])
            if lo <= 0.0 or hi <= 0.0:
                hull_at = 0.0 if w > 0 else lo
            else:
                hull_at = math.exp((1.0 - w) * math.log(lo) + w * math.log(hi))
    return min(1.0, 0.5 * math.e**2 * hull_at)
