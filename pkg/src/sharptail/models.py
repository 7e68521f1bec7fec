"""Bounded mean-zero discrete distributions and sum models.

A :class:`DiscreteDistribution` is one summand: a finite list of atoms with
strictly positive probabilities, mean zero and bounded support.  A
:class:`SumModel` is the whole sum, stored as (distribution, multiplicity)
blocks so i.i.d. pieces are compressed instead of repeated.

Inputs that are off-center are rejected, never silently recentred: shifting
the atoms would change the variance and with it every bound downstream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ModelError, ParameterError

MEAN_TOL = 1e-12
PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteDistribution:
    """A finite-support distribution given by (value, probability) atoms.

    Atoms are canonicalised on construction: sorted by value, duplicates
    merged.  Construction fails with :class:`ModelError` naming the first
    violated invariant.
    """

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        try:
            pairs = [(float(v), float(p)) for v, p in self.atoms]
        except (TypeError, ValueError) as exc:
            raise ModelError(f"atoms must be (value, prob) pairs: {exc}") from None
        merged: dict[float, float] = {}
        for v, p in pairs:
            merged[v] = merged.get(v, 0.0) + p
        canon = tuple(sorted(merged.items()))
        object.__setattr__(self, "atoms", canon)
        if len(canon) < 2:
            raise ModelError("need at least 2 distinct atoms (non-degenerate)")
        values = [v for v, _ in canon]
        probs = [p for _, p in canon]
        if not all(math.isfinite(v) for v in values):
            raise ModelError("atom values must be finite")
        if min(probs) <= 0.0:
            raise ModelError("atom probabilities must be strictly positive")
        total = math.fsum(probs)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ModelError(f"probabilities sum to {total:.17g}, not 1")
        mean = math.fsum(v * p for v, p in canon)
        if abs(mean) > MEAN_TOL:
            raise ModelError(
                f"mean is {mean:.3e}; atoms must be centered (inputs are never auto-centered)"
            )
        if values[0] > 0.0 or values[-1] < 0.0:
            raise ModelError("support must satisfy lower <= 0 <= upper")

    @cached_property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.atoms], dtype=float)

    @cached_property
    def probs(self) -> np.ndarray:
        return np.array([p for _, p in self.atoms], dtype=float)

    @property
    def lower(self) -> float:
        """Essential infimum (smallest atom)."""
        return self.atoms[0][0]

    @property
    def upper(self) -> float:
        """Essential supremum (largest atom)."""
        return self.atoms[-1][0]

    @cached_property
    def variance(self) -> float:
        return float(np.dot(self.probs, self.values**2))


def abs_moment(dist: DiscreteDistribution, p: float) -> float:
    """E|xi|^p for p >= 1, by direct weighted summation over the atoms."""
    if not p >= 1:
        raise ParameterError(f"moment order must be >= 1, got {p}")
    return float(np.dot(dist.probs, np.abs(dist.values) ** p))


def rademacher() -> DiscreteDistribution:
    """The fair +/-1 distribution."""
    return DiscreteDistribution(((-1.0, 0.5), (1.0, 0.5)))


def hoeffding_extremal(v: float) -> DiscreteDistribution:
    """The two-point law with atoms {1, -v} that makes the optimized
    exponential-Markov bound coincide with the Hoeffding bound.

    Mean 0 and variance v by construction.  The probabilities are computed
    as p(-v) = 1/(1+v), p(1) = 1 - p(-v) so the float mean stays at a few
    ulps even for large v.
    """
    if not (v > 0.0 and math.isfinite(v)):
        raise ParameterError(f"variance parameter must be positive, got {v}")
    p_minus = 1.0 / (1.0 + v)
    return DiscreteDistribution(((-v, p_minus), (1.0, 1.0 - p_minus)))


@dataclass(frozen=True)
class SumModel:
    """A sum of independent components, each repeated with a multiplicity."""

    components: tuple[tuple[DiscreteDistribution, int], ...]

    def __post_init__(self):
        comps = []
        for entry in self.components:
            dist, mult = entry
            if not isinstance(dist, DiscreteDistribution):
                raise ModelError("components must pair a DiscreteDistribution with a count")
            m = int(mult)
            if m != mult or m < 1:
                raise ModelError(f"multiplicity must be a positive integer, got {mult!r}")
            comps.append((dist, m))
        if not comps:
            raise ModelError("model needs at least one component")
        object.__setattr__(self, "components", tuple(comps))

    @cached_property
    def n(self) -> int:
        return sum(m for _, m in self.components)

    @cached_property
    def sigma2(self) -> float:
        return sum(m * d.variance for d, m in self.components)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @cached_property
    def a_max(self) -> float:
        """Largest essential supremum across components."""
        return max(d.upper for d, _ in self.components)

    @cached_property
    def lower_min(self) -> float:
        """Smallest essential infimum across components."""
        return min(d.lower for d, _ in self.components)

    @cached_property
    def max_support(self) -> float:
        """Essential supremum of the sum, sum_i mult_i * upper_i."""
        return sum(m * d.upper for d, m in self.components)

    @cached_property
    def min_support(self) -> float:
        return sum(m * d.lower for d, m in self.components)

    def abs_moment_sum(self, p: float) -> float:
        """sum_i E|xi_i|^p over all n summands."""
        return sum(m * abs_moment(d, p) for d, m in self.components)

    @cached_property
    def b_ratio(self) -> float:
        """Smallest B with E|xi_i|^3 <= B * E xi_i^2 for every component."""
        return max(abs_moment(d, 3) / d.variance for d, _ in self.components)

    def b_abs(self, delta: float) -> float:
        """Smallest B with E|xi_i|^(2+delta) <= B^(2+delta) for every component."""
        return max(abs_moment(d, 2 + delta) ** (1.0 / (2 + delta)) for d, _ in self.components)


@dataclass(frozen=True)
class MomentProfile:
    """Moment constants of a model for a given delta in (0, 1]."""

    delta: float
    b_abs: float
    b_ratio: float
    abs_moment_sum: float


def moment_profile(model: SumModel, delta: float) -> MomentProfile:
    if not (0.0 < delta <= 1.0):
        raise ParameterError(f"delta must lie in (0, 1], got {delta}")
    return MomentProfile(
        delta=delta,
        b_abs=model.b_abs(delta),
        b_ratio=model.b_ratio,
        abs_moment_sum=model.abs_moment_sum(2 + delta),
    )


def rademacher_model(n: int) -> SumModel:
    return SumModel(((rademacher(), n),))


def extremal_model(v: float, n: int) -> SumModel:
    """n i.i.d. copies of the two-point extremal law with variance v."""
    return SumModel(((hoeffding_extremal(v), n),))


# ---------------------------------------------------------------------------
# Curvature condition on the second-moment generating function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurvatureReport:
    """Grid check of sum_i E xi_i^2 e^(lam xi_i) >= (1 - B lam) sigma^2."""

    holds: bool
    worst_margin: float
    worst_lambda: float
    B: float


def default_lambda_grid(B: float) -> np.ndarray:
    """0 plus 200 log-spaced tilts in [1e-6, 10/B]."""
    if not B > 0:
        raise ParameterError(f"B must be positive, got {B}")
    return np.concatenate(([0.0], np.geomspace(1e-6, 10.0 / B, 200)))


def check_curvature_condition(model, B, lambda_grid=None) -> CurvatureReport:
    """Verify the lower-curvature condition on a tilt grid.

    For each lam the margin is sum_i E xi_i^2 e^(lam xi_i) - (1 - B lam) sigma^2;
    the condition holds when the worst margin is >= -1e-12 * sigma^2.  The grid
    check is a surrogate for the all-lam statement; for delta = 1 the exact
    sufficient criterion is :func:`curvature_condition_from_moments`.
    """
    if not B > 0:
        raise ParameterError(f"B must be positive, got {B}")
    grid = default_lambda_grid(B) if lambda_grid is None else np.asarray(lambda_grid, dtype=float)
    if grid.size == 0:
        raise ParameterError("lambda grid must be non-empty")
    if grid.min() < 0:
        raise ParameterError("lambda grid values must be >= 0")
    lhs = np.zeros_like(grid)
    with np.errstate(over="ignore"):
        for dist, m in model.components:
            w = dist.probs * dist.values**2
            lhs += m * (np.exp(np.outer(grid, dist.values)) @ w)
    margins = lhs - (1.0 - B * grid) * model.sigma2
    k = int(np.argmin(margins))
    return CurvatureReport(
        holds=bool(margins[k] >= -1e-12 * model.sigma2),
        worst_margin=float(margins[k]),
        worst_lambda=float(grid[k]),
        B=float(B),
    )


def curvature_condition_from_moments(model: SumModel, B: float) -> bool:
    """Exact sufficient criterion for delta = 1: E|xi_i|^3 <= B E xi_i^2 for all i."""
    if not B > 0:
        raise ParameterError(f"B must be positive, got {B}")
    return all(abs_moment(d, 3) <= B * d.variance * (1 + 1e-12) for d, _ in model.components)


# ---------------------------------------------------------------------------
# JSON model files
# ---------------------------------------------------------------------------

def model_from_dict(obj) -> SumModel:
    """Build a SumModel from the JSON schema
    {"components": [{"atoms": [[value, prob], ...], "multiplicity": k}, ...]}.

    The first violated invariant is reported with the offending path.
    """
    if not isinstance(obj, dict):
        raise ModelError("model file must contain a JSON object")
    comps_raw = obj.get("components")
    if not isinstance(comps_raw, list) or not comps_raw:
        raise ModelError("'components' must be a non-empty list")
    comps = []
    for i, entry in enumerate(comps_raw):
        where = f"components[{i}]"
        if not isinstance(entry, dict):
            raise ModelError(f"{where} must be an object")
        atoms = entry.get("atoms")
        if not isinstance(atoms, list) or not atoms:
            raise ModelError(f"{where}.atoms must be a non-empty list")
        for j, pair in enumerate(atoms):
            if (not isinstance(pair, list)) or len(pair) != 2 or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair
            ):
                raise ModelError(f"{where}.atoms[{j}] must be a [value, prob] number pair")
        mult = entry.get("multiplicity", 1)
        if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
            raise ModelError(f"{where}.multiplicity must be a positive integer")
        try:
            dist = DiscreteDistribution(tuple((float(v), float(p)) for v, p in atoms))
        except ModelError as exc:
            raise ModelError(f"{where}: {exc}") from None
        comps.append((dist, mult))
    return SumModel(tuple(comps))


def loads_model(text: str) -> SumModel:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return model_from_dict(obj)


def load_model(path) -> SumModel:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_model(fh.read())


def model_to_dict(model: SumModel) -> dict:
    return {
        "components": [
            {"atoms": [[v, p] for v, p in dist.atoms], "multiplicity": mult}
            for dist, mult in model.components
        ]
    }
