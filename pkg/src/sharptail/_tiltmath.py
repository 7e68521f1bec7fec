"""Low-level exponential-tilt statistics for a single finite distribution.

All helpers work on raw (values, probs) arrays so they can be shared by the
cumulant, tilting and Monte-Carlo layers without circular imports.  Every
exponential is max-shifted, so the routines stay finite for tilts up to
lam * max(values) ~ 700.
"""

import math

import numpy as np


def tilted_stats(values, probs, lam):
    """Tilted (log-MGF, mean, variance, probs) of one component at tilt lam.

    The probabilities are reweighted by exp(lam * value); the variance is
    computed from the reweighted atoms in two passes (subtract the tilted
    mean first) because the MGF-ratio formula cancels catastrophically once
    the tilt concentrates the mass near the top atom.
    """
    if lam == 0.0:
        mean = float(np.dot(probs, values))
        var = float(np.dot(probs, (values - mean) ** 2))
        return 0.0, mean, var, np.array(probs, dtype=float)
    shift = lam * float(values[-1])
    w = probs * np.exp(lam * values - shift)
    z = float(w.sum())
    tp = w / z
    mean = float(np.dot(tp, values))
    var = float(np.dot(tp, (values - mean) ** 2))
    return shift + math.log(z), mean, var, tp


def tilted_stats_grid(values, probs, lams):
    """Vectorised (log-MGF, mean, variance) arrays over a grid of tilts.

    `values` must be sorted ascending (the max-shift uses the last entry).
    """
    lams = np.asarray(lams, dtype=float)
    shift = lams[:, None] * values[-1]
    w = probs * np.exp(lams[:, None] * values - shift)
    z = w.sum(axis=1)
    tp = w / z[:, None]
    mean = tp @ values
    var = np.einsum("ij,ij->i", tp, (values - mean[:, None]) ** 2)
    log_mgf = shift[:, 0] + np.log(z)
    return log_mgf, mean, var


def tilted_second_moment(values, probs, lam):
    """E_lam[xi^2], the MGF-ratio route; kept as a cross-check only."""
    if lam == 0.0:
        return float(np.dot(probs, values**2))
    shift = lam * float(values[-1])
    w = probs * np.exp(lam * values - shift)
    return float(np.dot(w, values**2) / w.sum())
