"""Pure-numpy fallback for the lattice convolution kernel.

Same contract as the compiled version in ``_convolve.pyx``: shifted-slice
adds instead of a per-cell compensated loop.  Accuracy is still well within
the 1e-9 mass-drift budget (each pass is a plain float64 accumulation).
"""

import numpy as np


def convolve_repeat(masses, offsets, probs, times):
    """Convolve `masses` with the atom kernel (offsets, probs) `times` times.

    offsets must be sorted ascending with offsets[0] == 0; the result has
    length len(masses) + offsets[-1] * times.
    """
    masses = np.asarray(masses, dtype=np.float64)
    offsets = np.asarray(offsets, dtype=np.int64)
    probs = np.asarray(probs, dtype=np.float64)
    if times <= 0:
        return masses.copy()
    span = int(offsets[-1])
    length = masses.shape[0]
    final = length + span * times
    cur = np.zeros(final, dtype=np.float64)
    nxt = np.zeros(final, dtype=np.float64)
    cur[:length] = masses
    for _ in range(times):
        out_len = length + span
        nxt[:out_len] = 0.0
        for off, p in zip(offsets, probs):
            nxt[off:off + length] += p * cur[:length]
        cur, nxt = nxt, cur
        length = out_len
    return cur[:length].copy()
