# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernel: repeated sparse-atom lattice convolution.

Each pass streams one shifted multiply-add per atom over the current mass
vector, which the C compiler vectorizes.  All terms are nonnegative, so plain
accumulation keeps the total-mass drift below K * passes * eps, orders of
magnitude inside the 1e-9 oracle budget.
"""

import numpy as np


def convolve_repeat(double[::1] masses, long long[::1] offsets, double[::1] probs,
                    Py_ssize_t times):
    """Convolve `masses` with the atom kernel (offsets, probs) `times` times.

    offsets must be sorted ascending with offsets[0] == 0; the result has
    length len(masses) + offsets[-1] * times.
    """
    cdef Py_ssize_t K = offsets.shape[0]
    cdef Py_ssize_t span = offsets[K - 1]
    cdef Py_ssize_t length = masses.shape[0]
    cdef Py_ssize_t final = length + span * times
    if times <= 0:
        return np.asarray(masses).copy()

    buf_a = np.zeros(final, dtype=np.float64)
    buf_b = np.zeros(final, dtype=np.float64)
    cdef double[::1] a = buf_a
    cdef double[::1] b = buf_b
    cdef double[::1] tmp
    cdef Py_ssize_t rep, i, k, off, out_len
    cdef double p

    a[:length] = masses

    with nogil:
        for rep in range(times):
            out_len = length + span
            for i in range(out_len):
                b[i] = 0.0
            for k in range(K):
                off = offsets[k]
                p = probs[k]
                for i in range(length):
                    b[i + off] += a[i] * p
            tmp = a
            a = b
            b = tmp
            length = out_len

    return np.asarray(a[:length]).copy()
