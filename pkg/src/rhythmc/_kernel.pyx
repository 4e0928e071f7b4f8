# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-point iteration kernel.

Same contract and bit-identical arithmetic as ``_kernel_py`` (the build
disables FP contraction to keep results reproducible across backends).
"""

import numpy as np

CONVERGED = 0
DIVERGED = 1
INCONCLUSIVE = 2

BACKEND = "compiled"


def iterate_system(double z,
                   int[::1] offsets,
                   double[::1] coeff,
                   int[::1] left,
                   int[::1] right,
                   unsigned char[::1] terminal,
                   int m_max,
                   double epsilon,
                   double blowup):
    """Iterate the normalized class system at ``z`` from all-ones.

    CSR layout: class i owns productions offsets[i]..offsets[i+1], each
    contributing coeff[p] * V[left[p]] * V[right[p]]. Terminal classes stay
    pinned at 1. Returns (status, values, iterations).
    """
    cdef int n = terminal.shape[0]
    cdef double[::1] v = np.ones(n, dtype=np.float64)
    cdef double[::1] new = np.zeros(n, dtype=np.float64)
    cdef double[::1] tmp
    cdef int m = 0, i, p
    cdef double acc, value, diff, base, rel, worst

    for m in range(1, m_max + 1):
        for i in range(n):
            if terminal[i]:
                new[i] = 1.0
                continue
            acc = 0.0
            for p in range(offsets[i], offsets[i + 1]):
                acc += coeff[p] * (v[left[p]] * v[right[p]])
            new[i] = z * acc
        worst = 0.0
        for i in range(n):
            value = new[i]
            if value != value:
                raise ValueError("non-finite value during iteration (malformed grammar)")
            if value > blowup:
                return DIVERGED, [new[i] for i in range(n)], m
            diff = value - v[i]
            if diff < 0.0:
                diff = -diff
            base = v[i] if v[i] > 1e-300 else 1e-300
            rel = diff / base
            if rel > worst:
                worst = rel
        if worst < epsilon:
            return CONVERGED, [new[i] for i in range(n)], m
        tmp = v
        v = new
        new = tmp
    return INCONCLUSIVE, [v[i] for i in range(n)], m
