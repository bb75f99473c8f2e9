# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo accumulation kernel.

Tight typed loop over one sample batch; the pure-Python twin lives in
``xicse._mc_python`` and ``xicse._backend`` picks whichever imports.
"""

from libc.math cimport exp

import numpy as np

NAME = "cython"


def accumulate(double[:, ::1] x, double[:, ::1] phi_pieces, double t_eff,
               psi_pieces, double[::1] tilt):
    """Sum importance weights of samples inside the sublevel region.

    Same contract as xicse._mc_python.accumulate; psi_pieces is a C-contiguous
    (q, n) array or None for the unweighted case.
    """
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t n = x.shape[1]
    cdef Py_ssize_t p = phi_pieces.shape[0]
    cdef Py_ssize_t s, j, i, q
    cdef double g, dot, w, logw
    cdef double sum_w = 0.0
    cdef double sum_w2 = 0.0
    cdef long count = 0
    cdef double[:, ::1] psi
    cdef bint has_psi = psi_pieces is not None

    if has_psi:
        psi = psi_pieces
        q = psi.shape[0]

    for s in range(m):
        g = 0.0
        for j in range(p):
            dot = 0.0
            for i in range(n):
                dot += phi_pieces[j, i] * x[s, i]
            if j == 0 or dot < g:
                g = dot
        if g <= t_eff:
            continue
        count += 1
        if not has_psi:
            sum_w += 1.0
            sum_w2 += 1.0
            continue
        logw = 0.0
        for j in range(q):
            dot = 0.0
            for i in range(n):
                dot += psi[j, i] * x[s, i]
            if j == 0 or dot < logw:
                logw = dot
        for i in range(n):
            logw -= tilt[i] * x[s, i]
        w = exp(logw)
        sum_w += w
        sum_w2 += w * w
    return sum_w, sum_w2, count
