# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Mirrors :mod:`topsp._pykernels` rotation for rotation."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


def jacobi_eigh(double[:, :] m, double rtol=1e-12, int max_sweeps=100):
    """Cyclic Jacobi eigensolver for a symmetric matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` in the order the
    rotations leave them (unsorted).
    """
    cdef Py_ssize_t n = m.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a_arr = np.array(m, dtype=np.float64, copy=True)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v_arr = np.eye(n, dtype=np.float64)
    cdef double[:, :] a = a_arr
    cdef double[:, :] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef double fro = 0.0, off, apq, theta, t, c, s, akp, akq, apk, aqk
    cdef int sweep = 0

    for p in range(n):
        for q in range(n):
            fro += a[p, q] * a[p, q]
    fro = sqrt(fro)
    if fro == 0.0:
        return np.zeros(n), v_arr, 0

    while sweep < max_sweeps:
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                if fabs(a[p, q]) > off:
                    off = fabs(a[p, q])
        if off <= rtol * fro:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if fabs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    akp = v[k, p]
                    akq = v[k, q]
                    v[k, p] = c * akp - s * akq
                    v[k, q] = s * akp + c * akq

    return np.diagonal(a_arr).copy(), v_arr, sweep


def cyclic_convolve(double[:] c, double[:] s):
    """out[t] = sum_i c[i] * s[(t - i) mod n]."""
    cdef Py_ssize_t n = c.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.zeros(n, dtype=np.float64)
    cdef double[:] out = out_arr
    cdef Py_ssize_t t, i, j
    cdef double acc
    for t in range(n):
        acc = 0.0
        for i in range(n):
            j = t - i
            if j < 0:
                j += n
            acc += c[i] * s[j]
        out[t] = acc
    return out_arr
