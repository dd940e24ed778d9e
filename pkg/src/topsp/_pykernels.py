"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Same rotation order and formulas; row/column updates are vectorised with numpy.
"""

import math

import numpy as np


def jacobi_eigh(m, rtol=1e-12, max_sweeps=100):
    a = np.array(m, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    fro = math.sqrt(float(np.sum(a * a)))
    if fro == 0.0:
        return np.zeros(n), v, 0

    iu = np.triu_indices(n, 1)
    sweep = 0
    while sweep < max_sweeps:
        off = float(np.max(np.abs(a[iu]))) if n > 1 else 0.0
        if off <= rtol * fro:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    return np.diagonal(a).copy(), v, sweep


def cyclic_convolve(c, s):
    c = np.asarray(c, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    n = c.shape[0]
    out = np.zeros(n)
    for t in range(n):
        acc = 0.0
        for i in range(n):
            acc += c[i] * s[(t - i) % n]
        out[t] = acc
    return out
