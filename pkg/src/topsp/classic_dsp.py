"""Cyclic time-shift invariant filtering on length-n signals.

Four equivalent ways to apply a circulant filter are provided so they can be
checked against each other: the circulant matrix product, the cyclic
convolution with the impulse response, the weighted sum of shift powers, and
the state-space realisation that iterates the cyclic shift.
"""

import numpy as np

from . import kernels

_IMAG_TOL = 1e-10


def dft_matrix(n):
    """Unitary DFT matrix, ``F[j, k] = w**(j*k) / sqrt(n)`` with ``w = exp(-2i pi / n)``."""
    n = int(n)
    if n < 1:
        raise ValueError("dft_matrix needs n >= 1")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(-2j * np.pi * jk / n) / np.sqrt(n)


def circulant_filter(c):
    """Circulant matrix with ``H[i, j] = c[(i - j) mod n]``."""
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return c[idx]


def shift_operator(n):
    """The cyclic shift: ``(S x)[t] = x[t - 1]``, i.e. the directed n-cycle."""
    e1 = np.zeros(int(n))
    if n > 1:
        e1[1] = 1.0
    else:
        e1[0] = 1.0
    return circulant_filter(e1)


def frequency_response(c):
    """Eigenvalues of the circulant filter, ``sqrt(n) * F c``.

    Entry ``j`` is the gain on the Fourier mode given by column ``j`` of
    ``F*``.
    """
    c = np.asarray(c, dtype=float)
    return np.sqrt(c.shape[0]) * (dft_matrix(c.shape[0]) @ c)


def _check_lengths(c, s):
    c = np.asarray(c, dtype=float)
    s = np.asarray(s, dtype=float)
    if c.ndim != 1 or s.ndim != 1 or c.shape[0] != s.shape[0]:
        raise ValueError(f"length mismatch: coefficients {c.shape}, signal {s.shape}")
    if c.shape[0] < 1:
        raise ValueError("signals need length >= 1")
    return c, s


def apply_filter_matrix(c, s_in):
    c, s_in = _check_lengths(c, s_in)
    return circulant_filter(c) @ s_in


def apply_filter_convolution(c, s_in):
    """Cyclic convolution of the impulse response with the input."""
    c, s_in = _check_lengths(c, s_in)
    return kernels.cyclic_convolve(c, s_in)


def apply_filter_shift_form(c, s_in):
    """``sum_k c_k S^k s_in`` with explicit shift-matrix powers."""
    c, s_in = _check_lengths(c, s_in)
    S = shift_operator(c.shape[0])
    out = np.zeros_like(s_in)
    Sk = np.eye(c.shape[0])
    for ck in c:
        out += ck * (Sk @ s_in)
        Sk = S @ Sk
    return out


def apply_filter_state_space(c, s_in):
    """State-space realisation: ``x(t+1) = S x(t)``, ``x(0) = s_in``, output ``sum_t c_t x(t)``.

    The state is shifted in place (no matrices are formed), mirroring the
    signal being passed one step along the directed cycle per tick.
    """
    c, s_in = _check_lengths(c, s_in)
    x = s_in.copy()
    out = np.zeros_like(s_in)
    for ct in c:
        out += ct * x
        x = np.roll(x, 1)
    return out


def real_output(z, tol=_IMAG_TOL):
    """Drop an imaginary residue after checking that it is negligible."""
    z = np.asarray(z)
    if np.iscomplexobj(z):
        resid = float(np.max(np.abs(z.imag))) if z.size else 0.0
        if resid > tol:
            raise ValueError(f"imaginary residue {resid:.3g} exceeds {tol:g}")
        return z.real.copy()
    return z


def apply_filter_spectral(c, s_in):
    """Filter via ``F* diag(lambda) F s_in``; real input gives real output."""
    c, s_in = _check_lengths(c, s_in)
    F = dft_matrix(c.shape[0])
    return real_output(F.conj().T @ (frequency_response(c) * (F @ s_in)))


def same_multiset(a, b, tol=1e-8):
    """True if two complex vectors hold the same values up to ``tol``.

    Both are sorted on (real, imag) and then paired greedily, which tolerates
    near-ties in the real part that would break a plain sort.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    a = a[np.lexsort((a.imag, a.real))]
    b = list(b[np.lexsort((b.imag, b.real))])
    for x in a:
        d = [abs(x - y) for y in b]
        j = int(np.argmin(d))
        if d[j] > tol:
            return False
        b.pop(j)
    return True
