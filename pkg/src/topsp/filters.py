"""Shift-invariant filters on node and edge signals.

Every filter here is a function of a symmetric shift operator (a graph or
Hodge Laplacian) and is therefore diagonalised by that operator's
eigenvectors.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .complex import SimplicialComplex, edge_laplacian, hodge_laplacian, line_graph_laplacian
from .spectral import SpectralBasis, eig_sym

_SOLVE_RTOL = 1e-10


def _check_square(Q, y):
    Q = np.asarray(Q, dtype=float)
    y = np.asarray(y, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ValueError(f"operator must be square, got {Q.shape}")
    if y.shape[0] != Q.shape[0]:
        raise ValueError(f"signal length {y.shape[0]} does not match operator size {Q.shape[0]}")
    return Q, y


def denoise_tikhonov(Q, y, alpha):
    """Minimiser of ``||f - y||^2 + alpha f^T Q f``, i.e. ``(I + alpha Q)^{-1} y``.

    Solved by Cholesky; if the factorisation fails or the solve residual is
    too large, falls back to the spectral form ``U diag(1/(1+alpha lam)) U^T y``.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    Q, y = _check_square(Q, y)
    A = np.eye(Q.shape[0]) + alpha * Q
    try:
        x = scipy.linalg.cho_solve(scipy.linalg.cho_factor(A), y)
        resid = np.linalg.norm(A @ x - y, ord=np.inf)
        if resid <= _SOLVE_RTOL * max(1.0, np.linalg.norm(y, ord=np.inf)):
            return x
    except (np.linalg.LinAlgError, ValueError):
        pass
    basis = eig_sym(Q)
    return basis.response_matrix(1.0 / (1.0 + alpha * basis.eigenvalues)) @ y


def tikhonov_matrix(Q, alpha):
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    Q = np.asarray(Q, dtype=float)
    return np.linalg.inv(np.eye(Q.shape[0]) + alpha * Q)


def smooth_iterative(L, y, mu, k):
    """Apply ``(I - mu L)`` to ``y`` exactly ``k`` times.

    Each application is one gradient-descent step on ``y^T L y``. A
    RuntimeWarning is issued when ``mu >= 2 / lambda_max``, where the
    iteration amplifies the highest frequencies.
    """
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    if int(k) != k or k < 1:
        raise ValueError(f"steps must be a positive integer, got {k}")
    L, y = _check_square(L, y)
    lam_max = float(eig_sym(L).eigenvalues[-1]) if L.size else 0.0
    if lam_max > 0 and mu >= 2.0 / lam_max:
        warnings.warn(
            f"mu={mu:g} >= 2/lambda_max={2.0 / lam_max:g}: iterative smoothing diverges",
            RuntimeWarning,
            stacklevel=2,
        )
    out = y.copy()
    for _ in range(int(k)):
        out = out - mu * (L @ out)
    return out


def iterative_matrix(L, mu, k):
    L = np.asarray(L, dtype=float)
    return np.linalg.matrix_power(np.eye(L.shape[0]) - mu * L, int(k))


def apply_polynomial(G, coeffs, s):
    """``sum_j coeffs[j] G^j s`` evaluated by Horner's rule."""
    coeffs = [float(c) for c in coeffs]
    if not coeffs:
        raise ValueError("polynomial needs at least one coefficient")
    G, s = _check_square(G, s)
    out = coeffs[-1] * s
    for c in reversed(coeffs[:-1]):
        out = G @ out + c * s
    return out


def polynomial_matrix(G, coeffs):
    G = np.asarray(G, dtype=float)
    return apply_polynomial(G, coeffs, np.eye(G.shape[0]))


def apply_spectral(basis: SpectralBasis, response: Callable | Sequence[float], s):
    """Filter ``U h(Lambda) U^T s``; ``response`` is a callable or per-eigenvalue gains."""
    gains = response(basis.eigenvalues) if callable(response) else np.asarray(response, dtype=float)
    gains = np.broadcast_to(np.asarray(gains, dtype=float), basis.eigenvalues.shape)
    U = basis.eigenvectors
    return U @ (gains * (U.T @ np.asarray(s, dtype=float)))


def frequency_response_of(H, basis: SpectralBasis, tol=1e-6):
    """Gains ``diag(U^T H U)`` of a filter in the given eigenbasis.

    Raises ValueError if ``U^T H U`` is not diagonal to within ``tol``, i.e.
    when ``H`` is not shift-invariant with respect to the basis.
    """
    H = np.asarray(H, dtype=float)
    U = basis.eigenvectors
    D = U.T @ H @ U
    off = D - np.diag(np.diag(D))
    worst = float(np.max(np.abs(off))) if off.size else 0.0
    if worst > tol:
        i, j = np.unravel_index(np.argmax(np.abs(off)), off.shape)
        raise ValueError(
            f"filter is not diagonalised by the basis: off-diagonal entry ({i}, {j}) = {off[i, j]:.3g}"
        )
    return np.diag(D).copy()


# -- filter specifications ---------------------------------------------------


@dataclass(frozen=True)
class Tikhonov:
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    def apply(self, Q, y):
        return denoise_tikhonov(Q, y, self.alpha)

    def matrix(self, Q):
        return tikhonov_matrix(Q, self.alpha)

    def response(self, lam):
        return 1.0 / (1.0 + self.alpha * np.asarray(lam))


@dataclass(frozen=True)
class Iterative:
    mu: float
    steps: int

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")

    def apply(self, Q, y):
        return smooth_iterative(Q, y, self.mu, self.steps)

    def matrix(self, Q):
        return iterative_matrix(Q, self.mu, self.steps)

    def response(self, lam):
        return (1.0 - self.mu * np.asarray(lam)) ** self.steps


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("polynomial needs at least one coefficient")

    def apply(self, Q, y):
        return apply_polynomial(Q, self.coeffs, y)

    def matrix(self, Q):
        return polynomial_matrix(Q, self.coeffs)

    def response(self, lam):
        return np.polynomial.polynomial.polyval(np.asarray(lam), self.coeffs)


@dataclass(frozen=True)
class Spectral:
    """Arbitrary gain function of the eigenvalue."""

    gain: Callable = field(compare=False)

    def apply(self, Q, y):
        return apply_spectral(eig_sym(Q), self.gain, y)

    def matrix(self, Q):
        basis = eig_sym(Q)
        return basis.response_matrix(self.gain(basis.eigenvalues))

    def response(self, lam):
        return self.gain(np.asarray(lam))


FilterSpec = Tikhonov | Iterative | Polynomial | Spectral


# -- flow denoising experiment ----------------------------------------------

REGULARIZERS = ("line_graph", "edge", "hodge")


def regularizer(X: SimplicialComplex, name: str):
    """Shift operator for edge denoising by name."""
    name = name.replace("-", "_")
    if name == "line_graph":
        return line_graph_laplacian(X)
    if name == "edge":
        return edge_laplacian(X)
    if name == "hodge":
        return hodge_laplacian(X, 1)
    raise ValueError(f"unknown regularizer {name!r}; expected one of {', '.join(REGULARIZERS)}")


def gaussian_noise(size, sigma, seed):
    """I.i.d. N(0, sigma^2) noise from numpy's PCG64 generator seeded with ``seed``."""
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    return sigma * rng.standard_normal(size)


@dataclass
class DenoiseReport:
    """Per-seed estimation errors ``||f_hat - f0||_2`` for each method.

    ``errors["noisy"]`` holds the error of the raw observation.
    """

    seeds: list
    errors: dict

    def mean(self, name):
        return float(np.mean(self.errors[name]))

    def stderr(self, name):
        e = np.asarray(self.errors[name])
        return float(np.std(e, ddof=1) / np.sqrt(e.size)) if e.size > 1 else 0.0

    def paired_gap(self, worse, better):
        """Mean and standard error of ``error[worse] - error[better]`` over seeds."""
        d = np.asarray(self.errors[worse]) - np.asarray(self.errors[better])
        se = float(np.std(d, ddof=1) / np.sqrt(d.size)) if d.size > 1 else 0.0
        return float(d.mean()), se


def flow_denoise_experiment(
    X: SimplicialComplex,
    f0,
    sigma=0.5,
    seeds=(0,),
    regularizers=REGULARIZERS,
    alpha=0.5,
) -> DenoiseReport:
    """Denoise ``f0 + noise`` with Tikhonov filters built on several regularizers."""
    f0 = np.asarray(f0, dtype=float)
    if f0.shape != (X.count(1),):
        raise ValueError(f"flow has shape {f0.shape}, complex has {X.count(1)} edges")
    names = [r.replace("-", "_") for r in regularizers]
    ops = {name: regularizer(X, name) for name in names}
    seeds = list(seeds)
    errors = {name: [] for name in ["noisy", *names]}
    for seed in seeds:
        y = f0 + gaussian_noise(f0.shape[0], sigma, seed)
        errors["noisy"].append(float(np.linalg.norm(y - f0)))
        for name, Q in ops.items():
            errors[name].append(float(np.linalg.norm(denoise_tikhonov(Q, y, alpha) - f0)))
    return DenoiseReport(seeds, {k: np.asarray(v) for k, v in errors.items()})
