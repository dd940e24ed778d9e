"""Consensus and Hodge-Laplacian dynamics on complexes.

Linear systems ``dw/dt = -L w`` are propagated either exactly in the
eigenbasis of ``L`` or with explicit Euler steps. The nonlinear variant
replaces the two boundary images by an odd componentwise function before
mapping back.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .complex import SimplicialComplex, boundary_matrix, hodge_laplacian
from .spectral import eig_sym

METHODS = ("exact_spectral", "euler")
HOLE_RANK_TOL = 1e-6


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (len(times), dimension)
    order: int = 0

    @property
    def final(self):
        return self.states[-1]

    @property
    def dt(self):
        return float(self.times[1] - self.times[0]) if self.times.size > 1 else 0.0


@dataclass(frozen=True)
class Nonlinearity:
    """Odd componentwise function with an optional antiderivative for energies."""

    name: str
    func: Callable
    antiderivative: Callable | None = None

    def __call__(self, x):
        return self.func(x)

    def check_odd(self, tol=1e-10):
        x = np.concatenate([np.linspace(-5.0, 5.0, 201), np.random.default_rng(0).normal(0, 3, 200)])
        dev = float(np.max(np.abs(self.func(x) + self.func(-x))))
        if dev > tol:
            raise ValueError(f"nonlinearity {self.name!r} is not odd (|g(x)+g(-x)| up to {dev:.3g})")


def _identity(x):
    return x


IDENTITY = Nonlinearity("identity", _identity, lambda x: 0.5 * x * x)
TANH = Nonlinearity("tanh", np.tanh, lambda x: np.logaddexp(x, -x) - np.log(2.0))
NONLINEARITIES = {"identity": IDENTITY, "tanh": TANH}


def _time_grid(dt, t_max):
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_max < 0:
        raise ValueError(f"t_max must be non-negative, got {t_max}")
    steps = int(round(t_max / dt))
    return np.arange(steps + 1) * dt


def _propagate(L, x0, dt, t_max, method, order):
    L = np.asarray(L, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (L.shape[0],):
        raise ValueError(f"initial state has shape {x0.shape}, operator is {L.shape}")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    times = _time_grid(dt, t_max)
    if method == "exact_spectral":
        basis = eig_sym(L)
        lam = np.clip(basis.eigenvalues, 0.0, None)
        U = basis.eigenvectors
        coeff = U.T @ x0
        states = (np.exp(-np.outer(times, lam)) * coeff) @ U.T
        return Trajectory(times, states, order)
    return _euler(lambda x: L @ x, x0, times, L, order)


def _euler(rhs, x0, times, L_for_check, order):
    dt = times[1] - times[0] if times.size > 1 else 0.0
    if dt and L_for_check is not None and L_for_check.size:
        lam_max = float(eig_sym(L_for_check).eigenvalues[-1])
        if lam_max > 0 and dt >= 2.0 / lam_max:
            warnings.warn(
                f"dt={dt:g} >= 2/lambda_max={2.0 / lam_max:g}: explicit Euler is unstable",
                RuntimeWarning,
                stacklevel=3,
            )
    states = np.empty((times.size, x0.size))
    x = x0.copy()
    states[0] = x
    for i in range(1, times.size):
        x = x - dt * rhs(x)
        states[i] = x
    return Trajectory(times, states, order)


def simulate_consensus(L, s0, dt, t_max, method="exact_spectral") -> Trajectory:
    """Consensus dynamics ``ds/dt = -L s`` from ``s0``.

    ``exact_spectral`` evaluates ``U exp(-Lambda t) U^T s0`` on the grid;
    ``euler`` iterates ``s <- s - dt L s``.
    """
    return _propagate(L, s0, dt, t_max, method, 0)


def _boundaries(X, k):
    if k < 0 or k > X.max_order:
        raise ValueError(f"order {k} not present (complex has max order {X.max_order})")
    n = X.count(k)
    lo = boundary_matrix(X, k).toarray().astype(float) if k >= 1 else np.zeros((0, n))
    hi = boundary_matrix(X, k + 1).toarray().astype(float)
    return lo, hi


def _hodge_rhs(lo, hi, g):
    """``B_{k+1} g(B_{k+1}^T w) + B_k^T g(B_k w)``; with g = identity this is ``L_k w``."""
    hiT = hi.T.copy()

    def rhs(w):
        return hi @ g(hiT @ w) + lo.T @ g(lo @ w)

    return rhs


def simulate_hodge_flow(X: SimplicialComplex, k, w0, dt, t_max, method="exact_spectral") -> Trajectory:
    """Linear dynamics ``dw/dt = -L_k w``; converges to the harmonic part of ``w0``.

    The Euler path evaluates ``L_k w`` through the boundary maps, in the same
    arithmetic order as :func:`simulate_nonlinear` with the identity.
    """
    w0 = np.asarray(w0, dtype=float)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    lo, hi = _boundaries(X, k)
    if w0.shape != (X.count(k),):
        raise ValueError(f"initial state has shape {w0.shape}, expected ({X.count(k)},)")
    if method == "exact_spectral":
        return _propagate(hodge_laplacian(X, k), w0, dt, t_max, method, k)
    return _euler(_hodge_rhs(lo, hi, _identity), w0, _time_grid(dt, t_max), hodge_laplacian(X, k), k)


def simulate_nonlinear(X: SimplicialComplex, k, w0, g=TANH, dt=0.01, t_max=1.0) -> Trajectory:
    """Explicit Euler integration of the nonlinear Hodge dynamics.

    ``dw/dt = -(B_{k+1} g(B_{k+1}^T w) + B_k^T g(B_k w))`` with ``g`` odd.
    """
    if isinstance(g, str):
        try:
            g = NONLINEARITIES[g]
        except KeyError:
            raise ValueError(f"unknown nonlinearity {g!r}") from None
    elif not isinstance(g, Nonlinearity):
        g = Nonlinearity(getattr(g, "__name__", "custom"), g)
    g.check_odd()
    w0 = np.asarray(w0, dtype=float)
    lo, hi = _boundaries(X, k)
    if w0.shape != (X.count(k),):
        raise ValueError(f"initial state has shape {w0.shape}, expected ({X.count(k)},)")
    return _euler(_hodge_rhs(lo, hi, g.func), w0, _time_grid(dt, t_max), hodge_laplacian(X, k), k)


def nonlinear_energy(X: SimplicialComplex, k, w, g=TANH):
    """``sum G(B_k w) + sum G(B_{k+1}^T w)`` with ``G`` the antiderivative of ``g``."""
    if isinstance(g, str):
        g = NONLINEARITIES[g]
    if g.antiderivative is None:
        raise ValueError(f"nonlinearity {g.name!r} has no antiderivative")
    lo, hi = _boundaries(X, k)
    w = np.asarray(w, dtype=float)
    return float(np.sum(g.antiderivative(lo @ w)) + np.sum(g.antiderivative(hi.T @ w)))


def random_initial_state(n, seed):
    """Standard Gaussian vector from a PCG64 generator."""
    return np.random.Generator(np.random.PCG64(int(seed))).standard_normal(n)


def detect_holes(X: SimplicialComplex, k=1, trials=5, seed=0, dt=0.05, t_max=50.0, method="exact_spectral"):
    """Estimate ``dim ker L_k`` from the end states of random trajectories.

    Each trial starts from a seeded Gaussian state and runs the linear Hodge
    dynamics; the numerical rank of the stacked final states is returned.
    Singular values count when above ``1e-6 * max(sigma_max, 1)``; the floor
    of 1 keeps fully decayed runs (no holes) at rank 0.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = X.count(k)
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    finals = []
    for _ in range(int(trials)):
        w0 = rng.standard_normal(n)
        finals.append(simulate_hodge_flow(X, k, w0, dt, t_max, method).final)
    if n == 0:
        return 0
    sv = np.linalg.svd(np.array(finals), compute_uv=False)
    return int(np.sum(sv > HOLE_RANK_TOL * max(float(sv[0]), 1.0)))
