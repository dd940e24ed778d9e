"""Spectral bases, Fourier transforms and the Hodge decomposition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .complex import SimplicialComplex, boundary_matrix, hodge_laplacian

#: eigenvalues below ``KERNEL_TOL * max(1, lambda_max)`` count as zero
KERNEL_TOL = 1e-8
PINV_TOL = 1e-10
_SIGN_TOL = 1e-12


@dataclass(frozen=True)
class SpectralBasis:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def __len__(self):
        return self.eigenvalues.shape[0]

    def kernel_mask(self, tol=KERNEL_TOL):
        lam = self.eigenvalues
        scale = max(1.0, float(lam.max())) if lam.size else 1.0
        return lam < tol * scale

    def response_matrix(self, gains):
        """``U diag(gains) U^T``."""
        U = self.eigenvectors
        return (U * np.asarray(gains, dtype=float)) @ U.T


def fix_signs(U):
    """Flip columns so the first entry with magnitude > 1e-12 is positive."""
    U = np.array(U, dtype=float, copy=True)
    for j in range(U.shape[1]):
        nz = np.flatnonzero(np.abs(U[:, j]) > _SIGN_TOL)
        if nz.size and U[nz[0], j] < 0:
            U[:, j] = -U[:, j]
    return U


def eig_sym(M, rtol=1e-12, max_sweeps=100) -> SpectralBasis:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    The input is symmetrised first. Eigenvalues come back ascending and each
    eigenvector has a deterministic sign.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"eig_sym needs a square matrix, got shape {M.shape}")
    M = 0.5 * (M + M.T)
    if M.shape[0] == 0:
        return SpectralBasis(np.zeros(0), np.zeros((0, 0)))
    w, V, sweeps = kernels.jacobi_eigh(np.ascontiguousarray(M), rtol, max_sweeps)
    order = np.argsort(w, kind="stable")
    return SpectralBasis(np.asarray(w)[order], fix_signs(np.asarray(V)[:, order]), int(sweeps))


def _check_dim(basis, s):
    s = np.asarray(s, dtype=float)
    if s.shape[0] != len(basis):
        raise ValueError(f"signal has {s.shape[0]} entries, basis has {len(basis)}")
    return s


def gft(basis: SpectralBasis, s):
    """Fourier coefficients ``U^T s``."""
    return basis.eigenvectors.T @ _check_dim(basis, s)


def igft(basis: SpectralBasis, s_hat):
    """Synthesis ``U s_hat``."""
    return basis.eigenvectors @ _check_dim(basis, s_hat)


def pinv_sym(M, tol=PINV_TOL):
    """Pseudo-inverse of a symmetric PSD matrix through its spectral basis."""
    basis = eig_sym(M)
    lam = basis.eigenvalues
    scale = max(1.0, float(lam.max())) if lam.size else 1.0
    inv = np.where(lam > tol * scale, 1.0 / np.where(lam > tol * scale, lam, 1.0), 0.0)
    return basis.response_matrix(inv)


@dataclass(frozen=True)
class HodgeDecomposition:
    """Gradient, curl and harmonic parts of a k-cochain.

    ``gradient = B_k^T node_potential`` and ``curl = B_{k+1} triangle_potential``
    (for k = 1 these are node and triangle potentials).
    """

    gradient: np.ndarray
    curl: np.ndarray
    harmonic: np.ndarray
    node_potential: np.ndarray
    triangle_potential: np.ndarray

    def norms(self):
        return {
            "gradient": float(np.linalg.norm(self.gradient)),
            "curl": float(np.linalg.norm(self.curl)),
            "harmonic": float(np.linalg.norm(self.harmonic)),
        }


def hodge_decompose(X: SimplicialComplex, f, k: int = 1) -> HodgeDecomposition:
    """Split a k-cochain into gradient, curl and harmonic components.

    Potentials are the minimum-norm least-squares solutions, obtained with
    the pseudo-inverses of ``B_k B_k^T`` and ``B_{k+1}^T B_{k+1}``.
    """
    f = np.asarray(f, dtype=float)
    n = X.count(k)
    if k < 0 or k > X.max_order:
        raise ValueError(f"order {k} not present in complex")
    if f.shape != (n,):
        raise ValueError(f"signal has shape {f.shape}, expected ({n},)")

    if k >= 1:
        Bk = boundary_matrix(X, k).toarray().astype(float)
        v = pinv_sym(Bk @ Bk.T) @ (Bk @ f)
        grad = Bk.T @ v
    else:
        v = np.zeros(0)
        grad = np.zeros(n)
    Bk1 = boundary_matrix(X, k + 1).toarray().astype(float)
    t = pinv_sym(Bk1.T @ Bk1) @ (Bk1.T @ f)
    curl = Bk1 @ t
    return HodgeDecomposition(grad, curl, f - grad - curl, v, t)


def harmonic_basis(X: SimplicialComplex, k: int, tol=KERNEL_TOL) -> np.ndarray:
    """Orthonormal basis of ``ker L_k`` as columns."""
    basis = eig_sym(hodge_laplacian(X, k))
    return basis.eigenvectors[:, basis.kernel_mask(tol)]


def betti(X: SimplicialComplex, k: int, tol=KERNEL_TOL) -> int:
    """Dimension of ``ker L_k``."""
    return int(harmonic_basis(X, k, tol).shape[1])


def harmonic_projection(X: SimplicialComplex, f, k: int = 1, tol=KERNEL_TOL):
    H = harmonic_basis(X, k, tol)
    return H @ (H.T @ np.asarray(f, dtype=float))


def lift_gradient_eigenvectors(X: SimplicialComplex, k: int = 1, tol=KERNEL_TOL):
    """Lift nonzero eigenpairs of ``B_k B_k^T`` to gradient eigenvectors of ``L_k``.

    For k = 1, ``B_1 B_1^T = L_0`` and each pair ``(lam, v)`` maps to
    ``(lam, B_1^T v)``.
    """
    if k < 1:
        return []
    B = boundary_matrix(X, k).toarray().astype(float)
    basis = eig_sym(B @ B.T)
    keep = ~basis.kernel_mask(tol)
    return [(float(lam), B.T @ v) for lam, v in zip(basis.eigenvalues[keep], basis.eigenvectors[:, keep].T)]


def lift_curl_eigenvectors(X: SimplicialComplex, k: int = 1, tol=KERNEL_TOL):
    """Lift nonzero eigenpairs ``(theta, t)`` of ``B_{k+1}^T B_{k+1}`` to ``(theta, B_{k+1} t)``."""
    B = boundary_matrix(X, k + 1).toarray().astype(float)
    if B.shape[1] == 0:
        return []
    basis = eig_sym(B.T @ B)
    keep = ~basis.kernel_mask(tol)
    return [(float(th), B @ t) for th, t in zip(basis.eigenvalues[keep], basis.eigenvectors[:, keep].T)]
