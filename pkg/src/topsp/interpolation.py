"""Semi-supervised interpolation of node signals and edge flows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .complex import SimplicialComplex, boundary_matrix, connected_components, hodge_laplacian


@dataclass(frozen=True)
class LabeledSignal:
    """Known values on a subset of the order-k simplices (canonical indices)."""

    labeled_indices: np.ndarray
    values: np.ndarray
    total_dimension: int

    def __post_init__(self):
        idx = np.asarray(self.labeled_indices, dtype=np.int64)
        vals = np.asarray(self.values, dtype=float)
        if idx.ndim != 1 or vals.shape != idx.shape:
            raise ValueError("labeled_indices and values must be 1-D with equal length")
        if idx.size and (idx.min() < 0 or idx.max() >= self.total_dimension):
            raise ValueError(f"label index out of range [0, {self.total_dimension})")
        if np.any(np.diff(idx) <= 0):
            raise ValueError("labeled_indices must be strictly increasing (no duplicates)")
        object.__setattr__(self, "labeled_indices", idx)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, labels: dict, total_dimension: int):
        """Build from ``{index: value}``, sorting the indices."""
        idx = sorted(int(i) for i in labels)
        return cls(np.array(idx, dtype=np.int64), np.array([labels[i] for i in idx], dtype=float), total_dimension)

    @property
    def unlabeled_indices(self):
        mask = np.ones(self.total_dimension, dtype=bool)
        mask[self.labeled_indices] = False
        return np.flatnonzero(mask)

    def trivial_fill(self):
        """Labels in place, zeros elsewhere."""
        f0 = np.zeros(self.total_dimension)
        f0[self.labeled_indices] = self.values
        return f0


def expansion_operator(total, labeled_indices):
    """Selection matrix mapping unlabeled values into the full vector.

    Column ``j`` has a single 1 in the row of the j-th unlabeled index
    (ascending).
    """
    idx = np.asarray(labeled_indices, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= total):
        raise ValueError(f"labeled index out of range [0, {total})")
    if np.unique(idx).size != idx.size:
        raise ValueError("duplicate labeled index")
    mask = np.ones(total, dtype=bool)
    mask[idx] = False
    unlabeled = np.flatnonzero(mask)
    Phi = np.zeros((total, unlabeled.size))
    Phi[unlabeled, np.arange(unlabeled.size)] = 1.0
    return Phi


def interpolate_node_labels(X: SimplicialComplex, labels: LabeledSignal):
    """Harmonic extension of node labels.

    Minimises ``y^T L_0 y`` with labeled entries fixed, by solving
    ``L_UU y_U = -L_UL y_L``. Every connected component needs a label.
    """
    n = X.count(0)
    if labels.total_dimension != n:
        raise ValueError(f"labels cover {labels.total_dimension} nodes, complex has {n}")
    comp = connected_components(X)
    have = set(comp[labels.labeled_indices].tolist())
    for c in range(int(comp.max()) + 1 if n else 0):
        if c not in have:
            members = [X.vertices[i] for i in np.flatnonzero(comp == c)]
            raise ValueError(f"connected component with vertices {members} has no label")
    out = labels.trivial_fill()
    U = labels.unlabeled_indices
    if U.size == 0:
        return out
    L = hodge_laplacian(X, 0)
    L_UU = L[np.ix_(U, U)]
    rhs = -L[np.ix_(U, labels.labeled_indices)] @ labels.values
    out[U] = scipy.linalg.solve(L_UU, rhs, assume_a="pos")
    return out


def _lstsq_qr(A, b, allow_rank_deficient):
    """Least squares by column-pivoted QR."""
    if A.shape[1] == 0:
        return np.zeros(0)
    Q, R, piv = scipy.linalg.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > 1e-10 * max(1.0, diag[0] if diag.size else 0.0)))
    if rank < A.shape[1] and not allow_rank_deficient:
        raise ValueError(
            "interpolation system is rank deficient: some unlabeled cycle is unconstrained; use alpha > 0"
        )
    x = np.zeros(A.shape[1])
    x[piv[:rank]] = scipy.linalg.solve_triangular(R[:rank, :rank], (Q.T @ b)[:rank])
    return x


def interpolate_edge_flow(X: SimplicialComplex, labels: LabeledSignal, alpha=0.1, use_triangles=False):
    """Fill unlabeled edge flows by regularised least squares.

    Without triangles the unknowns ``f_U`` solve::

        min || [B1 Phi; alpha I] f_U - [-B1 f0; 0] ||^2

    and with triangles the rows ``B2^T Phi`` / ``-B2^T f0`` are appended,
    additionally penalising curl. ``f0`` is the labels padded with zeros.
    Labeled entries of the result are the inputs, untouched.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    m = X.count(1)
    if labels.total_dimension != m:
        raise ValueError(f"labels cover {labels.total_dimension} edges, complex has {m}")
    f0 = labels.trivial_fill()
    Phi = expansion_operator(m, labels.labeled_indices)
    nu = Phi.shape[1]
    if nu == 0:
        return f0
    B1 = boundary_matrix(X, 1).toarray().astype(float)
    blocks = [B1 @ Phi, alpha * np.eye(nu)]
    rhs = [-B1 @ f0, np.zeros(nu)]
    if use_triangles:
        B2 = boundary_matrix(X, 2).toarray().astype(float)
        blocks.append(B2.T @ Phi)
        rhs.append(-B2.T @ f0)
    A = np.vstack(blocks)
    b = np.concatenate(rhs)
    fu = _lstsq_qr(A, b, allow_rank_deficient=False)
    out = f0.copy()
    out[labels.unlabeled_indices] = fu
    return out


def pearson(a, b):
    """Sample Pearson correlation of two equal-length vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 2:
        raise ValueError("pearson needs two 1-D vectors of equal length >= 2")
    da = a - a.mean()
    db = b - b.mean()
    sa = np.sqrt(np.dot(da, da))
    sb = np.sqrt(np.dot(db, db))
    if sa == 0.0 or sb == 0.0:
        raise ValueError("pearson is undefined for a constant vector")
    return float(np.clip(np.dot(da, db) / (sa * sb), -1.0, 1.0))
