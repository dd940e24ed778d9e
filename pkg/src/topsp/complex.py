"""Simplicial complexes, boundary operators and Hodge Laplacians.

Simplices are tuples of strictly increasing non-negative vertex ids. The
increasing order fixes the reference orientation, and the boundary of
``(v0, ..., vk)`` is ``sum_i (-1)**i (v0, ..., v_i dropped, ..., vk)``. For an
edge ``(a, b)`` this puts -1 at the tail ``a`` and +1 at the head ``b``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

Simplex = tuple


def _check_simplex(s) -> tuple:
    s = tuple(int(v) for v in s)
    if len(s) == 0:
        raise ValueError("empty simplex")
    if any(v < 0 for v in s):
        raise ValueError(f"negative vertex id in simplex {s}")
    if any(a >= b for a, b in zip(s, s[1:])):
        raise ValueError(f"simplex vertices must be strictly increasing: {s}")
    return s


class SimplicialComplex:
    """An immutable simplicial complex with canonical simplex ordering.

    Order-k simplices are kept in lexicographic order, which fixes the
    row/column indexing of every matrix built from the complex. Build one
    with :func:`from_maximal_simplices`.
    """

    def __init__(self, simplices_by_order: Sequence[Sequence[tuple]]):
        self._simplices = tuple(tuple(sorted(level)) for level in simplices_by_order)
        self._index = tuple({s: i for i, s in enumerate(level)} for level in self._simplices)
        self._boundary_cache: dict[int, sp.csr_array] = {}
        self.vertices = tuple(s[0] for s in self._simplices[0]) if self._simplices else ()
        # dense 0-based vertex positions, sorted-id order preserved
        self.vertex_position = {v: i for i, v in enumerate(self.vertices)}

    @property
    def max_order(self) -> int:
        return len(self._simplices) - 1

    def simplices(self, k: int) -> tuple:
        if 0 <= k < len(self._simplices):
            return self._simplices[k]
        return ()

    def count(self, k: int) -> int:
        return len(self.simplices(k))

    def index_of(self, s) -> int:
        s = tuple(s)
        k = len(s) - 1
        try:
            return self._index[k][s]
        except (IndexError, KeyError):
            raise KeyError(f"simplex {s} not in complex") from None

    def __contains__(self, s) -> bool:
        s = tuple(s)
        k = len(s) - 1
        return 0 <= k < len(self._index) and s in self._index[k]

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self._simplices == other._simplices

    def __hash__(self):
        return hash(self._simplices)

    def __repr__(self):
        counts = ", ".join(str(len(level)) for level in self._simplices)
        return f"SimplicialComplex(counts=[{counts}])"

    def maximal_simplices(self) -> list[tuple]:
        """Simplices that are not a face of any other simplex."""
        out = []
        for k in range(self.max_order + 1):
            covered = set()
            for s in self.simplices(k + 1):
                covered.update(combinations(s, k + 1))
            out.extend(s for s in self._simplices[k] if s not in covered)
        return sorted(out, key=lambda s: (len(s), s))

    def boundary(self, k: int) -> sp.csr_array:
        return boundary_matrix(self, k)

    def hodge_laplacian(self, k: int) -> np.ndarray:
        return hodge_laplacian(self, k)


def from_maximal_simplices(maximal: Iterable[Sequence[int]]) -> SimplicialComplex:
    """Close a list of simplices under taking faces.

    Parameters
    ----------
    maximal : iterable of vertex sequences
        Each must be strictly increasing. Non-maximal entries are allowed and
        simply absorbed by the closure.

    Returns
    -------
    SimplicialComplex
        Deterministically ordered; an empty input gives an empty complex.
    """
    levels: list[set] = []
    for raw in maximal:
        s = _check_simplex(raw)
        k = len(s) - 1
        while len(levels) <= k:
            levels.append(set())
        for j in range(k + 1):
            levels[j].update(combinations(s, j + 1))
    return SimplicialComplex([sorted(level) for level in levels])


def boundary_matrix(X: SimplicialComplex, k: int) -> sp.csr_array:
    """Signed incidence matrix ``B_k`` of shape ``(n_{k-1}, n_k)``, int64 entries."""
    if k < 1:
        raise ValueError("boundary_matrix needs k >= 1 (B_0 is the zero map)")
    cached = X._boundary_cache.get(k)
    if cached is not None:
        return cached
    rows, cols, vals = [], [], []
    faces_index = X._index[k - 1] if k - 1 < len(X._index) else {}
    for j, s in enumerate(X.simplices(k)):
        for i in range(k + 1):
            face = s[:i] + s[i + 1:]
            rows.append(faces_index[face])
            cols.append(j)
            vals.append(1 if i % 2 == 0 else -1)
    B = sp.csr_array(
        (np.array(vals, dtype=np.int64), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
        shape=(X.count(k - 1), X.count(k)),
    )
    X._boundary_cache[k] = B
    return B


def hodge_laplacian(X: SimplicialComplex, k: int) -> np.ndarray:
    """``L_k = B_k^T B_k + B_{k+1} B_{k+1}^T`` as a dense float matrix."""
    if k < 0 or k > X.max_order:
        raise ValueError(f"order {k} not present (complex has max order {X.max_order})")
    return lower_laplacian(X, k) + upper_laplacian(X, k)


def lower_laplacian(X: SimplicialComplex, k: int) -> np.ndarray:
    """``B_k^T B_k`` (zero for k = 0)."""
    n = X.count(k)
    if k == 0:
        return np.zeros((n, n))
    B = boundary_matrix(X, k).toarray().astype(float)
    return B.T @ B


def upper_laplacian(X: SimplicialComplex, k: int) -> np.ndarray:
    """``B_{k+1} B_{k+1}^T`` (zero when there are no (k+1)-simplices)."""
    B = boundary_matrix(X, k + 1).toarray().astype(float)
    return B @ B.T


def edge_laplacian(X: SimplicialComplex) -> np.ndarray:
    """``L_e = B_1^T B_1``: the edge Hodge Laplacian with triangles ignored."""
    return lower_laplacian(X, 1)


def adjacency_matrix(X: SimplicialComplex) -> np.ndarray:
    n = X.count(0)
    A = np.zeros((n, n))
    for a, b in X.simplices(1):
        i, j = X.vertex_position[a], X.vertex_position[b]
        A[i, j] = A[j, i] = 1.0
    return A


def graph_laplacian(X: SimplicialComplex) -> np.ndarray:
    """``D - A`` of the 1-skeleton, built from adjacency rather than B_1."""
    A = adjacency_matrix(X)
    return np.diag(A.sum(axis=1)) - A


def line_graph_laplacian(X: SimplicialComplex) -> np.ndarray:
    """Unweighted Laplacian of the line graph of the 1-skeleton.

    Line-graph nodes are the edges of ``X``; two are adjacent when the edges
    share a vertex.
    """
    edges = X.simplices(1)
    if not edges:
        raise ValueError("complex has no edges")
    by_vertex: dict[int, list[int]] = {}
    for e, (a, b) in enumerate(edges):
        by_vertex.setdefault(a, []).append(e)
        by_vertex.setdefault(b, []).append(e)
    m = len(edges)
    A = np.zeros((m, m))
    for incident in by_vertex.values():
        for e, f in combinations(incident, 2):
            A[e, f] = A[f, e] = 1.0
    return np.diag(A.sum(axis=1)) - A


def faces(X: SimplicialComplex, s) -> list[tuple]:
    s = tuple(s)
    if s not in X:
        raise KeyError(f"simplex {s} not in complex")
    if len(s) == 1:
        return []
    return [f for f in combinations(s, len(s) - 1)]


def cofaces(X: SimplicialComplex, s) -> list[tuple]:
    s = tuple(s)
    if s not in X:
        raise KeyError(f"simplex {s} not in complex")
    vs = set(s)
    return [c for c in X.simplices(len(s)) if vs.issubset(c)]


def connected_components(X: SimplicialComplex) -> np.ndarray:
    """Component label per vertex position (0-based, in order of first vertex)."""
    from scipy.sparse.csgraph import connected_components as _cc

    n = X.count(0)
    if n == 0:
        return np.zeros(0, dtype=int)
    _, labels = _cc(sp.csr_array(adjacency_matrix(X)), directed=False)
    return labels
