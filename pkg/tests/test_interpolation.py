import numpy as np
import pytest

from topsp.complex import boundary_matrix, from_maximal_simplices, graph_laplacian
from topsp.fixtures import INTERPOLATION_ALPHAS, EXAMPLE_FLOW, EXAMPLE_LABELED_EDGES
from topsp.interpolation import (
    LabeledSignal,
    expansion_operator,
    interpolate_edge_flow,
    interpolate_node_labels,
    pearson,
)

from oracles import constrained_qp


def example_labels(X, truth=EXAMPLE_FLOW):
    return LabeledSignal.from_mapping({X.index_of(e): truth[X.index_of(e)] for e in EXAMPLE_LABELED_EDGES}, 10)


def test_path_midpoint():
    P = from_maximal_simplices([(1, 2), (2, 3)])
    out = interpolate_node_labels(P, LabeledSignal([0, 2], [0.0, 2.0], 3))
    np.testing.assert_allclose(out, [0.0, 1.0, 2.0])


def test_node_labels_constant_and_complete(X):
    out = interpolate_node_labels(X, LabeledSignal([1, 5], [3.0, 3.0], 7))
    np.testing.assert_allclose(out, np.full(7, 3.0))
    full = LabeledSignal(np.arange(7), np.arange(7.0), 7)
    np.testing.assert_array_equal(interpolate_node_labels(X, full), np.arange(7.0))


def test_node_labels_match_qp_oracle(X, rng):
    labels = LabeledSignal([0, 3, 6], rng.normal(size=3), 7)
    out = interpolate_node_labels(X, labels)
    np.testing.assert_allclose(out, constrained_qp(graph_laplacian(X), [0, 3, 6], labels.values, 7), atol=1e-8)
    np.testing.assert_array_equal(out[labels.labeled_indices], labels.values)


def test_node_labels_need_every_component():
    G = from_maximal_simplices([(0, 1), (2, 3)])
    with pytest.raises(ValueError, match=r"\[2, 3\]"):
        interpolate_node_labels(G, LabeledSignal([0], [1.0], 4))


@pytest.mark.parametrize("idx", [[0, 0], [2, 1], [-1], [10]])
def test_labeled_signal_validation(idx):
    with pytest.raises(ValueError):
        LabeledSignal(idx, np.zeros(len(idx)), 10)


def test_expansion_operator():
    assert expansion_operator(10, range(10)).shape == (10, 0)
    np.testing.assert_array_equal(expansion_operator(3, [0]), [[0, 0], [1, 0], [0, 1]])
    with pytest.raises(ValueError):
        expansion_operator(3, [1, 1])
    with pytest.raises(ValueError):
        expansion_operator(3, [3])


def test_expansion_operator_example_labels(X):
    labels = example_labels(X)
    Phi = expansion_operator(10, labels.labeled_indices)
    assert Phi.shape == (10, 5)
    rows = [X.simplices(1)[i] for i in np.argmax(Phi, axis=0)]
    assert rows == [(1, 2), (2, 3), (3, 4), (5, 7), (6, 7)]


def test_worked_example(X):
    labels = example_labels(X)
    best = []
    for alpha in INTERPOLATION_ALPHAS:
        f = interpolate_edge_flow(X, labels, alpha)
        best.append((pearson(f, EXAMPLE_FLOW), np.linalg.norm(f - EXAMPLE_FLOW)))
        np.testing.assert_array_equal(f[labels.labeled_indices], labels.values)
    assert any(r >= 0.99 and e <= 0.1 for r, e in best)
    r, e = best[INTERPOLATION_ALPHAS.index(0.1)]
    assert r >= 0.99 and e == pytest.approx(0.064, abs=0.01)


def test_all_labeled_returns_labels(X):
    labels = LabeledSignal(np.arange(10), EXAMPLE_FLOW, 10)
    np.testing.assert_array_equal(interpolate_edge_flow(X, labels), EXAMPLE_FLOW)


def test_divergence_free_recovery(X, rng):
    from topsp.spectral import harmonic_basis

    B2 = boundary_matrix(X, 2).toarray().astype(float)
    truth = B2 @ rng.normal(size=2) + harmonic_basis(X, 1) @ rng.normal(size=2)
    # unlabeled edges (1,2), (3,4), (5,7), (6,7) contain no cycle
    unlabeled = {X.index_of(e) for e in [(1, 2), (3, 4), (5, 7), (6, 7)]}
    idx = [i for i in range(10) if i not in unlabeled]
    f = interpolate_edge_flow(X, LabeledSignal(idx, truth[idx], 10), alpha=1e-6)
    assert np.linalg.norm(f - truth) <= 1e-3


@pytest.mark.parametrize("use_triangles", [False, True])
def test_matches_qp_oracle(X, rng, use_triangles):
    B1 = boundary_matrix(X, 1).toarray().astype(float)
    B2 = boundary_matrix(X, 2).toarray().astype(float)
    idx = [1, 2, 5, 6, 8]
    vals = rng.normal(size=5)
    alpha = 0.3
    unl = np.ones(10)
    unl[idx] = 0.0
    Q = B1.T @ B1 + alpha**2 * np.diag(unl) + (B2 @ B2.T if use_triangles else 0)
    f = interpolate_edge_flow(X, LabeledSignal(idx, vals, 10), alpha, use_triangles)
    np.testing.assert_allclose(f, constrained_qp(Q, idx, vals, 10), atol=1e-6)


def test_monotone_regularization(X):
    labels = example_labels(X)
    U = labels.unlabeled_indices
    norms = [np.linalg.norm(interpolate_edge_flow(X, labels, a)[U]) for a in [0.001, 0.01, 0.1, 0.5, 1, 5, 50]]
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))


def test_triangle_effect(X):
    labels = example_labels(X)
    plain = interpolate_edge_flow(X, labels, 1e-3)
    tri = interpolate_edge_flow(X, labels, 1e-3, use_triangles=True)
    i57, i67 = X.index_of((5, 7)), X.index_of((6, 7))
    assert abs(plain[i57] - tri[i57]) > 1e-3 or abs(plain[i67] - tri[i67]) > 1e-3


def test_rank_deficient_alpha_zero(X):
    # leaving every edge of the 1-2-3 cycle unlabeled makes a free cyclic flow
    idx = [X.index_of(e) for e in [(1, 4), (3, 4), (3, 6), (4, 5), (5, 6), (5, 7), (6, 7)]]
    labels = LabeledSignal(sorted(idx), np.ones(7), 10)
    with pytest.raises(ValueError, match="alpha > 0"):
        interpolate_edge_flow(X, labels, alpha=0.0)
    interpolate_edge_flow(X, labels, alpha=0.1)
    with pytest.raises(ValueError):
        interpolate_edge_flow(X, labels, alpha=-1.0)


def test_pearson():
    a = np.array([1.0, 2.0, 3.0])
    assert pearson(a, a) == pytest.approx(1.0)
    assert pearson(a, -a) == pytest.approx(-1.0)
    assert pearson(a, [1.0, 2.0, 4.0]) == pytest.approx(0.981, abs=1e-3)
    with pytest.raises(ValueError):
        pearson(a, np.ones(3))
    with pytest.raises(ValueError):
        pearson([1.0], [2.0])
