import numpy as np
import pytest

from topsp.complex import boundary_matrix, graph_laplacian, hodge_laplacian
from topsp.filters import smooth_iterative
from topsp.snn import (
    LayerParams,
    SNNModel,
    build_model,
    check_equivariance,
    forward,
    gradients,
    mse_loss,
    orientation_flip,
    recurrent_forward,
    train,
)
from topsp.spectral import eig_sym


def fd_check(model, X, data, h=1e-5):
    _, grads = gradients(model, X, data)
    num = []
    for p in model.parameters():
        g = np.zeros_like(p)
        for idx in np.ndindex(p.shape):
            old = p[idx]
            p[idx] = old + h
            up = mse_loss(model, X, data)
            p[idx] = old - h
            down = mse_loss(model, X, data)
            p[idx] = old
            g[idx] = (up - down) / (2 * h)
        num.append(g)
    a = np.concatenate([g.ravel() for g in grads])
    b = np.concatenate([g.ravel() for g in num])
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


def test_zero_weights_give_zero(X):
    for act in ("tanh", "relu", "identity"):
        m = build_model(X, 1, [2, 3], act)
        m.layers[0].weights[:] = 0
        assert not forward(m, X, np.ones((10, 2))).any()


def test_matches_iterative_smoothing(X, rng):
    L0 = graph_laplacian(X)
    mu = 0.2
    layers = [LayerParams([[1.0]], [1.0, -mu]) for _ in range(3)]
    model = SNNModel(0, layers, "identity")
    y = rng.normal(size=7)
    np.testing.assert_allclose(forward(model, X, y[:, None])[:, 0], smooth_iterative(L0, y, mu, 3), atol=1e-10)


def test_linear_collapse(X, rng):
    m = build_model(X, 1, [3, 4, 2], "identity", seed=5)
    Y0 = rng.normal(size=(10, 3))
    c = m.layers[0].shift
    H = c[0] * np.eye(10) + c[1] * hodge_laplacian(X, 1)
    expected = H @ H @ Y0 @ m.layers[0].weights @ m.layers[1].weights
    np.testing.assert_allclose(forward(m, X, Y0), expected, atol=1e-8)


def test_dimension_chain_error(X):
    with pytest.raises(ValueError, match="layer 1"):
        SNNModel(1, [LayerParams(np.ones((2, 3)), [1.0]), LayerParams(np.ones((4, 1)), [1.0])])
    m = build_model(X, 1, [2, 1])
    with pytest.raises(ValueError):
        forward(m, X, np.ones((9, 2)))


def test_orientation_flip_operators(X):
    D, lo, hi = orientation_flip(X, [])
    np.testing.assert_array_equal(D, np.eye(10))
    D, lo, hi = orientation_flip(X, range(10))
    np.testing.assert_array_equal(lo.T @ lo + hi @ hi.T, hodge_laplacian(X, 1))
    j = X.index_of((1, 3))
    D, lo, hi = orientation_flip(X, [j])
    B1 = boundary_matrix(X, 1).toarray()
    B2 = boundary_matrix(X, 2).toarray()
    np.testing.assert_array_equal(lo[:, j], -B1[:, j])
    np.testing.assert_array_equal(hi[j], -B2[j])
    assert not (lo @ hi).any()
    with pytest.raises(ValueError):
        orientation_flip(X, [10])


@pytest.mark.parametrize("shift", ["hodge", "split"])
def test_equivariance_odd(X, rng, shift):
    for act in ("tanh", "identity"):
        m = build_model(X, 1, [2, 3, 1], act, shift=shift, degree=2, seed=int(rng.integers(1000)))
        flips = np.flatnonzero(rng.random(10) < 0.5)
        rep = check_equivariance(m, X, rng.normal(size=(10, 2)), flips)
        assert rep.max_deviation <= (1e-12 if act == "identity" else 1e-10)
        assert rep.equivariant


def test_relu_counterexample(X):
    m = build_model(X, 1, [1, 1], "relu", degree=0)
    m.layers[0].weights[:] = 1.0
    Y0 = np.zeros((10, 1))
    Y0[0] = 1.0
    rep = check_equivariance(m, X, Y0, [0])
    assert not rep.odd and rep.max_deviation > 1e-3


def test_gradients_match_finite_differences(X, rng):
    for seed in range(3):
        m = build_model(X, 1, [2, 3, 2], "tanh", shift=["hodge", "split"][seed % 2], degree=2, seed=seed)
        data = [(rng.normal(size=(10, 2)), rng.normal(size=(10, 2))) for _ in range(2)]
        assert fd_check(m, X, data) <= 1e-5


def test_identity_task(X, rng):
    m = build_model(X, 1, [3, 3], "identity", degree=0, seed=1)
    Y0 = rng.normal(size=(10, 3))
    trained, curve = train(m, X, [(Y0, Y0)], lr=0.5, epochs=500)
    assert curve[-1] <= 1e-6
    assert np.all(np.diff(curve) <= 1e-15)


def test_zero_lr_is_flat(X, rng):
    m = build_model(X, 1, [2, 1], "tanh")
    data = [(rng.normal(size=(10, 2)), rng.normal(size=(10, 1)))]
    trained, curve = train(m, X, data, lr=0.0, epochs=5)
    assert np.all(curve == curve[0])
    for p, q in zip(trained.parameters(), m.parameters()):
        np.testing.assert_array_equal(p, q)
    with pytest.raises(ValueError):
        train(m, X, data, lr=-1.0)


def test_target_shape_mismatch(X):
    m = build_model(X, 1, [2, 1])
    with pytest.raises(ValueError):
        mse_loss(m, X, [(np.ones((10, 2)), np.ones((10, 2)))])


def test_permutation_consistency(X, rng):
    # relabelling the simplices permutes the shift operator, so outputs permute too
    m = build_model(X, 1, [2, 2], "tanh", degree=2)
    P = np.eye(10)[rng.permutation(10)]
    lo = boundary_matrix(X, 1).toarray().astype(float) @ P.T
    hi = P @ boundary_matrix(X, 2).toarray().astype(float)
    from topsp.snn import forward_with_boundaries

    Y0 = rng.normal(size=(10, 2))
    np.testing.assert_allclose(forward_with_boundaries(m, lo, hi, P @ Y0), P @ forward(m, X, Y0), atol=1e-12)


def test_recurrent_fixed_point(X, rng):
    m = build_model(X, 1, [2, 2], "tanh", degree=1)
    m.layers[0].weights[:] = 0.3 * np.eye(2)
    Y, iters = recurrent_forward(m, X, rng.normal(size=(10, 2)))
    np.testing.assert_allclose(forward(SNNModel(1, [m.layers[0]], "tanh"), X, Y), Y, atol=1e-7)
    assert iters > 1
    m.layers[0].weights[:] = 5.0 * np.eye(2)
    m.layers[0].shift[:] = [1.0, 0.0]
    m.activation = "identity"
    with pytest.raises(RuntimeError):
        recurrent_forward(m, X, np.ones((10, 2)), max_iter=2000)


def test_default_shift_is_normalised(X):
    m = build_model(X, 1, [1, 1])
    lam_max = eig_sym(hodge_laplacian(X, 1)).eigenvalues[-1]
    np.testing.assert_allclose(m.layers[0].shift, [1.0, -1.0 / lam_max])
