import numpy as np
import pytest

from topsp import kernels

from conftest import BACKENDS


def _sym(rng, n):
    A = rng.normal(size=(n, n))
    return A + A.T


@pytest.mark.parametrize("n", [1, 2, 3, 7, 20])
def test_jacobi_matches_lapack(backend, rng, n):
    M = _sym(rng, n)
    w, V, sweeps = backend.jacobi_eigh(M)
    order = np.argsort(w)
    w, V = w[order], V[:, order]
    np.testing.assert_allclose(w, np.linalg.eigvalsh(M), atol=1e-10)
    np.testing.assert_allclose(V.T @ V, np.eye(n), atol=1e-10)
    np.testing.assert_allclose(M @ V, V * w, atol=1e-9)
    assert sweeps <= 100


def test_jacobi_zero_matrix(backend):
    w, V, sweeps = backend.jacobi_eigh(np.zeros((4, 4)))
    assert sweeps == 0
    np.testing.assert_array_equal(w, 0.0)
    np.testing.assert_array_equal(V, np.eye(4))


def test_jacobi_diagonal_input_needs_no_sweeps(backend):
    w, _, sweeps = backend.jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    assert sweeps == 0
    np.testing.assert_array_equal(w, [3.0, 1.0, 2.0])


def test_jacobi_degenerate_spectrum(backend):
    # path-3 Laplacian plus multiples of identity gives repeated eigenvalues in blocks
    M = np.kron(np.eye(3), np.array([[2.0, -1.0], [-1.0, 2.0]]))
    w, V, _ = backend.jacobi_eigh(M)
    np.testing.assert_allclose(np.sort(w), [1, 1, 1, 3, 3, 3], atol=1e-12)
    np.testing.assert_allclose(V.T @ V, np.eye(6), atol=1e-12)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
def test_backends_agree(rng):
    py = kernels.get_backend("python")
    cy = kernels.get_backend("cython")
    for n in (5, 12):
        M = _sym(rng, n)
        w1, V1, s1 = py.jacobi_eigh(M)
        w2, V2, s2 = cy.jacobi_eigh(M)
        assert s1 == s2
        np.testing.assert_allclose(w1, w2, atol=1e-12)
        np.testing.assert_allclose(V1, V2, atol=1e-12)
        c, s = rng.normal(size=n), rng.normal(size=n)
        np.testing.assert_allclose(py.cyclic_convolve(c, s), cy.cyclic_convolve(c, s), atol=1e-13)


def test_cyclic_convolve_by_definition(backend, rng):
    c, s = rng.normal(size=6), rng.normal(size=6)
    expected = [sum(c[i] * s[(t - i) % 6] for i in range(6)) for t in range(6)]
    np.testing.assert_allclose(backend.cyclic_convolve(c, s), expected, atol=1e-13)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_env_var_forces_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, TOPSP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import topsp; print(topsp.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
