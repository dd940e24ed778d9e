import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from topsp.classic_dsp import (
    apply_filter_convolution,
    apply_filter_matrix,
    apply_filter_shift_form,
    apply_filter_spectral,
    apply_filter_state_space,
    circulant_filter,
    dft_matrix,
    frequency_response,
    real_output,
    same_multiset,
    shift_operator,
)

PATHS = [apply_filter_matrix, apply_filter_convolution, apply_filter_shift_form, apply_filter_state_space]


def test_circulant_n3():
    np.testing.assert_array_equal(circulant_filter([1, 2, 3]), [[1, 3, 2], [2, 1, 3], [3, 2, 1]])


def test_shift_response_n4():
    c = np.array([0.0, 1.0, 0.0, 0.0])
    np.testing.assert_allclose(frequency_response(c), [1, -1j, -1, 1j], atol=1e-12)


def test_identity_filter():
    np.testing.assert_allclose(frequency_response([1.0, 0, 0, 0, 0]), np.ones(5), atol=1e-14)


@pytest.mark.parametrize("n", range(1, 65))
def test_dft_unitary(n):
    F = dft_matrix(n)
    np.testing.assert_allclose(F.conj().T @ F, np.eye(n), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 5, 8, 13])
def test_shift_power_is_identity(n):
    S = shift_operator(n)
    np.testing.assert_array_equal(np.linalg.matrix_power(S, n), np.eye(n))


@pytest.mark.parametrize("n", range(2, 17))
def test_dft_diagonalises_circulant(n, rng):
    c = rng.normal(size=n)
    F = dft_matrix(n)
    D = F @ circulant_filter(c) @ F.conj().T
    np.testing.assert_allclose(D, np.diag(frequency_response(c)), atol=1e-10)
    assert same_multiset(frequency_response(c), np.linalg.eigvals(circulant_filter(c)), 1e-8)


def test_shift_operator_moves_forward():
    np.testing.assert_array_equal(shift_operator(4) @ np.array([1.0, 2, 3, 4]), [4, 1, 2, 3])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 24).flatmap(lambda n: st.tuples(
    arrays(float, n, elements=st.floats(-10, 10)), arrays(float, n, elements=st.floats(-10, 10)))))
def test_paths_agree(cs):
    c, s = cs
    ref = apply_filter_matrix(c, s)
    scale = 1.0 + np.abs(c).sum() * np.abs(s).max()
    for path in PATHS[1:]:
        np.testing.assert_allclose(path(c, s), ref, atol=1e-12 * scale)
    np.testing.assert_allclose(apply_filter_spectral(c, s), ref, atol=1e-10 * scale)


@pytest.mark.parametrize("path", PATHS)
def test_length_mismatch(path):
    with pytest.raises(ValueError):
        path([1.0, 2.0], [1.0, 2.0, 3.0])


def test_dft_rejects_zero():
    with pytest.raises(ValueError):
        dft_matrix(0)


def test_real_output_guards_residue():
    np.testing.assert_array_equal(real_output(np.array([1 + 1e-13j])), [1.0])
    with pytest.raises(ValueError):
        real_output(np.array([1 + 1e-6j]))


def test_same_multiset_near_ties():
    a = np.array([1 + 1j, 1 - 1j, 1 + 1e-12 + 2j])
    b = np.array([1 + 2j, 1 - 1j, 1 + 1j])
    assert same_multiset(a, b)
    assert not same_multiset(a, b * 1.01)
    assert not same_multiset(a, b[:2])
