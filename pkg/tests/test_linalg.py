import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_orthogonal
from pframes import linalg


def test_sym_eig_identity():
    spec = linalg.sym_eig(np.eye(3))
    assert np.allclose(spec.eigenvalues.real, [1.0, 1.0, 1.0])
    assert np.allclose(spec.eigenvalues.imag, 0.0)


def test_sym_eig_diagonal_sorted_ascending():
    spec = linalg.sym_eig(np.diag([4.0, 1.0]))
    assert np.allclose(spec.eigenvalues.real, [1.0, 4.0])


def test_sym_eig_uniform_basis_frame_operator():
    # S for the uniform measure on {e1, e2} with weights 1/2 each, summed by hand.
    s = 0.5 * np.outer([1, 0], [1, 0]) + 0.5 * np.outer([0, 1], [0, 1])
    spec = linalg.sym_eig(s)
    assert np.allclose(spec.eigenvalues.real, [0.5, 0.5])


@pytest.mark.parametrize("seed", range(5))
def test_sym_eig_reconstruction_and_orthonormality(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(6, 6))
    m = a + a.T
    spec = linalg.sym_eig(m)
    q = spec.eigenvectors
    lam = np.diag(spec.eigenvalues.real)
    assert np.linalg.norm(q @ lam @ q.T - m) <= 1e-9 * np.linalg.norm(m)
    assert np.abs(q.T @ q - np.eye(6)).max() <= 1e-10


def test_sym_eig_rayleigh_sandwich():
    rng = np.random.default_rng(42)
    a = rng.normal(size=(5, 5))
    m = a + a.T
    spec = linalg.sym_eig(m)
    lo, hi = spec.eigenvalues.real[0], spec.eigenvalues.real[-1]
    for _ in range(100):
        v = rng.normal(size=5)
        quotient = (v @ m @ v) / (v @ v)
        assert lo - 1e-10 <= quotient <= hi + 1e-10


def test_sym_eig_rejects_bad_input():
    with pytest.raises(ValueError):
        linalg.sym_eig(np.ones((2, 3)))
    with pytest.raises(ValueError):
        linalg.sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        linalg.sym_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_real_eigenvalues_rotation_is_pure_imaginary():
    spec = linalg.real_eigenvalues(np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert np.allclose(sorted(spec.eigenvalues.imag), [-1.0, 1.0])
    assert np.allclose(spec.eigenvalues.real, 0.0)


def test_real_eigenvalues_diagonal():
    spec = linalg.real_eigenvalues(np.diag([2.0, -3.0]))
    assert np.allclose(spec.eigenvalues.real, [-3.0, 2.0])


def test_real_eigenvalues_canonical_dual_product():
    # For Psi a frame and Phi its canonical dual, pinv(Psi) @ Phi = (Psi^T Psi)^{-1},
    # so the general eigensolver must reproduce the symmetric spectrum.
    rng = np.random.default_rng(3)
    psi = rng.normal(size=(6, 3))
    gram_inv = np.linalg.inv(psi.T @ psi)
    phi = psi @ gram_inv
    product = linalg.pinv(psi) @ phi
    general = np.sort(linalg.real_eigenvalues(product).eigenvalues.real)
    symmetric = np.sort(linalg.sym_eig(gram_inv).eigenvalues.real)
    assert np.abs(linalg.real_eigenvalues(product).eigenvalues.imag).max() <= 1e-10
    assert np.allclose(general, symmetric, atol=1e-8)
    assert general.min() > 0.0


@pytest.mark.parametrize("seed", range(8))
def test_real_eigenvalues_det_trace_identities(seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(5, 5))
    vals = linalg.real_eigenvalues(m).eigenvalues
    det = np.linalg.det(m)
    assert abs(det - np.prod(vals).real) <= 1e-8 * (1.0 + abs(det))
    assert abs(np.prod(vals).imag) <= 1e-8 * (1.0 + abs(det))
    trace = np.trace(m)
    assert abs(trace - vals.sum().real) <= 1e-8 * (1.0 + abs(trace))


@pytest.mark.parametrize("seed", range(5))
def test_real_eigenvalues_matches_sym_eig_on_symmetric(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(4, 4))
    m = a + a.T
    general = np.sort(linalg.real_eigenvalues(m).eigenvalues.real)
    symmetric = np.sort(linalg.sym_eig(m).eigenvalues.real)
    assert np.allclose(general, symmetric, atol=1e-8)


def test_pinv_identity_and_zero():
    assert np.allclose(linalg.pinv(np.eye(3)), np.eye(3))
    z = linalg.pinv(np.zeros((2, 4)))
    assert z.shape == (4, 2)
    assert np.all(z == 0.0)


def test_pinv_tall_full_rank_matches_normal_equations():
    rng = np.random.default_rng(0)
    phi = rng.normal(size=(7, 3))
    expected = np.linalg.inv(phi.T @ phi) @ phi.T
    assert np.abs(linalg.pinv(phi) - expected).max() <= 1e-9


@pytest.mark.parametrize("shape", [(3, 3), (5, 2), (2, 5), (4, 4)])
def test_pinv_moore_penrose_identities(shape):
    rng = np.random.default_rng(sum(shape))
    m = rng.normal(size=shape)
    p = linalg.pinv(m)
    assert np.abs(m @ p @ m - m).max() <= 1e-9
    assert np.abs(p @ m @ p - p).max() <= 1e-9
    assert np.abs((m @ p) - (m @ p).T).max() <= 1e-9
    assert np.abs((p @ m) - (p @ m).T).max() <= 1e-9


def test_pinv_involution_on_full_rank():
    rng = np.random.default_rng(1)
    m = rng.normal(size=(5, 3))
    assert np.abs(linalg.pinv(linalg.pinv(m)) - m).max() <= 1e-8


def test_sqrt_psd_examples():
    assert np.allclose(linalg.sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    assert np.allclose(linalg.sqrt_psd(np.eye(4)), np.eye(4))


def test_sqrt_psd_from_known_eigendecomposition():
    rng = np.random.default_rng(9)
    q = random_orthogonal(rng, 4)
    vals = np.array([0.5, 1.0, 2.0, 7.0])
    m = q @ np.diag(vals) @ q.T
    expected = q @ np.diag(np.sqrt(vals)) @ q.T
    s = linalg.sqrt_psd(m)
    assert np.abs(s - expected).max() <= 1e-9
    assert np.linalg.norm(s @ s - m) <= 1e-8 * (1.0 + np.linalg.norm(m))


def test_sqrt_psd_rejects_indefinite():
    with pytest.raises(ValueError):
        linalg.sqrt_psd(np.diag([1.0, -0.5]))


def test_sqrt_psd_clamps_tiny_negative():
    m = np.diag([1.0, -1e-14])
    s = linalg.sqrt_psd(m)
    assert s[1, 1] == 0.0


def test_has_negative_real_eigenvalue():
    assert linalg.has_negative_real_eigenvalue(-np.eye(2))
    assert not linalg.has_negative_real_eigenvalue(np.eye(2))
    # rotation has eigenvalues +-i: on the imaginary axis, not the negative reals
    assert not linalg.has_negative_real_eigenvalue(np.array([[0.0, -1.0], [1.0, 0.0]]))


def test_numeric_rank():
    rng = np.random.default_rng(5)
    tall = rng.normal(size=(6, 3))
    assert linalg.numeric_rank(tall) == 3
    assert linalg.numeric_rank(np.zeros((3, 3))) == 0
    deficient = np.outer([1.0, 2.0, 3.0], [1.0, -1.0])
    assert linalg.numeric_rank(deficient) == 1


@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10_000))
@settings(max_examples=60)
def test_sym_eig_bounds_property(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim))
    m = a @ a.T  # PSD
    spec = linalg.sym_eig(m)
    vals = spec.eigenvalues.real
    assert np.all(np.diff(vals) >= -1e-12)
    assert vals[0] >= -1e-10 * max(1.0, vals[-1])
