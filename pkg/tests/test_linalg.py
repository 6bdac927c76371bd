import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmeas.linalg import (
    DensityMatrix,
    PureState,
    hermitian_eig,
    is_unitary,
    partial_trace,
    purify,
    random_density_matrix,
    tensor_product,
)
from qmeas.measurement import build_measurement_unitary

from .conftest import bell_state, proj


def kron_by_index(a, b):
    """Direct evaluation of entry (i*db + k, j*db + l) = a[i, j] * b[k, l]."""
    da, db = a.shape[0], b.shape[0]
    out = np.zeros((da * db, da * db), dtype=complex)
    for i in range(da):
        for j in range(da):
            for k in range(db):
                for l in range(db):
                    out[i * db + k, j * db + l] = a[i, j] * b[k, l]
    return out


def test_tensor_identity_and_projectors():
    assert np.array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(tensor_product(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))


def test_tensor_matches_index_formula(rng):
    sigma = random_density_matrix(2, rng).matrix
    out = tensor_product(np.eye(2) / 2, sigma)
    assert np.max(np.abs(out - kron_by_index(np.eye(2) / 2, sigma))) <= 1e-15
    assert np.allclose(out[:2, :2], sigma / 2) and np.allclose(out[2:, 2:], sigma / 2)
    assert np.all(out[:2, 2:] == 0)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    assert np.max(np.abs(tensor_product(a, b) - kron_by_index(a, b))) <= 1e-14


def test_partial_trace_bell_by_explicit_sum():
    rho = bell_state()
    m = rho.matrix.reshape(2, 2, 2, 2)
    expected = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for b in range(2):
                expected[i, j] += m[i, b, j, b]
    assert np.allclose(expected, np.eye(2) / 2)
    assert np.allclose(partial_trace(rho, [0]).matrix, expected, atol=1e-15)
    assert np.allclose(partial_trace(rho, [1]).matrix, np.eye(2) / 2, atol=1e-15)


@pytest.mark.parametrize("seed", range(100))
def test_partial_trace_of_product(seed):
    rng = np.random.default_rng(seed)
    da, db = rng.integers(1, 5, size=2)
    ra, rb = random_density_matrix(da, rng), random_density_matrix(db, rng)
    rho = DensityMatrix(tensor_product(ra.matrix, rb.matrix), (da, db))
    assert np.max(np.abs(partial_trace(rho, [0]).matrix - ra.matrix)) <= 1e-10
    assert np.max(np.abs(partial_trace(rho, [1]).matrix - rb.matrix)) <= 1e-10


def test_partial_trace_three_parties_keeps_order(rng):
    rs = [random_density_matrix(d, rng) for d in (2, 3, 2)]
    joint = DensityMatrix(tensor_product(tensor_product(rs[0].matrix, rs[1].matrix), rs[2].matrix), (2, 3, 2))
    out = partial_trace(joint, [0, 2])
    assert out.dims == (2, 2)
    assert np.allclose(out.matrix, tensor_product(rs[0].matrix, rs[2].matrix), atol=1e-12)


@pytest.mark.parametrize("keep", [[], [0, 1]])
def test_partial_trace_rejects_empty_or_full(keep):
    with pytest.raises(ValueError):
        partial_trace(bell_state(), keep)


def test_density_matrix_validation():
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(np.eye(2))
    with pytest.raises(ValueError, match="Hermitian"):
        DensityMatrix([[0.5, 0.1], [0.0, 0.5]])
    with pytest.raises(ValueError, match="negative"):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError, match="multiply"):
        DensityMatrix(np.eye(4) / 4, (2, 3))
    with pytest.raises(ValueError, match="norm"):
        PureState([1, 1])


def test_eig_diagonal():
    w, v = hermitian_eig(np.diag([0.25, 0.75]))
    assert np.allclose(w, [0.25, 0.75])
    assert np.allclose(np.abs(v), np.eye(2))


def test_eig_plus_projector_closed_form():
    w, v = hermitian_eig(proj(1, 1))
    assert np.allclose(w, [0, 1], atol=1e-15)
    top = v[:, 1]
    # proportional to (1, 1)/sqrt(2) up to a phase
    assert abs(abs(np.vdot(top, np.array([1, 1]) / np.sqrt(2))) - 1) < 1e-12


def test_eig_complex_two_by_two_closed_form():
    a, b, g = 0.3, -1.1, 0.4 - 0.7j
    h = np.array([[a, g], [np.conj(g), b]])
    mid, rad = (a + b) / 2, np.sqrt(((a - b) / 2) ** 2 + abs(g) ** 2)
    w, _ = hermitian_eig(h)
    assert np.allclose(w, [mid - rad, mid + rad], atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 4, 7, 16])
def test_eig_reconstruction(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = z + z.conj().T
    w, v = hermitian_eig(h)
    assert np.all(np.diff(w) >= 0)
    assert np.max(np.abs(h @ v - v * w)) <= 1e-9
    assert is_unitary(v, 1e-9)
    # independent LAPACK route
    assert np.allclose(w, np.linalg.eigvalsh(h), atol=1e-10)


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eig([[0, 1], [0, 0]])


def test_eig_degenerate():
    w, v = hermitian_eig(np.eye(3) / 3)
    assert np.allclose(w, 1 / 3) and is_unitary(v, 1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_density_eigenvalues_sum_to_one(dim, seed):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(dim, rng, rank=int(rng.integers(1, dim + 1)))
    w, v = hermitian_eig(rho.matrix)
    assert abs(w.sum() - 1) <= 1e-9
    assert is_unitary(v, 1e-9)


def test_purify_pure_is_product():
    psi = purify(DensityMatrix(np.diag([1.0, 0.0])))
    assert psi.dims == (2, 2)
    # rank one: a product of some environment vector with |0>
    amp = psi.amplitudes.reshape(2, 2)
    assert np.linalg.matrix_rank(amp, tol=1e-12) == 1
    assert np.allclose(np.abs(amp[:, 1]), 0) and abs(np.linalg.norm(amp[:, 0]) - 1) < 1e-12


def test_purify_maximally_mixed():
    psi = purify(DensityMatrix(np.eye(2) / 2))
    # sum_i sqrt(r_i) |e_i>|r_i> with r_i the computational basis
    expected = (np.kron([1, 0], [1, 0]) + np.kron([0, 1], [0, 1])) / np.sqrt(2)
    assert np.allclose(np.abs(psi.amplitudes), np.abs(expected), atol=1e-12)
    assert np.allclose(partial_trace(psi.density(), [1]).matrix, np.eye(2) / 2, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.booleans())
def test_purify_round_trip(dim, seed, deficient):
    rng = np.random.default_rng(seed)
    rank = max(1, dim - 1) if deficient else dim
    rho = random_density_matrix(dim, rng, rank=rank)
    psi = purify(rho)
    assert psi.dims == (dim, dim)
    back = partial_trace(psi.density(), [1])
    assert np.max(np.abs(back.matrix - rho.matrix)) <= 1e-9


def test_is_unitary():
    assert is_unitary(np.eye(4))
    assert not is_unitary(np.diag([1, 2]))
    assert is_unitary(build_measurement_unitary(2, 3), 1e-12)
    assert not is_unitary(np.ones((2, 3)))
