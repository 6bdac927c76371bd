"""Dense complex matrix helpers: states, tensor products, partial traces,
Hermitian eigendecomposition and purification.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` with row-major
semantics. Composite systems are ordered left to right, so for
``A ⊗ B`` the basis index of ``|i>|k>`` is ``i * dim(B) + k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-10

_JACOBI_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 100


def _as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def _check_dims(dims: Sequence[int], total: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    if prod(dims) != total:
        raise ValueError(f"subsystem dimensions {dims} do not multiply to {total}")
    return dims


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix plus subsystem dims.

    Validation happens on construction; a ``ValueError`` names the violated
    property.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, matrix, dims: Sequence[int] | None = None):
        m = _as_matrix(matrix)
        dims = _check_dims(dims if dims is not None else (m.shape[0],), m.shape[0])
        herm = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if herm > HERMITIAN_TOL:
            raise ValueError(f"density matrix is not Hermitian (deviation {herm:.3g})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {lo:.3g}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nparties(self) -> int:
        return len(self.dims)

    @classmethod
    def from_pure(cls, psi, dims: Sequence[int] | None = None) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        return cls(np.outer(psi, psi.conj()), dims)

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector with subsystem dims."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, amplitudes, dims: Sequence[int] | None = None):
        psi = np.asarray(amplitudes, dtype=complex).ravel().copy()
        dims = _check_dims(dims if dims is not None else (psi.size,), psi.size)
        norm2 = float(np.vdot(psi, psi).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state vector has squared norm {norm2!r}, expected 1")
        psi.setflags(write=False)
        object.__setattr__(self, "amplitudes", psi)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> DensityMatrix:
        return DensityMatrix.from_pure(self.amplitudes, self.dims)

    def __repr__(self) -> str:
        return f"PureState(dims={self.dims})"


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product.

    Entry ``(i*db + k, j*db + l)`` of the result is ``a[i, j] * b[k, l]``,
    where ``db`` is the dimension of ``b``.
    """
    return np.kron(_as_matrix(a), _as_matrix(b))


def partial_trace_array(m: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Partial trace of a raw matrix, keeping the subsystems in ``keep``.

    No validation of the state; used on hot paths and by :func:`partial_trace`.
    """
    dims = tuple(dims)
    n = len(dims)
    keep = sorted(set(keep))
    t = m.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for i in range(n):
        if i not in keep:
            col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    kd = prod(dims[i] for i in keep)
    return reduced.reshape(kd, kd)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the subsystems listed in ``keep`` (in original order)."""
    keep = sorted(set(keep))
    if not keep or len(keep) == rho.nparties:
        raise ValueError("keep must be a nonempty proper subset of the subsystems")
    if keep[0] < 0 or keep[-1] >= rho.nparties:
        raise ValueError(f"subsystem index out of range: {keep}")
    reduced = partial_trace_array(rho.matrix, rho.dims, keep)
    return DensityMatrix(reduced, [rho.dims[i] for i in keep])


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, v)`` with ``w`` ascending and ``v`` unitary such that
    ``h @ v == v @ diag(w)``. Sweeps stop once the off-diagonal Frobenius norm
    drops to 1e-12 (scaled by the matrix norm when it exceeds one).
    """
    a = _as_matrix(h).copy()
    n = a.shape[0]
    dev = np.max(np.abs(a - a.conj().T)) if n else 0.0
    if dev > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3g})")
    a = (a + a.conj().T) / 2
    v = np.eye(n, dtype=complex)
    tol = _JACOBI_TOL * max(1.0, float(np.linalg.norm(a)))

    for _ in range(_JACOBI_MAX_SWEEPS):
        if _off_norm(a) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                mag = abs(g)
                if mag < 1e-300:
                    continue
                phase = g / mag
                theta = 0.5 * np.arctan2(2 * mag, (a[p, p] - a[q, q]).real)
                c, s = np.cos(theta), np.sin(theta)
                # columns are the eigenvectors of the 2x2 block
                j = np.array([[c, -s * phase], [s * phase.conjugate(), c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ j
    else:
        raise RuntimeError("Jacobi eigensolver did not converge")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigvalsh(m: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues via LAPACK; accepts stacks of matrices."""
    return np.linalg.eigvalsh(m)


def purify(rho: DensityMatrix) -> PureState:
    """Purification ``sum_i sqrt(r_i) |e_i>|r_i>`` with ancilla first.

    The ancilla has the full dimension of ``rho`` even when ``rho`` is rank
    deficient; ``|e_i>`` is the ancilla's computational basis.
    """
    r, vecs = hermitian_eig(rho.matrix)
    r = np.clip(r, 0.0, None)
    n = rho.dim
    psi = np.zeros(n * n, dtype=complex)
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        psi += np.sqrt(r[i]) * np.kron(e, vecs[:, i])
    psi /= np.linalg.norm(psi)
    return PureState(psi, (n,) + rho.dims)


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density_matrix(
    dim: int, rng: np.random.Generator, rank: int | None = None, dims: Sequence[int] | None = None
) -> DensityMatrix:
    """Random mixed state from a ``dim x rank`` Ginibre matrix."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real, dims)


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)
