"""Measurement of a system by an initially mixed apparatus.

The joint space is ordered apparatus (x) system: basis index ``k * d_s + l``
for apparatus state ``|r_k>`` and system state ``|l>``. The interaction is the
system-controlled cyclic shift of the apparatus eigenbasis,
``|r_k>|l> -> |r_{(k+l) mod N}>|l>``, which makes the pointer states of
different system states orthogonal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .correlations import entanglement_lower_bound
from .entropy import Ensemble, holevo, shannon_entropy, von_neumann_entropy
from .linalg import (
    DensityMatrix,
    is_unitary,
    partial_trace_array,
    random_pure_state,
    random_unitary,
)


class Interaction(str, enum.Enum):
    SHIFT = "shift"


@dataclass(frozen=True, eq=False)
class MeasurementModel:
    """System amplitudes, apparatus spectrum and apparatus eigenbasis.

    ``basis`` holds the apparatus eigenvectors ``|r_k>`` as columns; ``None``
    means the computational basis.
    """

    amplitudes: np.ndarray
    spectrum: np.ndarray
    basis: np.ndarray | None = None
    interaction: Interaction = Interaction.SHIFT

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).ravel()
        r = np.asarray(self.spectrum, dtype=float).ravel()
        if a.size < 1:
            raise ValueError("amplitudes: need at least one system amplitude")
        if abs(np.vdot(a, a).real - 1.0) > 1e-10:
            raise ValueError("amplitudes: vector is not normalized")
        if np.any(r < 0) or abs(r.sum() - 1.0) > 1e-10:
            raise ValueError("spectrum: not a probability vector")
        if r.size < a.size:
            raise ValueError(
                f"spectrum: apparatus dimension {r.size} is smaller than system dimension {a.size}"
            )
        basis = None
        if self.basis is not None:
            basis = np.asarray(self.basis, dtype=complex)
            if basis.shape != (r.size, r.size) or not is_unitary(basis, 1e-10):
                raise ValueError("basis: must be a unitary matrix of the apparatus dimension")
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "spectrum", r)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "interaction", Interaction(self.interaction))

    @property
    def d_s(self) -> int:
        return self.amplitudes.size

    @property
    def n(self) -> int:
        return self.spectrum.size

    @property
    def basis_matrix(self) -> np.ndarray:
        return np.eye(self.n, dtype=complex) if self.basis is None else self.basis

    def apparatus_state(self) -> DensityMatrix:
        v = self.basis_matrix
        return DensityMatrix((v * self.spectrum) @ v.conj().T)

    def unitary(self) -> np.ndarray:
        """The interaction on apparatus (x) system, in the computational basis."""
        v = np.kron(self.basis_matrix, np.eye(self.d_s))
        return v @ build_measurement_unitary(self.d_s, self.n) @ v.conj().T


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    rho_f: DensityMatrix
    rho_f_dephased: DensityMatrix
    branch_states: tuple[DensityMatrix, ...]
    branch_probs: np.ndarray
    info_gain: float
    disturbance: float
    apparatus_entropy: float
    uncertainty_margin: float
    ent_lower_bound: float
    apparatus_dim: int


def build_measurement_unitary(d_s: int, n: int) -> np.ndarray:
    """Permutation ``|k>|l> -> |(k + l) mod n>|l>`` on apparatus (x) system."""
    if d_s < 1 or n < 1:
        raise ValueError("dimensions must be positive")
    if n < d_s:
        raise ValueError(f"apparatus dimension {n} < system dimension {d_s}: pointers cannot be orthogonal")
    u = np.zeros((n * d_s, n * d_s), dtype=complex)
    for k in range(n):
        for l in range(d_s):
            u[((k + l) % n) * d_s + l, k * d_s + l] = 1.0
    return u


def information_gain(branch_probs: Sequence[float], branch_states: Sequence[DensityMatrix]) -> float:
    """Holevo quantity of the pointer ensemble."""
    return holevo(Ensemble(branch_probs, branch_states))


def disturbance(a) -> float:
    """Relative entropy from the initial pure state to its dephased mixture,
    which equals the Shannon entropy of ``|a_i|^2``."""
    p = np.abs(np.asarray(a, dtype=complex).ravel()) ** 2
    return shannon_entropy(p)


def check_uncertainty(outcome: MeasurementOutcome, n: int) -> float:
    """``log2 N - I_m - S(rho)``; nonnegative up to roundoff."""
    return float(np.log2(n) - outcome.info_gain - outcome.apparatus_entropy)


def run_measurement(m: MeasurementModel) -> MeasurementOutcome:
    n, d = m.n, m.d_s
    rho = m.apparatus_state()
    psi = m.amplitudes
    u = m.unitary()
    joint = np.kron(rho.matrix, np.outer(psi, psi.conj()))
    rho_f = u @ joint @ u.conj().T
    rho_f = (rho_f + rho_f.conj().T) / 2

    blocks = rho_f.reshape(n, d, n, d)
    mask = np.eye(d)[None, :, None, :]
    dephased = (blocks * mask).reshape(n * d, n * d)

    probs = np.abs(psi) ** 2
    branches = []
    for i in range(d):
        if probs[i] > 1e-12:
            b = blocks[:, i, :, i] / probs[i]
        else:
            # zero-amplitude branch: apply the interaction to rho (x) |i><i| directly
            e = np.zeros((d, d))
            e[i, i] = 1.0
            b = partial_trace_array(u @ np.kron(rho.matrix, e) @ u.conj().T, (n, d), [0])
        branches.append(DensityMatrix((b + b.conj().T) / 2))
    probs = probs / probs.sum()

    rho_f = DensityMatrix(rho_f, (n, d))
    info = information_gain(probs, branches)
    s_rho = von_neumann_entropy(rho)
    outcome = MeasurementOutcome(
        rho_f=rho_f,
        rho_f_dephased=DensityMatrix(dephased, (n, d)),
        branch_states=tuple(branches),
        branch_probs=probs,
        info_gain=info,
        disturbance=disturbance(psi),
        apparatus_entropy=s_rho,
        uncertainty_margin=float(np.log2(n) - info - s_rho),
        ent_lower_bound=entanglement_lower_bound(rho_f),
        apparatus_dim=n,
    )
    return outcome


def random_model(
    rng: np.random.Generator, max_dim: int = 4, min_dim: int = 2, diagonal: bool = False
) -> MeasurementModel:
    """Random model with ``min_dim <= d_s <= N <= max_dim``.

    Spectra are flat-Dirichlet, with a quarter of them rank deficient.
    """
    d_s = int(rng.integers(min_dim, max_dim + 1))
    n = int(rng.integers(d_s, max_dim + 1))
    r = rng.dirichlet(np.ones(n))
    if n > 1 and rng.random() < 0.25:
        r[rng.integers(n)] = 0.0
        r /= r.sum()
    basis = None if diagonal else random_unitary(n, rng)
    return MeasurementModel(random_pure_state(d_s, rng), r, basis)
