"""Entropic functionals in bits: Shannon, von Neumann, relative entropy,
mutual information and the Holevo quantity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import DensityMatrix, eigvalsh, partial_trace_array

EIG_CLIP = 1e-10
SUPPORT_EIG_TOL = 1e-10
SUPPORT_WEIGHT_TOL = 1e-9


class _Infinite:
    """Result of a relative entropy whose first argument leaves the support
    of the second. Deliberately not a float: arithmetic on it raises."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinite, ())


INF = _Infinite()


def is_infinite(value) -> bool:
    return value is INF


@dataclass(frozen=True, eq=False)
class Ensemble:
    probs: np.ndarray
    states: tuple[DensityMatrix, ...]

    def __init__(self, probs: Sequence[float], states: Sequence[DensityMatrix]):
        p = np.asarray(probs, dtype=float).ravel()
        states = tuple(states)
        if len(p) != len(states) or not states:
            raise ValueError("ensemble needs one probability per state")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
            raise ValueError("ensemble probabilities must be a probability vector")
        if len({s.dim for s in states}) != 1:
            raise ValueError("ensemble states must share one dimension")
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "states", states)

    def average(self) -> np.ndarray:
        return sum(p * s.matrix for p, s in zip(self.probs, self.states))


def _h(p: np.ndarray) -> float:
    p = p[p > 0]
    # 0.0 - x avoids returning -0.0
    return 0.0 - float(np.sum(p * np.log2(p))) if p.size else 0.0


def shannon_entropy(p) -> float:
    """Shannon entropy with ``0 log 0 = 0``; tiny negatives are clipped."""
    p = np.asarray(p, dtype=float).ravel()
    if np.any(p < -1e-12):
        raise ValueError("probabilities must be nonnegative")
    if abs(p.sum() - 1.0) > 1e-6:
        raise ValueError(f"probabilities sum to {p.sum()!r}, expected 1")
    return max(_h(np.clip(p, 0.0, None)), 0.0)


def spectrum_entropy(w: np.ndarray) -> float:
    """Entropy of an eigenvalue spectrum after clipping PSD noise."""
    return max(_h(np.clip(w, 0.0, None)), 0.0)


def entropy_of_array(m: np.ndarray) -> float:
    """Von Neumann entropy of a raw (assumed valid) density matrix."""
    return spectrum_entropy(eigvalsh(m))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return entropy_of_array(rho.matrix)


def relative_entropy_arrays(rho: np.ndarray, sigma: np.ndarray):
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    mu, w = np.linalg.eigh(sigma)
    weights = np.einsum("ik,ij,jk->k", w.conj(), rho, w).real
    outside = mu <= SUPPORT_EIG_TOL
    if np.any(weights[outside] > SUPPORT_WEIGHT_TOL):
        return INF
    cross = float(np.sum(weights[~outside] * np.log2(mu[~outside])))
    return -entropy_of_array(rho) - cross


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix):
    """``S(rho || sigma)`` in bits, or :data:`INF` when supports mismatch."""
    return relative_entropy_arrays(rho.matrix, sigma.matrix)


def _bipartite(rho: DensityMatrix) -> None:
    if rho.nparties != 2:
        raise ValueError(f"expected a bipartite state, got dims {rho.dims}")


def mutual_information(rho: DensityMatrix) -> float:
    _bipartite(rho)
    m, dims = rho.matrix, rho.dims
    sa = entropy_of_array(partial_trace_array(m, dims, [0]))
    sb = entropy_of_array(partial_trace_array(m, dims, [1]))
    return sa + sb - entropy_of_array(m)


def holevo(e: Ensemble) -> float:
    """``S(sum p_i rho_i) - sum p_i S(rho_i)``."""
    avg = entropy_of_array(e.average())
    return avg - float(sum(p * von_neumann_entropy(s) for p, s in zip(e.probs, e.states)))
