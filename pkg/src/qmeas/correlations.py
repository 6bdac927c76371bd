"""Numerical optimizers for classical correlations and for an upper estimate
of the relative entropy of entanglement.

Both searches are seeded Nelder-Mead runs over unconstrained real parameter
vectors: a few deterministic warm starts followed by ``restarts`` random
starts, each drawing from its own stream ``default_rng([seed, index])``. The
best value wins, the earliest start breaking ties.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import prod
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .entropy import (
    INF,
    entropy_of_array,
    relative_entropy_arrays,
    spectrum_entropy,
)
from .linalg import DensityMatrix, eigvalsh, partial_trace_array, random_unitary

_PENALTY = 1e3
_SIMPLEX_STEP = 0.1


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 4
    max_iters: int = 2000
    tol: float = 1e-7
    seed: int = 0
    outcomes: int | None = None  # POVM outcome count; None means d**2

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.outcomes is not None and self.outcomes < 1:
            raise ValueError("outcomes must be positive")

    def stream(self, index: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, index])


@dataclass(frozen=True, eq=False)
class Povm:
    elements: tuple[np.ndarray, ...]

    def __init__(self, elements: Sequence[np.ndarray]):
        elements = tuple(np.asarray(e, dtype=complex) for e in elements)
        if not elements:
            raise ValueError("a POVM needs at least one element")
        d = elements[0].shape[0]
        for e in elements:
            if e.shape != (d, d):
                raise ValueError("POVM elements must share one square shape")
            if np.max(np.abs(e - e.conj().T)) > 1e-9 or eigvalsh(e)[0] < -1e-9:
                raise ValueError("POVM element is not positive semidefinite")
        dev = np.max(np.abs(sum(elements) - np.eye(d)))
        if dev > 1e-8:
            raise ValueError(f"POVM elements do not sum to identity (deviation {dev:.3g})")
        object.__setattr__(self, "elements", elements)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True, eq=False)
class SeparableAnsatz:
    """Convex mixture of product pure states, ``sum_k w_k |x_k><x_k| (x) ...``."""

    weights: np.ndarray
    factors: tuple[tuple[np.ndarray, ...], ...]

    def __init__(self, weights, factors):
        w = np.asarray(weights, dtype=float).ravel()
        factors = tuple(tuple(np.asarray(v, dtype=complex).ravel() for v in term) for term in factors)
        if len(w) != len(factors) or not factors:
            raise ValueError("one weight per product term is required")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("ansatz weights must be a probability vector")
        for term in factors:
            for v in term:
                if abs(np.vdot(v, v).real - 1.0) > 1e-9:
                    raise ValueError("ansatz factors must be normalized")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "factors", factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(v.size for v in self.factors[0])

    def state(self) -> np.ndarray:
        cols = np.array([_kron_all(term) for term in self.factors]).T
        return (cols * self.weights) @ cols.conj().T


@dataclass(frozen=True, eq=False)
class OptResult:
    value: float
    argument: Povm | SeparableAnsatz
    iterations: int
    converged: bool
    starts: int = field(default=1)


def _kron_all(vectors) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for v in vectors:
        out = np.kron(out, v)
    return out


def _kron_mats(mats) -> np.ndarray:
    out = np.asarray(mats[0], dtype=complex) if mats else np.ones((1, 1), dtype=complex)
    for m in mats[1:]:
        out = (out[:, None, :, None] * m[None, :, None, :]).reshape(
            out.shape[0] * m.shape[0], out.shape[1] * m.shape[1]
        )
    return out


def _nelder_mead(f: Callable[[np.ndarray], float], x0: np.ndarray, cfg: OptimizerConfig):
    n = x0.size
    simplex = np.vstack([x0, x0 + _SIMPLEX_STEP * np.eye(n)])
    res = minimize(
        f,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": cfg.max_iters,
            "maxfev": 10 * cfg.max_iters + 2 * n + 2,
            "fatol": cfg.tol,
            "xatol": np.inf,
            "adaptive": n > 10,
            "initial_simplex": simplex,
        },
    )
    return res.x, float(res.fun), int(res.nit), bool(res.success)


def _best_of(starts: Sequence[np.ndarray], f, cfg: OptimizerConfig):
    """Run Nelder-Mead from every start; lowest value wins, earliest on ties."""
    best = None
    for x0 in starts:
        x, fx, nit, ok = _nelder_mead(f, x0, cfg)
        if best is None or fx < best[1]:
            best = (x, fx, nit, ok)
    return best


# ---------------------------------------------------------------- classical correlations


def _complex_rows(x: np.ndarray, k: int, d: int) -> np.ndarray:
    half = k * d
    return (x[:half] + 1j * x[half:]).reshape(k, d)


def _rank_one_vectors(v: np.ndarray) -> np.ndarray | None:
    """Map K unnormalized vectors to w_i = M^{-1/2} v_i with M = sum v_i v_i^dag."""
    m = v.T @ v.conj()
    mu, u = np.linalg.eigh(m)
    if mu[0] <= 1e-12 * max(mu[-1], 1e-300):
        return None
    inv_sqrt = (u / np.sqrt(mu)) @ u.conj().T
    return v @ inv_sqrt.T


def _povm_from_vectors(w: np.ndarray) -> Povm:
    return Povm([np.outer(wi, wi.conj()) for wi in w])


def _basis_start(basis: np.ndarray, k: int) -> np.ndarray:
    d = basis.shape[0]
    v = np.zeros((k, d), dtype=complex)
    v[:d] = basis.T
    return np.concatenate([v.real.ravel(), v.imag.ravel()])


def classical_correlations(
    rho: DensityMatrix, measured: str = "A", cfg: OptimizerConfig | None = None
) -> OptResult:
    """Largest entropy reduction of the unmeasured side found over rank-one POVMs
    on the ``measured`` side ("A" or "B"). A lower estimate of the maximum."""
    cfg = cfg or OptimizerConfig()
    if rho.nparties != 2:
        raise ValueError(f"expected a bipartite state, got dims {rho.dims}")
    if measured not in ("A", "B"):
        raise ValueError("measured side must be 'A' or 'B'")
    ms = 0 if measured == "A" else 1
    us = 1 - ms
    d, du = rho.dims[ms], rho.dims[us]
    k = cfg.outcomes if cfg.outcomes is not None else d * d
    if k < d:
        raise ValueError(f"outcomes ({k}) must be at least the measured dimension ({d})")

    t = rho.matrix.reshape(rho.dims + rho.dims)
    if ms == 1:
        t = t.transpose(1, 0, 3, 2)  # measured index first
    rho_u = partial_trace_array(rho.matrix, rho.dims, [us])
    rho_m = partial_trace_array(rho.matrix, rho.dims, [ms])
    s_u = entropy_of_array(rho_u)

    def residuals(w):
        # R_i[u, u'] = <w_i| rho |w_i> contracted on the measured side
        return np.einsum("im,munc,in->iuc", w.conj(), t, w)

    def neg_value(x):
        w = _rank_one_vectors(_complex_rows(x, k, d))
        if w is None:
            return _PENALTY
        r = residuals(w)
        r = (r + r.conj().transpose(0, 2, 1)) / 2
        lam = np.clip(eigvalsh(r), 0.0, None)
        p = lam.sum(axis=1)
        nz = lam > 0
        h = -np.sum(lam[nz] * np.log2(lam[nz]))
        pz = p[p > 0]
        residual = h + np.sum(pz * np.log2(pz))
        return -(s_u - residual)

    # warm starts: eigenbasis of the measured marginal, the measured-side basis
    # that diagonalizes its conditional state given the unmeasured side's
    # dominant eigenvector, and the computational basis
    _, vm = np.linalg.eigh(rho_m)
    _, vu = np.linalg.eigh(rho_u)
    top = vu[:, -1]
    cond = np.einsum("u,munc,c->mn", top.conj(), t, top)
    _, vc = np.linalg.eigh((cond + cond.conj().T) / 2)
    starts = [_basis_start(b, k) for b in (vm, vc, np.eye(d))]
    for i in range(cfg.restarts):
        rng = cfg.stream(i)
        starts.append(rng.standard_normal(2 * k * d))

    x, fx, nit, ok = _best_of(starts, neg_value, cfg)
    w = _rank_one_vectors(_complex_rows(x, k, d))
    return OptResult(
        value=-fx, argument=_povm_from_vectors(w), iterations=nit, converged=ok, starts=len(starts)
    )


# ---------------------------------------------------------------- entanglement bounds


def entanglement_lower_bound(rho: DensityMatrix) -> float:
    """``max(0, max_X S(rho_X) - S(rho))`` over the two parties."""
    if rho.nparties != 2:
        raise ValueError(f"expected a bipartite state, got dims {rho.dims}")
    s = entropy_of_array(rho.matrix)
    sa = entropy_of_array(partial_trace_array(rho.matrix, rho.dims, [0]))
    sb = entropy_of_array(partial_trace_array(rho.matrix, rho.dims, [1]))
    return max(0.0, sa - s, sb - s)


@lru_cache(maxsize=None)
def _hermitian_index(d: int):
    iu = np.triu_indices(d, 1)
    return np.diag_indices(d), iu, (iu[1], iu[0]), len(iu[0])


def _hermitian_from(x: np.ndarray, d: int) -> np.ndarray:
    diag, upper, lower, n_off = _hermitian_index(d)
    h = np.empty((d, d), dtype=complex)
    h[diag] = x[:d]
    off = x[d : d + n_off] + 1j * x[d + n_off : d + 2 * n_off]
    h[upper] = off
    h[lower] = off.conj()
    return h


def _expi(h: np.ndarray) -> np.ndarray:
    lam, u = np.linalg.eigh(h)
    return (u * np.exp(1j * lam)) @ u.conj().T


class _Pincher:
    """Separable states obtained by dephasing every party except ``quantum`` in
    local orthonormal bases. Dephasing all but one party of a state always
    yields a fully separable state, and the relative entropy to it reduces to
    an entropy difference."""

    def __init__(self, rho: np.ndarray, dims: tuple[int, ...], quantum: int):
        self.dims, self.q = dims, quantum
        self.others = [p for p in range(len(dims)) if p != quantum]
        self.s_rho = entropy_of_array(rho)
        self.nlabels = prod(dims[p] for p in self.others)
        n, dq = len(dims), dims[quantum]
        order = self.others + [quantum]
        t = rho.reshape(dims + dims).transpose(order + [n + p for p in order])
        # rows and columns split as (classical label, quantum index)
        self.t = np.ascontiguousarray(t.reshape(self.nlabels, dq, self.nlabels, dq))

    def _frame(self, bases) -> np.ndarray:
        return _kron_mats([bases.get(p, np.eye(self.dims[p])) for p in self.others])

    def blocks(self, bases: dict[int, np.ndarray]) -> np.ndarray:
        w = self._frame(bases)
        y = np.tensordot(w.conj(), self.t, axes=(0, 0))
        return np.einsum("ldbe,bl->lde", y, w)

    def value(self, bases) -> float:
        # eigvalsh reads one triangle only, so no explicit symmetrization
        return spectrum_entropy(eigvalsh(self.blocks(bases)).ravel()) - self.s_rho

    def ansatz(self, bases) -> SeparableAnsatz:
        b = self.blocks(bases)
        weights, factors = [], []
        labels = np.ndindex(*[self.dims[p] for p in self.others])
        for blk, label in zip(b, labels):
            lam, vec = np.linalg.eigh((blk + blk.conj().T) / 2)
            for j in range(len(lam)):
                term = [None] * len(self.dims)
                for p, idx in zip(self.others, label):
                    term[p] = bases.get(p, np.eye(self.dims[p]))[:, idx]
                term[self.q] = vec[:, j]
                weights.append(max(lam[j], 0.0))
                factors.append(tuple(term))
        w = np.asarray(weights)
        return SeparableAnsatz(w / w.sum(), factors)


def _product_ansatz(marginals: Sequence[np.ndarray]) -> SeparableAnsatz:
    eigs = [np.linalg.eigh(m) for m in marginals]
    weights, factors = [], []
    for idx in np.ndindex(*[m.shape[0] for m in marginals]):
        weights.append(prod(max(eigs[p][0][i], 0.0) for p, i in enumerate(idx)))
        factors.append(tuple(eigs[p][1][:, i] for p, i in enumerate(idx)))
    w = np.asarray(weights)
    return SeparableAnsatz(w / w.sum(), factors)


def relative_entropy_of_entanglement_ub(
    rho: DensityMatrix, cfg: OptimizerConfig | None = None
) -> OptResult:
    """Smallest relative entropy found from ``rho`` to a fully separable state.

    Every candidate is an explicit separable state, so the value is an upper
    bound on the relative entropy of entanglement. Candidates, in order: the
    product of marginals; for each party, the state dephased on all other
    parties in their marginal eigenbases and in the computational basis, each
    refined over local bases; and ``restarts`` random local bases per party.
    """
    cfg = cfg or OptimizerConfig()
    if rho.nparties < 2:
        raise ValueError(f"expected a multipartite state, got dims {rho.dims}")
    m, dims = rho.matrix, rho.dims
    n = len(dims)
    marginals = [partial_trace_array(m, dims, [p]) for p in range(n)]

    best_val = relative_entropy_arrays(m, _kron_mats(marginals))
    best_arg = _product_ansatz(marginals)
    best_iters, best_conv, nstarts = 0, True, 1
    if best_val is INF:
        best_val = np.inf

    eig_bases = {p: np.linalg.eigh(marginals[p])[1] for p in range(n)}
    for q in range(n):
        pincher = _Pincher(m, dims, q)
        others = pincher.others
        sizes = [dims[p] ** 2 for p in others]

        def bases_at(x, base):
            out, off = {}, 0
            for p, sz in zip(others, sizes):
                out[p] = base[p] @ _expi(_hermitian_from(x[off : off + sz], dims[p]))
                off += sz
            return out

        frames = [eig_bases, {p: np.eye(dims[p], dtype=complex) for p in range(n)}]
        for i in range(cfg.restarts):
            rng = cfg.stream(q * cfg.restarts + i)
            frames.append({p: random_unitary(dims[p], rng) for p in range(n)})
        x0 = np.zeros(sum(sizes))
        for base in frames:
            x, fx, nit, ok = _nelder_mead(lambda y: pincher.value(bases_at(y, base)), x0, cfg)
            nstarts += 1
            if fx < best_val:
                best_val, best_iters, best_conv = fx, nit, ok
                best_arg = pincher.ansatz(bases_at(x, base))

    return OptResult(
        value=float(best_val), argument=best_arg, iterations=best_iters, converged=best_conv,
        starts=nstarts,
    )

