"""Environment-purified picture of the measurement.

The apparatus is purified by an environment of the same dimension, the
interaction acts on apparatus and system only, and the resulting pure state on
environment (x) apparatus (x) system is used to test the three-party
entanglement bounds. Three-party entanglement is measured against fully
separable states, an assumption since the bound itself leaves the set open.

Numerical entanglement values are one-sided: optimizers give upper estimates
and entropy differences give lower bounds. Every quantity in a check is
therefore carried as an :class:`Interval` ``[lo, hi]`` known to contain the
true value together with the best estimate. A check fails only when the
intervals prove a violation, and is flagged certified only when they prove the
inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .correlations import (
    OptimizerConfig,
    OptResult,
    entanglement_lower_bound,
    relative_entropy_of_entanglement_ub,
)
from .entropy import entropy_of_array
from .linalg import DensityMatrix, PureState, partial_trace_array, purify
from .measurement import MeasurementModel

PARTIES = ("E", "A", "S")
CHECK_TOL = 1e-6

PASSED, FAILED, INCONCLUSIVE = "passed", "failed", "inconclusive"


@dataclass(frozen=True)
class Interval:
    """Enclosure ``[lo, hi]`` of a true value plus the best numerical estimate.

    For optimizer-based entanglement values the estimate is the upper end.
    """

    lo: float
    hi: float
    est: float | None = None

    def __post_init__(self):
        if self.est is None:
            object.__setattr__(self, "est", self.hi)

    @classmethod
    def exact(cls, x: float) -> "Interval":
        return cls(x, x, x)

    def __add__(self, other):
        if not isinstance(other, Interval):
            other = Interval.exact(other)
        return Interval(self.lo + other.lo, self.hi + other.hi, self.est + other.est)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Interval):
            other = Interval.exact(other)
        return Interval(self.lo - other.hi, self.hi - other.lo, self.est - other.est)

    @staticmethod
    def maximum(*items: "Interval") -> "Interval":
        return Interval(
            max(i.lo for i in items), max(i.hi for i in items), max(i.est for i in items)
        )


@dataclass(frozen=True)
class Check:
    """``lhs <= rhs`` judged on estimates and on enclosing intervals.

    ``status`` is ``failed`` when the intervals prove a violation, ``passed``
    when the estimates satisfy the inequality, ``inconclusive`` otherwise.
    ``certified`` is set when the intervals prove the inequality holds.
    """

    name: str
    lhs: Interval
    rhs: Interval
    status: str
    certified: bool

    @property
    def satisfied(self) -> bool:
        return self.status == PASSED


def compare(name: str, lhs: Interval, rhs: Interval, tol: float = CHECK_TOL) -> Check:
    if lhs.lo > rhs.hi + tol:
        status = FAILED
    elif lhs.est <= rhs.est + tol:
        status = PASSED
    else:
        status = INCONCLUSIVE
    return Check(name, lhs, rhs, status, certified=lhs.hi <= rhs.lo + tol)


@dataclass(frozen=True, eq=False)
class TripartiteOutcome:
    final_state: PureState
    entropies: dict[str, float]
    e_ea: OptResult  # E_{E:A'}
    e_es: OptResult  # E_{E:S'}
    e_as: OptResult  # E_{A':S'}
    e_tri: OptResult  # E_{E:A':S'}
    pair_lower: dict[str, float]
    initial_env_entropy: float
    checks: tuple[Check, ...]

    def pair_interval(self, pair: str) -> Interval:
        ub = {"EA": self.e_ea, "ES": self.e_es, "AS": self.e_as}[pair].value
        return Interval(min(self.pair_lower[pair], ub), ub)

    def tri_interval(self) -> Interval:
        # for a pure state, relative entropy to fully separable states is at
        # least the entropy across any single cut
        lo = max(self.entropies[p] for p in PARTIES)
        return Interval(min(lo, self.e_tri.value), self.e_tri.value)


def purified_measurement(m: MeasurementModel, cfg: OptimizerConfig | None = None) -> TripartiteOutcome:
    cfg = cfg or OptimizerConfig()
    n, d = m.n, m.d_s
    if n * n * d > 64:
        raise ValueError(f"environment-apparatus-system dimension {n * n * d} exceeds 64")
    rho = m.apparatus_state()
    psi_ea = purify(rho).amplitudes
    full_u = np.kron(np.eye(n), m.unitary())
    psi = full_u @ np.kron(psi_ea, m.amplitudes)
    psi /= np.linalg.norm(psi)
    dims = (n, n, d)
    final = PureState(psi, dims)

    dm = np.outer(psi, psi.conj())
    reduced = {}
    for k in (1, 2):
        for keep in combinations(range(3), k):
            label = "".join(PARTIES[i] for i in keep)
            reduced[label] = partial_trace_array(dm, dims, keep)
    entropies = {label: entropy_of_array(r) for label, r in reduced.items()}

    pair_dims = {"EA": (n, n), "ES": (n, d), "AS": (n, d)}
    pairs = {p: DensityMatrix(reduced[p], pair_dims[p]) for p in pair_dims}
    opt = {p: relative_entropy_of_entanglement_ub(pairs[p], cfg) for p in pairs}
    pair_lower = {p: entanglement_lower_bound(pairs[p]) for p in pairs}
    e_tri = relative_entropy_of_entanglement_ub(DensityMatrix(dm, dims), cfg)

    s_rho = entropy_of_array(rho.matrix)
    comp = max(
        abs(entropies["E"] - entropies["AS"]),
        abs(entropies["A"] - entropies["ES"]),
        abs(entropies["S"] - entropies["EA"]),
    )
    checks = (
        compare("purity_complementarity", Interval.exact(comp), Interval.exact(0.0), 1e-8),
        compare(
            "environment_passivity",
            Interval.exact(abs(entropies["E"] - s_rho)),
            Interval.exact(0.0),
            1e-9,
        ),
    )
    return TripartiteOutcome(
        final_state=final,
        entropies=entropies,
        e_ea=opt["EA"],
        e_es=opt["ES"],
        e_as=opt["AS"],
        e_tri=e_tri,
        pair_lower=pair_lower,
        initial_env_entropy=s_rho,
        checks=checks,
    )


def check_tripartite_bounds(t: TripartiteOutcome) -> list[Check]:
    """Both sides of the pure three-party bound.

    Upper side: ``E(EAS) <= min`` of the pairwise single-party entropy sums.
    Lower side: ``max_{XY|Z} E(XY) + S(Z) <= E(EAS)``.
    """
    s = t.entropies
    min_side = min(s["E"] + s["A"], s["E"] + s["S"], s["A"] + s["S"])
    tri = t.tri_interval()
    lower = Interval.maximum(
        t.pair_interval("EA") + s["S"],
        t.pair_interval("ES") + s["A"],
        t.pair_interval("AS") + s["E"],
    )
    return [
        compare("tripartite_upper", tri, Interval.exact(min_side)),
        compare("tripartite_lower", lower, tri),
    ]


def check_efficiency_bounds(t: TripartiteOutcome, info_gain: float, s_rho: float) -> list[Check]:
    """``S(rho) <= E(E:A':S') - E(A':S')`` and ``E(E:A') + I_m <= S(rho_A')``."""
    closer = compare(
        "apparatus_entropy_vs_entanglement_gap",
        Interval.exact(s_rho),
        t.tri_interval() - t.pair_interval("AS"),
    )
    limited = compare(
        "env_entanglement_plus_info_vs_final_entropy",
        t.pair_interval("EA") + info_gain,
        Interval.exact(t.entropies["A"]),
    )
    return [closer, limited]
