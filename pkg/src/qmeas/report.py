"""Full analysis of one measurement model and its JSON-ready report."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlations import OptimizerConfig, OptResult, classical_correlations
from .entropy import von_neumann_entropy
from .measurement import MeasurementModel, MeasurementOutcome, run_measurement
from .tripartite import (
    Check,
    Interval,
    TripartiteOutcome,
    check_efficiency_bounds,
    check_tripartite_bounds,
    compare,
    purified_measurement,
)


@dataclass(frozen=True, eq=False)
class Analysis:
    model: MeasurementModel
    outcome: MeasurementOutcome
    tripartite: TripartiteOutcome
    classical: OptResult
    checks: tuple[Check, ...]

    @property
    def violated(self) -> bool:
        return any(c.status == "failed" for c in self.checks)


def measurement_checks(o: MeasurementOutcome, e_re_ub: float) -> list[Check]:
    """Exact checks on a single run plus the entanglement sandwich."""
    lb = o.ent_lower_bound
    branch_dev = max(abs(von_neumann_entropy(b) - o.apparatus_entropy) for b in o.branch_states)
    return [
        compare(
            "uncertainty_relation",
            Interval.exact(o.info_gain + o.apparatus_entropy),
            Interval.exact(float(np.log2(o.apparatus_dim))),
            1e-8,
        ),
        compare("entanglement_lower_bound_is_info_gain", Interval.exact(abs(lb - o.info_gain)), Interval.exact(0.0), 1e-8),
        compare("entanglement_sandwich", Interval.exact(lb), Interval(lb, e_re_ub), 1e-6),
        compare("branch_entropy_identity", Interval.exact(branch_dev), Interval.exact(0.0), 1e-8),
    ]


def analyze(model: MeasurementModel, cfg: OptimizerConfig | None = None, classical: bool = True) -> Analysis:
    cfg = cfg or OptimizerConfig()
    outcome = run_measurement(model)
    tri = purified_measurement(model, cfg)
    # the apparatus is measured to learn about the system
    cc = classical_correlations(outcome.rho_f, "A", cfg) if classical else None
    checks = (
        measurement_checks(outcome, tri.e_as.value)
        + list(tri.checks)
        + check_tripartite_bounds(tri)
        + check_efficiency_bounds(tri, outcome.info_gain, outcome.apparatus_entropy)
    )
    return Analysis(model, outcome, tri, cc, tuple(checks))


def _num(x: float):
    x = float(x)
    return x if np.isfinite(x) else "inf"


def _interval(i: Interval) -> dict:
    return {"lo": _num(i.lo), "hi": _num(i.hi), "est": _num(i.est)}


def _opt(r: OptResult) -> dict:
    return {"value": _num(r.value), "iterations": r.iterations, "converged": r.converged}


def complex_list(m: np.ndarray):
    """Nested lists with complex entries as ``[re, im]`` pairs."""
    m = np.asarray(m)
    if m.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in m]
    return [complex_list(row) for row in m]


def to_report(an: Analysis, full: bool = False) -> dict:
    o, t = an.outcome, an.tripartite
    report = {
        "d_s": an.model.d_s,
        "N": an.model.n,
        "I_m": _num(o.info_gain),
        "S_rho": _num(o.apparatus_entropy),
        "disturbance": _num(o.disturbance),
        "uncertainty_margin": _num(o.uncertainty_margin),
        "ent_lower_bound": _num(o.ent_lower_bound),
        "e_re_ub": _num(t.e_as.value),
        "c_classical": None if an.classical is None else _num(an.classical.value),
        "branch_probs": [_num(p) for p in o.branch_probs],
        "branch_entropies": [_num(von_neumann_entropy(b)) for b in o.branch_states],
        "tripartite": {
            "entropies": {k: _num(v) for k, v in t.entropies.items()},
            "initial_env_entropy": _num(t.initial_env_entropy),
            "e_EA": _opt(t.e_ea),
            "e_ES": _opt(t.e_es),
            "e_AS": _opt(t.e_as),
            "e_EAS": _opt(t.e_tri),
            "pair_lower_bounds": {k: _num(v) for k, v in t.pair_lower.items()},
        },
        "checks": [
            {
                "name": c.name,
                "lhs": _interval(c.lhs),
                "rhs": _interval(c.rhs),
                "status": c.status,
                "certified": c.certified,
            }
            for c in an.checks
        ],
    }
    if full:
        report["rho_f"] = complex_list(o.rho_f.matrix)
        report["rho_f_dephased"] = complex_list(o.rho_f_dephased.matrix)
        report["branch_states"] = [complex_list(b.matrix) for b in o.branch_states]
        report["final_state"] = complex_list(t.final_state.amplitudes)
    return report
