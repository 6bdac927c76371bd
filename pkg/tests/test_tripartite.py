import numpy as np
import pytest

from qmeas.correlations import OptimizerConfig
from qmeas.linalg import partial_trace
from qmeas.measurement import MeasurementModel, random_model, run_measurement
from qmeas.tripartite import (
    FAILED,
    INCONCLUSIVE,
    PASSED,
    Interval,
    check_efficiency_bounds,
    check_tripartite_bounds,
    compare,
    purified_measurement,
)

from .conftest import shannon_oracle

FAST = OptimizerConfig(restarts=1, max_iters=80)
CAREFUL = OptimizerConfig(restarts=2, max_iters=400)


def test_interval_arithmetic():
    a, b = Interval(0.0, 1.0, 0.5), Interval(2.0, 3.0)
    assert b.est == 3.0
    s = a + b
    assert (s.lo, s.hi, s.est) == (2.0, 4.0, 3.5)
    d = b - a
    assert (d.lo, d.hi, d.est) == (1.0, 3.0, 2.5)
    assert (a + 1.0).hi == 2.0
    m = Interval.maximum(a, b)
    assert (m.lo, m.hi, m.est) == (2.0, 3.0, 3.0)


@pytest.mark.parametrize(
    "lhs, rhs, status, certified",
    [
        (Interval.exact(1.0), Interval.exact(2.0), PASSED, True),
        (Interval.exact(3.0), Interval(0.0, 2.0), FAILED, False),
        (Interval(0.0, 2.0, 1.0), Interval(1.5, 3.0, 1.5), PASSED, False),
        (Interval(0.0, 2.0), Interval(1.0, 3.0, 1.0), INCONCLUSIVE, False),
    ],
)
def test_compare(lhs, rhs, status, certified):
    c = compare("x", lhs, rhs, 1e-9)
    assert c.status == status and c.certified == certified
    assert c.satisfied == (status == PASSED)


def test_pure_apparatus_leaves_environment_out():
    m = MeasurementModel(np.ones(2) / np.sqrt(2), [1.0, 0.0])
    t = purified_measurement(m, FAST)
    assert t.entropies["E"] == pytest.approx(0.0, abs=1e-12)
    assert t.e_as.value == pytest.approx(1.0, abs=1e-6)
    assert t.e_tri.value == pytest.approx(1.0, abs=1e-6)
    assert abs(t.e_ea.value) < 1e-8 and abs(t.e_es.value) < 1e-8


def test_maximally_mixed_qubit_apparatus_gives_ghz_class():
    m = MeasurementModel(np.ones(2) / np.sqrt(2), [0.5, 0.5])
    t = purified_measurement(m, CAREFUL)
    for p in ("E", "A", "S"):
        assert t.entropies[p] == pytest.approx(1.0, abs=1e-12)
    assert t.e_tri.value == pytest.approx(1.0, abs=1e-6)
    for r in (t.e_ea, t.e_es, t.e_as):
        assert abs(r.value) < 1e-6
    lower, upper = check_tripartite_bounds(t)[::-1]
    assert lower.status == PASSED and upper.status == PASSED


def test_reduces_to_final_state():
    rng = np.random.default_rng(4)
    for _ in range(10):
        m = random_model(rng, max_dim=3)
        t = purified_measurement(m, FAST)
        o = run_measurement(m)
        traced = partial_trace(t.final_state.density(), [1, 2])
        assert np.max(np.abs(traced.matrix - o.rho_f.matrix)) <= 1e-10
        assert t.final_state.dims == (m.n, m.n, m.d_s)


def test_complementarity_and_passivity():
    rng = np.random.default_rng(9)
    for _ in range(10):
        m = random_model(rng, max_dim=3)
        t = purified_measurement(m, FAST)
        s = t.entropies
        assert abs(s["E"] - s["AS"]) <= 1e-8
        assert abs(s["A"] - s["ES"]) <= 1e-8
        assert abs(s["S"] - s["EA"]) <= 1e-8
        assert abs(s["E"] - t.initial_env_entropy) <= 1e-9
        assert all(c.status == PASSED for c in t.checks)


def test_bounds_on_random_models():
    rng = np.random.default_rng(12)
    for _ in range(10):
        m = random_model(rng, max_dim=3)
        t = purified_measurement(m, FAST)
        o = run_measurement(m)
        checks = check_tripartite_bounds(t) + check_efficiency_bounds(t, o.info_gain, o.apparatus_entropy)
        assert not any(c.status == FAILED for c in checks)
        limited = checks[-1]
        assert limited.name == "env_entanglement_plus_info_vs_final_entropy"
        assert limited.certified


def test_interval_enclosures_are_ordered():
    m = MeasurementModel(np.array([0.6, 0.8]), [0.8, 0.2])
    t = purified_measurement(m, FAST)
    for pair in ("EA", "ES", "AS"):
        i = t.pair_interval(pair)
        assert i.lo <= i.hi
    tri = t.tri_interval()
    assert tri.lo <= tri.hi


def test_dimension_cap():
    with pytest.raises(ValueError):
        purified_measurement(MeasurementModel(np.ones(2) / np.sqrt(2), np.ones(6) / 6))


def test_product_tripartite_state_has_all_sides_zero():
    t = purified_measurement(MeasurementModel([1, 0], [1.0, 0.0]), FAST)
    assert all(abs(v) < 1e-12 for v in t.entropies.values())
    assert abs(t.e_tri.value) < 1e-8
    upper, lower = check_tripartite_bounds(t)
    assert upper.rhs.hi == pytest.approx(0.0, abs=1e-12)
    assert upper.status == PASSED and lower.status == PASSED


def test_efficiency_bounds_examples():
    m = MeasurementModel(np.ones(2) / np.sqrt(2), [0.5, 0.5])
    t = purified_measurement(m, CAREFUL)
    o = run_measurement(m)
    assert abs(o.info_gain) < 1e-12
    assert abs(t.e_ea.value) < 1e-3
    assert t.entropies["A"] == pytest.approx(1.0)
    closer, limited = check_efficiency_bounds(t, o.info_gain, o.apparatus_entropy)
    assert limited.status == PASSED and limited.certified
    assert closer.status == PASSED

    # a = (1, 0): only the apparatus entropy survives
    m = MeasurementModel([1, 0], [0.7, 0.3])
    t = purified_measurement(m, FAST)
    o = run_measurement(m)
    assert t.entropies["A"] == pytest.approx(o.apparatus_entropy, abs=1e-12)
    closer, limited = check_efficiency_bounds(t, o.info_gain, o.apparatus_entropy)
    assert limited.certified


def test_pure_apparatus_tripartite_reduces_to_bipartite():
    a = np.array([0.6, 0.8])
    t = purified_measurement(MeasurementModel(a, [1.0, 0.0]), CAREFUL)
    assert abs(t.e_tri.value - shannon_oracle([0.36, 0.64])) < 1e-2
