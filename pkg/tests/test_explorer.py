import math

import numpy as np
import pytest

from gaussbound import bounds as bd
from gaussbound import explorer as ex
from gaussbound.exceptions import DomainError, UnsupportedWitness
from gaussbound.fidelity import compare_states, fidelity_mixed, fidelity_pure
from gaussbound.states import PureGaussianState

F89 = math.sqrt(8 / 9)


def test_config_validation():
    with pytest.raises(ValueError):
        ex.PairSampleConfig(samples=0)
    with pytest.raises(ValueError):
        ex.PairSampleConfig(family="thermal")
    with pytest.raises(ValueError):
        ex.PairSampleConfig(a_range=(1e-5, 1.0))
    with pytest.raises(ValueError):
        ex.PairSampleConfig(zeta_range=(0.0, 1.0))
    with pytest.raises(ValueError):
        ex.PairSampleConfig(c_range=(1.0, -1.0))
    assert ex.PairSampleConfig(samples=5000, block_size=1000).blocks == 5


def test_identical_pairs_report():
    cfg = ex.PairSampleConfig(samples=50, ratio_range=(1.0, 1.0), beta_range=(0.0, 0.0), shift_range=(0.0, 0.0))
    rep = ex.verify_conjecture(cfg)
    assert rep.violations == 0 and rep.worst_margin == -1.0 and rep.samples == 50


def test_worked_pair_margin():
    p = {k: np.array([v]) for k, v in dict(a1=0.1, b1=0.0, a2=0.05, b2=0.0, x1=0.0, p1=0.0, x2=0.0, p2=0.0).items()}
    ev = ex.evaluate_pairs("pure", p)
    margin = ev["y"][0] / ev["bound"][0] - 1
    assert margin >= 0.699205 / 0.707107 - 1 - 1e-6
    assert ev["fidelity"][0] == pytest.approx(F89, abs=1e-12)


@pytest.mark.parametrize("family", ex.FAMILIES)
def test_no_violations(family):
    rep = ex.verify_conjecture(ex.PairSampleConfig(family=family, samples=20000, seed=11))
    assert rep.violations == 0 and rep.pure_violations == 0
    assert rep.worst_margin <= 1e-9
    assert rep.conjecture_level == (family == "mixed-general")
    rec = rep.argmax
    assert rec["y"] <= rec["y_bound"] * (1 + 1e-9)


def test_report_reproducible_across_partitioning():
    cfg = ex.PairSampleConfig(family="mixed", samples=9000, seed=4, block_size=1000)
    a = ex.verify_conjecture(cfg, workers=1).to_json()
    b = ex.verify_conjecture(cfg, workers=3).to_json()
    assert a == b
    assert ex.verify_conjecture(ex.PairSampleConfig(family="mixed", samples=9000, seed=5, block_size=1000)).to_json() != a


def test_report_record_rebuilds_pair():
    rep = ex.verify_conjecture(ex.PairSampleConfig(samples=3000, seed=2))
    rec = rep.argmax
    s1 = PureGaussianState(rec["state_a"]["a"], rec["state_a"]["b"], rec["state_a"]["x"], rec["state_a"]["p"])
    s2 = PureGaussianState(rec["state_b"]["a"], rec["state_b"]["b"], rec["state_b"]["x"], rec["state_b"]["p"])
    assert fidelity_pure(s1, s2) == pytest.approx(rec["fidelity"], rel=1e-9)
    assert compare_states(s1, s2).y == pytest.approx(rec["y"], rel=1e-12)


def test_extremal_pure_pair_examples():
    s1, s2 = ex.extremal_pure_pair(F89, 1.0, +1)
    assert s2.a == pytest.approx(2.0, rel=1e-12)
    c = compare_states(s1, s2)
    assert (c.e1, c.e2) == pytest.approx((0.5, 0.625), abs=1e-12)
    assert c.y == pytest.approx(0.2236, abs=1e-4)
    s1, s2 = ex.extremal_pure_pair(F89, 0.1, -1)
    assert s2.a == pytest.approx(0.05, rel=1e-12)
    c = compare_states(s1, s2)
    assert (c.e1, c.e2) == pytest.approx((2.525, 5.0125), abs=1e-10)
    assert c.y == pytest.approx(0.6992, abs=1e-4)
    s1, s2 = ex.extremal_pure_pair(1 - 1e-15, 1.0)
    assert compare_states(s1, s2).y < 1e-6
    for bad in (0.0, 1.0):
        with pytest.raises(DomainError):
            ex.extremal_pure_pair(bad, 1.0)


def test_extremal_fidelity_independent_of_a():
    for f in (0.1, 0.5, 0.9, 0.999):
        vals = [fidelity_pure(*ex.extremal_pure_pair(f, a, s)) for a in np.geomspace(0.1, 10.0, 25) for s in (1, -1)]
        assert np.var(vals) <= 1e-10
        assert np.max(np.abs(np.array(vals) - f)) <= 1e-10


def test_extremal_mixed_pair():
    for z in (0.0, 0.3, 0.9):
        s1, s2 = ex.extremal_mixed_pair(0.9, 0.01, z)
        assert fidelity_mixed(s1, s2) == pytest.approx(0.9, abs=1e-10)


def test_optimal_displaced_pair_attains_fixed_shape_bound():
    for a, c in [(1.0, 0.0), (2.0, 1.0), (0.3, -2.0)]:
        for sign in (1, -1):
            s1, s2 = ex.optimal_displaced_pair(0.8, a, c, sign)
            assert fidelity_pure(s1, s2) == pytest.approx(0.8, abs=1e-12)
            assert compare_states(s1, s2).y == pytest.approx(bd.y_max(bd.fixed_shape(a, c), 0.8), rel=1e-10)


def test_approach_bound_pure_examples():
    res = ex.approach_bound(bd.PURE, F89, [1.0, 0.1, 1e-3])
    ratios = [r for _, r in res]
    assert ratios == pytest.approx([0.3162, 0.9888, 0.999997], abs=1e-4)
    assert ratios == sorted(ratios)


def test_approach_bound_mixed_increasing():
    res = ex.approach_bound(bd.mixed_equal_purity(0.5), 0.9, [1.0, 0.3, 0.1, 0.01, 1e-3])
    ratios = [r for _, r in res]
    assert all(b >= a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] > 0.999 and ratios[-1] <= 1 + 1e-12


def test_approach_bound_displaced_and_shapes():
    ratios = [r for _, r in ex.approach_bound(bd.DISPLACED, 0.9, [1.0, 0.1, 1e-2, 1e-3])]
    assert all(b >= a for a, b in zip(ratios, ratios[1:])) and ratios[-1] > 0.999
    for fam in (bd.COHERENT, bd.fixed_shape(2.0, 0.5)):
        ratios = [r for _, r in ex.approach_bound(fam, 0.9, [0.25, 0.5, 0.9, 1.0])]
        assert all(b >= a for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] == pytest.approx(1.0, abs=1e-12)


def test_approach_bound_errors():
    with pytest.raises(UnsupportedWitness):
        ex.approach_bound(bd.SUPERMIXED, 0.9, [1.0])
    with pytest.raises(UnsupportedWitness):
        ex.approach_bound(bd.pure_vs_mixed(0.01), 0.9, [1.0])
    with pytest.raises(ValueError):
        ex.approach_bound(bd.PURE, 0.9, [])


def test_local_search_from_identical_states():
    res = ex.local_maximize_y((PureGaussianState(1.0), PureGaussianState(1.0)), 0.9)
    assert res.y == 0.0 and not res.feasible


def test_local_search_near_witness():
    start = ex.extremal_pure_pair(0.9, 0.05, -1)
    y0 = compare_states(*start).y
    res = ex.local_maximize_y(start, 0.9)
    assert res.feasible and abs(res.fidelity - 0.9) <= 1e-10
    assert res.y >= y0
    assert res.y == pytest.approx(0.968644, abs=1e-4)


def test_local_search_random_start_stays_below_bound():
    rng = np.random.default_rng(8)
    for _ in range(3):
        start = tuple(PureGaussianState(rng.uniform(0.5, 2), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                        rng.uniform(-1, 1)) for _ in range(2))
        res = ex.local_maximize_y(start, 0.95, max_iter=150)
        assert res.feasible
        assert res.y <= bd.y_max(bd.PURE, 0.95) * (1 + 1e-9)
        assert res.y <= 0.659 + 1e-4
