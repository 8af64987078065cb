import math

import numpy as np
import pytest

from gaussbound import oracle as o
from gaussbound.exceptions import QuadratureError, TruncationError
from gaussbound.fidelity import fidelity, fidelity_pure
from gaussbound.states import MixedGaussianState, PureGaussianState, energy, purity

THERMAL = MixedGaussianState(2 / math.sqrt(3), 0.0, 0.5)
NBAR = (math.sqrt(3) - 1) / 2


def test_gauss_hermite_rule():
    g = o.gauss_hermite(20, center=1.5, scale=0.7)
    # exact for polynomial times the matched Gaussian
    for k in range(0, 39, 2):
        t = (g.nodes - 1.5) / 0.7
        val = np.sum(g.weights * t**k * np.exp(-t * t))
        exact = 0.7 * math.gamma((k + 1) / 2)
        assert val == pytest.approx(exact, rel=1e-12)
    with pytest.raises(ValueError):
        o.gauss_hermite(1)


def test_overlap_examples():
    s = PureGaussianState(0.8, 0.3, -1.0, 2.0)
    assert o.overlap_pure(s, s) == pytest.approx(1.0, abs=1e-13)
    f = o.overlap_pure(PureGaussianState(1.0), PureGaussianState(1.0, 0.0, math.sqrt(2)))
    assert f == pytest.approx(math.exp(-1), abs=1e-12)
    assert o.overlap_pure(PureGaussianState(1.0), PureGaussianState(2.0)) == pytest.approx(math.sqrt(8 / 9), abs=1e-12)
    f, err = o.overlap_pure(PureGaussianState(1.0), PureGaussianState(2.0), full_output=True)
    assert 0.0 <= err < 1e-12


def test_overlap_self_norm_gate():
    # a rule far too coarse for a very narrow state fails the self-overlap check
    grid = o.gauss_hermite(4, 0.0, 1.0)
    with pytest.raises(QuadratureError):
        o.overlap_pure(PureGaussianState(50.0, 0.0, 0.3), PureGaussianState(50.0), grid)


def test_overlap_matches_closed_form_on_box():
    rng = np.random.default_rng(5)
    for _ in range(300):
        s1, s2 = (PureGaussianState(rng.uniform(0.5, 2), rng.uniform(-1, 1), rng.uniform(-1.5, 1.5),
                                    rng.uniform(-1.5, 1.5)) for _ in range(2))
        assert abs(o.overlap_pure(s1, s2) - fidelity_pure(s1, s2)) <= 1e-8


def test_hermite_functions_orthonormal():
    g = o.gauss_hermite(120)
    phi = o.hermite_functions(50, g.nodes)
    gram = (phi * g.weights) @ phi.T
    assert np.max(np.abs(gram - np.eye(50))) < 1e-12


def test_ground_state_matrix():
    r = o.fock_matrix(PureGaussianState(1.0), 10)
    expected = np.zeros((10, 10))
    expected[0, 0] = 1.0
    assert np.max(np.abs(r.entries - expected)) < 1e-12
    assert o.energy_fock(r) == pytest.approx(0.5, abs=1e-12)
    assert o.purity_fock(r) == pytest.approx(1.0, abs=1e-12)


def test_thermal_matrix():
    r = o.fock_matrix(THERMAL, 40)
    diag = np.real(np.diag(r.entries))
    q = NBAR / (1 + NBAR)
    assert diag[0] == pytest.approx(math.sqrt(3) - 1, abs=1e-9)
    assert np.allclose(diag[1:20] / diag[:19], q, atol=1e-9)
    assert np.max(np.abs(r.entries - np.diag(diag))) < 1e-12
    assert o.energy_fock(r) == pytest.approx(math.sqrt(3) / 2, abs=1e-9)
    assert o.purity_fock(r) == pytest.approx(1 / math.sqrt(3), abs=1e-9)


def test_squeezed_rank_one():
    s = PureGaussianState(2.0)
    r = o.fock_matrix(s, 40)
    w = r.eigenvalues()
    assert w[-1] == pytest.approx(1.0, abs=1e-8) and abs(w[-2]) < 1e-8
    assert r.entries[0, 0].real == pytest.approx(o.overlap_pure(PureGaussianState(1.0), s), abs=1e-12)
    assert o.energy_fock(r) == pytest.approx(0.625, abs=1e-8)


def test_fidelity_fock_examples():
    g = o.fock_matrix(PureGaussianState(1.0), 40)
    th = o.fock_matrix(THERMAL, 40)
    assert o.fidelity_fock(g, th) == pytest.approx(math.sqrt(3) - 1, abs=1e-6)
    mixed = o.fock_matrix(MixedGaussianState(1.0, 0.0, 0.5), 40)
    assert o.fidelity_fock(g, mixed) == pytest.approx(0.730297, abs=1e-6)
    assert o.fidelity_fock(th, th) == pytest.approx(1.0, abs=1e-8)


def test_fidelity_fock_symmetric_and_rank_one():
    rng = np.random.default_rng(1)
    for _ in range(10):
        m1, m2 = (MixedGaussianState(rng.uniform(0.5, 2), rng.uniform(-1, 1), rng.uniform(0, 0.6)) for _ in range(2))
        r1, r2 = o.fock_matrix(m1, 40, tail_tol=1e-4), o.fock_matrix(m2, 40, tail_tol=1e-4)
        assert abs(o.fidelity_fock(r1, r2) - o.fidelity_fock(r2, r1)) <= 1e-9
        p1, p2 = (PureGaussianState(rng.uniform(0.5, 2), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1))
                  for _ in range(2))
        q1, q2 = o.fock_matrix(p1, 40, tail_tol=1e-4), o.fock_matrix(p2, 40, tail_tol=1e-4)
        u1 = np.linalg.eigh(q1.entries)[1][:, -1]
        u2 = np.linalg.eigh(q2.entries)[1][:, -1]
        direct = abs(np.vdot(u1, u2)) ** 2 * q1.trace * q2.trace
        assert o.fidelity_fock(q1, q2) == pytest.approx(direct, abs=1e-8)


def test_fock_errors():
    with pytest.raises(TruncationError) as exc:
        o.fock_matrix(PureGaussianState(0.2), 4)
    assert exc.value.tail > 1e-8
    with pytest.raises(ValueError):
        o.fock_matrix(PureGaussianState(1.0), 1)
    with pytest.raises(ValueError):
        o.fidelity_fock(o.fock_matrix(PureGaussianState(1.0), 5), o.fock_matrix(PureGaussianState(1.0), 6))
    with pytest.raises(ValueError):
        o.FockDensityMatrix(np.array([[1.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        o.FockDensityMatrix(np.diag([1.5, -0.5]))


def test_matrix_read_only():
    r = o.fock_matrix(PureGaussianState(1.0), 4)
    with pytest.raises(ValueError):
        r.entries[0, 0] = 0.0


def test_rank_one_invariant_on_box():
    rng = np.random.default_rng(2)
    for _ in range(20):
        s = PureGaussianState(rng.uniform(0.5, 2), rng.uniform(-1, 1), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        r = o.fock_matrix(s, 40, tail_tol=1e-4)
        w = r.eigenvalues()
        assert w[-1] >= 1 - r.tail - 1e-12 and w[-2] <= max(r.tail, 1e-12)


def test_agreement_report():
    rep = o.check_against_closed_forms(10, 40, seed=3)
    assert rep.passed()
    assert rep.max_purity_error < 1e-6
    same = o.check_against_closed_forms(1, 40, seed=0, identical=True)
    assert same.max_fidelity_error <= 1e-10


def test_truncation_convergence_moderate_interior():
    # interior of the moderate box: N = 30 and N = 60 agree to 1e-8
    rng = np.random.default_rng(4)
    for _ in range(10):
        s1, s2 = (MixedGaussianState(rng.uniform(0.8, 1.5), rng.uniform(-0.5, 0.5), rng.uniform(0, 0.4))
                  for _ in range(2))
        f30 = o.fidelity_fock(o.fock_matrix(s1, 30, tail_tol=1e-6), o.fock_matrix(s2, 30, tail_tol=1e-6))
        f60 = o.fidelity_fock(o.fock_matrix(s1, 60), o.fock_matrix(s2, 60))
        assert abs(f30 - f60) <= 1e-8
        assert abs(f60 - fidelity(s1, s2)) <= 1e-8


def test_truncation_convergence_fails_at_box_corner():
    # the corner of the moderate box needs far more than 30 Fock states
    s1, s2 = MixedGaussianState(0.5, 1.0, 0.6), MixedGaussianState(0.5, -1.0, 0.6)
    f30 = o.fidelity_fock(o.fock_matrix(s1, 30, tail_tol=1.0), o.fock_matrix(s2, 30, tail_tol=1.0))
    f60 = o.fidelity_fock(o.fock_matrix(s1, 60, tail_tol=1.0), o.fock_matrix(s2, 60, tail_tol=1.0))
    assert abs(f30 - f60) > 1e-8
    assert abs(f60 - fidelity(s1, s2)) < abs(f30 - fidelity(s1, s2))


def test_energy_purity_agree_in_interior():
    rng = np.random.default_rng(6)
    for _ in range(20):
        s = MixedGaussianState(rng.uniform(0.8, 1.5), rng.uniform(-0.5, 0.5), rng.uniform(0, 0.4))
        r = o.fock_matrix(s, 40)
        assert o.energy_fock(r) == pytest.approx(energy(s), abs=1e-6)
        assert o.purity_fock(r) == pytest.approx(purity(s), abs=1e-6)
