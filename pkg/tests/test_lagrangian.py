import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from chmetric.errors import ZeroSolution
from chmetric.fields import EulerianSnapshot
from chmetric.lagrangian import (LagrangianState, _pq_direct, compute_PQ, evolve, init_from_eulerian,
                                 label_of_eta, moment, relabel_to_new, rhs, xavier_residual)
from chmetric.peakon import PeakonParams, sample_snapshot


@pytest.fixture(scope="module")
def state():
    return init_from_eulerian(sample_snapshot(PeakonParams(2.0, 2.0), 1.0, 4096), 512)


def test_labels_split_position_and_energy(state):
    np.testing.assert_allclose(state.y + state.H, state.xi, atol=1e-12)
    assert np.all(np.diff(state.y) >= 0) and np.all(np.diff(state.H) >= 0)
    assert state.energy() == pytest.approx(4.0, rel=1e-4)


def test_initial_velocity_matches_closed_form(state):
    np.testing.assert_allclose(state.U, oracle.u(2.0, 2.0, 1.0, state.y), atol=1e-6)


def test_json_round_trip(state):
    back = LagrangianState.from_json(state.to_json())
    np.testing.assert_array_equal(back.y, state.y)
    assert back.C == state.C


def test_state_validation():
    with pytest.raises(ValueError):
        LagrangianState(t=0, xi=np.array([0.0, 1.0]), y=np.zeros(2), U=np.zeros(2), H=np.zeros(2), C=1.0)


def test_zero_data_rejected():
    x = np.linspace(-1, 1, 5)
    s = EulerianSnapshot(t=0, x=x, u=np.zeros(5), dens=np.zeros(5), atoms=np.zeros((0, 2)), C=0.0)
    with pytest.raises(ZeroSolution):
        init_from_eulerian(s, 16)


@st.composite
def states(draw):
    n = draw(st.integers(3, 120))
    rng = np.random.default_rng(draw(st.integers(0, 2 ** 32 - 1)))
    dy = rng.exponential(0.1, n - 1) * (rng.random(n - 1) > 0.2)
    dH = rng.exponential(0.1, n - 1)
    y = np.concatenate([[0.0], np.cumsum(dy)]) - 3.0
    H = np.concatenate([[0.0], np.cumsum(dH)])
    U = rng.normal(size=n)
    return y, U, H


@given(states())
def test_sweep_pressure_equals_dense_rule(data):
    y, U, H = data
    s = LagrangianState(t=0.0, xi=y + H + np.arange(y.size) * 1e-9, y=y, U=U, H=H, C=float(H[-1]))
    P, Q = compute_PQ(s)
    Pd, Qd = _pq_direct(y, U, H)
    scale = np.max(np.abs(Pd)) + 1e-300
    np.testing.assert_allclose(P, Pd, rtol=0, atol=1e-12 * scale)
    np.testing.assert_allclose(Q, Qd, rtol=0, atol=1e-12 * scale)
    # |Q| <= P holds cell by cell for this rule
    assert np.all(np.abs(Q) <= P * (1 + 1e-12) + 1e-300)


def test_evolution_through_breaking():
    params = PeakonParams(2.0, 2.0)
    start = init_from_eulerian(sample_snapshot(params, 1.0, 8192), 512)
    x0 = xavier_residual(start)
    seen = []
    end = evolve(start, 3.0, 2e-3, callback=lambda st: seen.append(xavier_residual(st)))
    assert end.t == 3.0
    assert np.max(np.abs(end.U - oracle.u(2.0, 2.0, 3.0, end.y))) < 1e-3
    assert abs(end.energy() - start.energy()) < 1e-10
    assert max(seen) <= 5 * x0


def test_evolution_is_reversible():
    params = PeakonParams(1.0, 2.0)
    start = init_from_eulerian(sample_snapshot(params, 1.5, 2048), 256)
    there = evolve(start, 2.5, 1e-2)
    back = evolve(there, 1.5, 1e-2)
    np.testing.assert_allclose(back.y, start.y, atol=1e-8)
    np.testing.assert_allclose(back.U, start.U, atol=1e-8)


def test_energy_flux_sums_to_zero(state):
    _, _, Ht = rhs(state)
    assert abs(Ht[-1] - Ht[0]) < 1e-6


def test_moment_is_finite_and_positive(state):
    assert 0 < moment(state) < np.inf


def test_relabelling_matches_closed_form():
    params = PeakonParams(2.0, 2.0)
    s = init_from_eulerian(sample_snapshot(params, 1.0, 8192), 2048)
    ts = relabel_to_new(s, 1024)
    inner = (ts.eta > 0.05) & (ts.eta < 7.95)
    assert np.max(np.abs(ts.Y - oracle.Y(2.0, 2.0, 1.0, ts.eta))[inner]) < 1e-3
    assert np.max(np.abs(ts.U - oracle.U(2.0, 2.0, 1.0, ts.eta))) < 5e-3
    labels = label_of_eta(s, ts.eta)
    assert np.all(np.diff(labels) > 0)
