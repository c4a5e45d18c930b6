import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from chmetric.fields import EulerianSnapshot, eval_F, eval_G, eval_p, eval_px, evaluator
from chmetric.peakon import PeakonParams, peakon_grid, sample_snapshot


def test_snapshot_validation():
    x = np.linspace(-1, 1, 5)
    with pytest.raises(ValueError):
        EulerianSnapshot(t=0, x=x[::-1], u=x, dens=np.ones(5), atoms=np.zeros((0, 2)), C=1.0)
    with pytest.raises(ValueError):
        EulerianSnapshot(t=0, x=x, u=x, dens=-np.ones(5), atoms=np.zeros((0, 2)), C=1.0)
    with pytest.raises(ValueError):
        EulerianSnapshot(t=0, x=x, u=x, dens=np.ones(5), atoms=np.array([[0.0, -1.0]]), C=1.0)


def test_json_round_trip():
    s = sample_snapshot(PeakonParams(2.0, 2.0), 2.0, 64)
    back = EulerianSnapshot.from_json(s.to_json())
    np.testing.assert_array_equal(back.x, s.x)
    np.testing.assert_array_equal(back.atoms, s.atoms)
    assert back.C == s.C and back.t == s.t


@pytest.mark.parametrize("E,offset", [(1.0, -0.5), (2.0, 0.05), (4.0, 2.0)])
def test_fields_match_closed_forms(E, offset):
    t0 = 2.0
    t = t0 + offset
    s = sample_snapshot(PeakonParams(E, t0), t, 4096)
    x = np.linspace(-6, 6, 301)
    C = E ** 2
    for got, want in [(eval_p, oracle.p), (eval_px, oracle.px), (eval_F, oracle.F), (eval_G, oracle.G)]:
        err = np.max(np.abs(got(s, x) - want(E, t0, t, x)))
        assert err <= 2e-4 * C, (got.__name__, err)


def test_second_order_convergence_of_G():
    E, t0, t = 2.0, 2.0, 1.5
    x = np.linspace(-5, 5, 201)
    errs = [np.max(np.abs(eval_G(sample_snapshot(PeakonParams(E, t0), t, n), x) - oracle.G(E, t0, t, x)))
            for n in (1024, 2048)]
    assert errs[0] / errs[1] > 3.0


def test_breaking_time_has_jump_of_full_energy():
    E = 2.0
    s = sample_snapshot(PeakonParams(E, 2.0), 2.0, 4096)
    ev = evaluator(s)
    below, at, above = ev.G(np.array([-1e-12, 0.0, 1e-12]))
    assert at == pytest.approx(E ** 2 / 2, abs=1e-4)
    assert above - below == pytest.approx(E ** 2, abs=1e-4)
    assert np.max(np.abs(s.u)) == 0.0


def test_mass_identity_on_fine_grid():
    E = 2.0
    s = sample_snapshot(PeakonParams(E, 2.0), 1.0, 2 ** 18, half_width=25.0)
    assert abs(s.total_mass() - s.C) <= 1e-8 * s.C


@given(st.floats(0.5, 4.0), st.floats(-2.5, 2.5))
def test_G_is_nondecreasing_with_limits(E, offset):
    s = sample_snapshot(PeakonParams(E, 2.0), 2.0 + offset, 512)
    x = np.linspace(-30, 30, 2001)
    g = eval_G(s, x)
    assert np.all(np.diff(g) >= -1e-12 * E ** 2)
    assert g[0] >= 0 and g[-1] <= 2 * E ** 2 * (1 + 1e-12)
    assert eval_G(s, np.array([-1e3]))[0] == pytest.approx(0.0, abs=1e-12)
    assert eval_G(s, np.array([1e3]))[0] == pytest.approx(2 * E ** 2, rel=1e-12)


@given(st.floats(0.5, 4.0), st.floats(-2.5, 2.5))
def test_pressure_dominates_half_kinetic(E, offset):
    s = sample_snapshot(PeakonParams(E, 2.0), 2.0 + offset, 512)
    ev = evaluator(s)
    x = s.x
    assert np.all(2 * ev.p(x) - ev.u(x) ** 2 >= -1e-3 * E ** 2)


def test_peak_grid_contains_peaks():
    params = PeakonParams(2.0, 2.0)
    x = peakon_grid(params, 1.0, 1000)
    gamma = np.log(np.cosh(1.0))
    assert np.any(x == -gamma) and np.any(x == gamma)
    assert np.all(np.diff(x) > 0)
