import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from chmetric.errors import GridMismatch
from chmetric.metric import (DistanceBreakdown, distance, distance_series, eulerian_l2, growth_rate, l2_gap,
                             scaled_peakon, series_csv)
from chmetric.peakon import PeakonParams
from chmetric.transform import ScaledSnapshot, midpoint_grid, zero_scaled


def test_l2_gap_trivial_cases():
    grid = midpoint_grid(10)
    assert l2_gap(np.ones(10), np.ones(10), grid) == 0.0
    assert l2_gap(np.ones(10), np.zeros(10), grid) == pytest.approx(1.0)
    with pytest.raises(GridMismatch):
        l2_gap(np.ones(10), np.ones(9), grid)
    with pytest.raises(GridMismatch):
        l2_gap(np.ones(10), np.ones(10), np.linspace(0, 1, 10))


def test_l2_gap_converges_under_refinement():
    gaps = []
    for n in (4096, 8192):
        eta = midpoint_grid(n)
        a = oracle.scaled(2.0, 2.0, 1.0, eta)[0]
        b = oracle.scaled(2.2, 2.0, 1.0, eta)[0]
        gaps.append(l2_gap(a, b, eta))
    assert gaps[0] == pytest.approx(gaps[1], rel=1e-2)


def test_breakdown_rejects_negative_parts():
    with pytest.raises(ValueError):
        DistanceBreakdown(-1.0, 0.0, 0.0, 0.0, -1.0)


def test_distance_to_zero_solution():
    n = 4096
    a = scaled_peakon(PeakonParams(2.0, 2.0), 3.0, n)
    b = distance(a, zero_scaled(n))
    assert b.dA == pytest.approx(2 * np.sqrt(2), rel=1e-15)
    assert b.dY == pytest.approx(np.sqrt(np.mean(a.tY ** 2)), rel=1e-12)
    assert b.dU == pytest.approx(np.sqrt(np.mean(a.tU ** 2)), rel=1e-12)
    assert b.dP == pytest.approx(np.sqrt(np.mean(a.tPsqrt ** 2)), rel=1e-12)
    assert b.total == pytest.approx(b.dY + b.dU + b.dP + b.dA, rel=1e-15)


def test_grid_mismatch():
    with pytest.raises(GridMismatch):
        distance(zero_scaled(8), zero_scaled(16))


@st.composite
def snapshots(draw, n=48):
    rng = np.random.default_rng(draw(st.integers(0, 2 ** 32 - 1)))
    return ScaledSnapshot(t=0.0, eta=midpoint_grid(n), tY=np.sort(rng.normal(size=n) * 3),
                          tU=rng.normal(size=n), tPsqrt=np.abs(rng.normal(size=n)),
                          A=float(rng.uniform(0, 4)) * (rng.random() > 0.1))


@given(snapshots(), snapshots(), snapshots())
def test_pseudometric_axioms(a, b, c):
    ab, ba = distance(a, b), distance(b, a)
    assert ab == ba
    assert distance(a, a).total == 0.0
    assert ab.total >= 0
    assert distance(a, c).total <= ab.total + distance(b, c).total + 1e-12 * (1 + ab.total)


def test_series_of_identical_pair_vanishes():
    p = PeakonParams(2.0, 2.0)
    series = distance_series(p, p, np.linspace(0, 4, 9), 256)
    assert all(b.total == 0.0 for _, b in series)
    assert growth_rate(series) == 0.0


def test_series_is_continuous_through_collision():
    p1, p2 = PeakonParams(2.0, 2.0), PeakonParams(2.2, 2.0)
    times = np.linspace(1.9, 2.1, 41)
    d = np.array([b.total for _, b in distance_series(p1, p2, times, 1024)])
    assert np.max(np.abs(np.diff(d))) < 0.01 * d.max()


def test_growth_rate_certifies_bound():
    p1, p2 = PeakonParams(2.0, 2.0), PeakonParams(2.0, 2.1)
    times = np.linspace(0, 4, 17)
    series = distance_series(p1, p2, times, 1024)
    K = growth_rate(series)
    d = np.array([b.total for _, b in series])
    assert np.isfinite(K)
    assert np.all(d <= d[0] * np.exp(K * times) * (1 + 1e-12))


def test_series_csv_layout():
    p = PeakonParams(2.0, 2.0)
    text = series_csv(distance_series(p, PeakonParams(2.2, 2.0), [0.0, 1.0], 256))
    lines = text.strip().splitlines()
    assert lines[0] == "t,dY,dU,dP,dA,total"
    assert len(lines) == 3 and len(lines[1].split(",")) == 6


def test_eulerian_gap_collapses_at_collision():
    p = PeakonParams(2.0, 2.0)
    assert eulerian_l2(p, 2.0) == 0.0
    assert eulerian_l2(p, 2.001) < eulerian_l2(p, 2.1) < eulerian_l2(p, 3.0)
