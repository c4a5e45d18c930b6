"""Distance between conservative solutions through their rescaled fields.

Two solutions are compared on the unit interval: the L2 gaps of the
rescaled position, velocity and root-pressure fields are added to the gap
between the energy scales A.  A solution of zero energy has A = 0 and all
fields zero, so its distance to anything is a plain L2 norm plus A.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, astuple
from typing import Callable, Sequence, Union

import numpy as np

from .errors import GridMismatch
from .fields import EulerianSnapshot
from .lagrangian import LagrangianState, evolve, init_from_eulerian, relabel_to_new
from .peakon import PeakonParams, sample_snapshot, scaled_exact, u_exact
from .transform import ScaledSnapshot, build_transformed, midpoint_grid, rescale


@dataclass(frozen=True)
class DistanceBreakdown:
    dY: float
    dU: float
    dP: float
    dA: float
    total: float

    def __post_init__(self):
        parts = (self.dY, self.dU, self.dP, self.dA)
        if any(not (v >= 0) for v in parts):
            raise ValueError("distance components must be nonnegative")


def l2_gap(f, g, grid) -> float:
    """Midpoint-rule L2 norm of ``f - g`` over (0, 1)."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if f.shape != g.shape or f.shape != grid.shape:
        raise GridMismatch("fields and grid differ in length")
    if not np.allclose(grid, midpoint_grid(grid.size), rtol=0, atol=1e-13):
        raise GridMismatch("expected the midpoint grid of (0, 1)")
    return float(np.sqrt(np.sum((f - g) ** 2) / grid.size))


def distance(a: ScaledSnapshot, b: ScaledSnapshot) -> DistanceBreakdown:
    """Both snapshots must share the midpoint grid; nothing is resampled."""
    if a.eta.shape != b.eta.shape or not np.allclose(a.eta, b.eta, rtol=0, atol=1e-13):
        raise GridMismatch("snapshots are sampled on different grids")
    dY = l2_gap(a.tY, b.tY, a.eta)
    dU = l2_gap(a.tU, b.tU, a.eta)
    dP = l2_gap(a.tPsqrt, b.tPsqrt, a.eta)
    dA = abs(float(a.A) - float(b.A))
    return DistanceBreakdown(dY, dU, dP, dA, dY + dU + dP + dA)


def scaled_peakon(params: PeakonParams, t: float, n: int) -> ScaledSnapshot:
    eta = midpoint_grid(n)
    tY, tU, tPs, A = scaled_exact(params, t, eta)
    return ScaledSnapshot(t=t, eta=eta, tY=tY, tU=tU, tPsqrt=tPs, A=A)


def scaled_from_eulerian(s: EulerianSnapshot, n: int) -> ScaledSnapshot:
    """Relabel and rescale sampled Eulerian data onto the n-point midpoint grid."""
    ss = rescale(build_transformed(s, n))
    return ScaledSnapshot(t=ss.t, eta=midpoint_grid(n), tY=ss.tY, tU=ss.tU,
                          tPsqrt=ss.tPsqrt, A=ss.A)


class LagrangianTrack:
    """Scaled snapshots of a particle evolution, advanced on demand.

    Requests must come in nondecreasing time order; each call continues the
    RK4 run from the previous request.
    """

    def __init__(self, state: LagrangianState, dt: float):
        self.state = state
        self.dt = dt

    @classmethod
    def from_peakon(cls, params: PeakonParams, t_start: float, particles: int = 1024,
                    dt: float = 1e-3, grid_points: int = 8192) -> "LagrangianTrack":
        s = sample_snapshot(params, t_start, grid_points)
        return cls(init_from_eulerian(s, particles), dt)

    def __call__(self, t: float, n: int) -> ScaledSnapshot:
        if t < self.state.t - 1e-12:
            raise ValueError("tracks only move forward in time")
        if t > self.state.t:
            self.state = evolve(self.state, t, self.dt)
        ss = rescale(relabel_to_new(self.state, n))
        return ScaledSnapshot(t=ss.t, eta=midpoint_grid(n), tY=ss.tY, tU=ss.tU,
                              tPsqrt=ss.tPsqrt, A=ss.A)


Source = Union[PeakonParams, Callable[[float, int], ScaledSnapshot]]


def _sampler(src: Source):
    if isinstance(src, PeakonParams):
        return lambda t, n: scaled_peakon(src, t, n)
    return src


def distance_series(p1: Source, p2: Source, times: Sequence[float], n: int):
    """``[(t, DistanceBreakdown), ...]`` for two solutions.

    A source is either closed-form peakon parameters or any callable
    ``(t, n) -> ScaledSnapshot`` (for instance a Lagrangian run followed by
    the relabelling).
    """
    if n < 256:
        raise ValueError("use at least 256 cells")
    times = np.asarray(times, dtype=float)
    if not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    f1, f2 = _sampler(p1), _sampler(p2)
    return [(float(t), distance(f1(t, n), f2(t, n))) for t in times]


def growth_rate(series) -> float:
    """Smallest K with ``d(t) <= exp(K (t - t_first)) d(t_first)`` on the series."""
    t0, d0 = series[0][0], series[0][1].total
    rates = []
    for t, b in series[1:]:
        if t <= t0:
            continue
        if d0 == 0.0:
            rates.append(0.0 if b.total == 0.0 else np.inf)
        else:
            rates.append((np.log(b.total) - np.log(d0)) / (t - t0) if b.total > 0 else -np.inf)
    return float(max(rates)) if rates else 0.0


def eulerian_l2(params: PeakonParams, t: float, half_width: float = 40.0, n: int = 20001) -> float:
    """L2 norm of u over the line, from a fine trapezoid rule."""
    x = np.linspace(-half_width, half_width, n)
    return float(np.sqrt(np.trapezoid(u_exact(params, t, x) ** 2, x)))


def series_csv(series) -> str:
    out = io.StringIO()
    out.write("t,dY,dU,dP,dA,total\n")
    for t, b in series:
        out.write(",".join(f"{v:.12g}" for v in (t, *astuple(b))) + "\n")
    return out.getvalue()
