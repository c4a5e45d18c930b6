"""Lagrangian (particle) description and its relabelling.

Particles are labelled by ``xi`` with ``y + H = xi`` initially, where ``y``
is the particle position, ``U`` its velocity and ``H`` the cumulative
energy.  The system

    y_t = U,   U_t = -Q,   H_t = U**3 - 2 P U

is integrated with classical RK4.  P and Q are integrals of the kernel
exp(-|y(xi) - y(s)|) against the measure U**2 dy + dH, evaluated cell by
cell so that intervals where y is constant (concentrated energy) are
handled exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import StepRejected, TargetOutOfRange, ZeroSolution
from .fields import EulerianSnapshot, evaluator
from .kernels import split_sums
from .transform import TransformedSnapshot, invert_increasing, midpoint_grid


@dataclass(frozen=True)
class LagrangianState:
    t: float
    xi: np.ndarray
    y: np.ndarray
    U: np.ndarray
    H: np.ndarray
    C: float

    def __post_init__(self):
        n = np.shape(self.xi)
        if len(n) != 1 or n[0] < 3:
            raise ValueError("need at least three particles")
        for arr in (self.y, self.U, self.H):
            if np.shape(arr) != n:
                raise ValueError("fields must match the label grid")
        if np.any(np.diff(self.xi) <= 0):
            raise ValueError("labels must be strictly increasing")

    def energy(self) -> float:
        return float(self.H[-1] - self.H[0])

    def to_json(self) -> str:
        return json.dumps({"t": self.t, "xi": list(map(float, self.xi)),
                           "y": list(map(float, self.y)), "U": list(map(float, self.U)),
                           "H": list(map(float, self.H)), "C": self.C})

    @classmethod
    def from_json(cls, text: str) -> "LagrangianState":
        raw = json.loads(text)
        return cls(t=raw["t"], xi=np.array(raw["xi"]), y=np.array(raw["y"]),
                   U=np.array(raw["U"]), H=np.array(raw["H"]), C=raw["C"])


def init_from_eulerian(s: EulerianSnapshot, n: int) -> LagrangianState:
    """Particles at ``y(xi) = sup{x : x + F(x) < xi}`` on a uniform label grid."""
    if s.C <= 0 or s.total_mass() <= 0:
        raise ZeroSolution("no energy to transport")
    ev = evaluator(s)
    xs = s.x
    locs = s.atoms[:, 0] if s.atoms.size else np.zeros(0)
    xs = np.union1d(xs, locs)
    ks = xs + ev.F(xs)
    if locs.size:
        pos = np.searchsorted(xs, locs)
        ks = np.insert(ks, pos + 1, ks[pos] + s.atoms[:, 1])
        xs = np.insert(xs, pos + 1, locs)
    xi = np.linspace(ks[0], ks[-1], n)
    y = invert_increasing(lambda z: z + ev.F(z), lambda z: 1.0 + ev.dens(z), xs, ks, xi)
    y = np.maximum.accumulate(y)
    return LagrangianState(t=s.t, xi=xi, y=y, U=ev.u(y), H=xi - y, C=s.C)


def _cell_measure(y, U, H):
    dy = np.diff(y)
    return 0.5 * (U[1:] ** 2 + U[:-1] ** 2) * dy + np.diff(H)


def compute_PQ(state: LagrangianState):
    """P and Q at every particle with two O(N) sweeps."""
    return _pq(state.y, state.U, state.H)


def _pq(y, U, H):
    m = _cell_measure(y, U, H)
    ahead = np.append(0.5 * m, 0.0)
    behind = np.insert(0.5 * m, 0, 0.0)
    left, right = split_sums(y, ahead, behind)
    return 0.25 * (left + right), -0.25 * (left - right)


def _pq_direct(y, U, H):
    """Quadratic-cost reference with the same cell rule."""
    m = _cell_measure(y, U, H)
    k = np.exp(-np.abs(y[:, None] - y[None, :]))
    # cell j sits between nodes j and j+1; it is left of node k when j < k
    cell_left = np.arange(m.size)[None, :] < np.arange(y.size)[:, None]
    kc = 0.5 * (k[:, :-1] + k[:, 1:]) * m[None, :]
    P = 0.25 * kc.sum(axis=1)
    Q = -0.25 * np.where(cell_left, kc, -kc).sum(axis=1)
    return P, Q


def rhs(state: LagrangianState):
    P, Q = compute_PQ(state)
    U = state.U
    return U.copy(), -Q, U ** 3 - 2.0 * P * U


def _rhs_arrays(y, U, H):
    P, Q = _pq(y, U, H)
    return U, -Q, U ** 3 - 2.0 * P * U


def evolve(state: LagrangianState, t_end: float, dt: float, callback=None) -> LagrangianState:
    """RK4 from ``state.t`` to ``t_end`` (either direction) with step close to ``dt``."""
    span = t_end - state.t
    steps = max(int(np.ceil(abs(span) / dt - 1e-9)), 1) if span != 0 else 0
    h = span / steps if steps else 0.0
    y, U, H = state.y.copy(), state.U.copy(), state.H.copy()
    t = state.t
    for i in range(steps):
        k1 = _rhs_arrays(y, U, H)
        k2 = _rhs_arrays(*(a + 0.5 * h * b for a, b in zip((y, U, H), k1)))
        k3 = _rhs_arrays(*(a + 0.5 * h * b for a, b in zip((y, U, H), k2)))
        k4 = _rhs_arrays(*(a + h * b for a, b in zip((y, U, H), k3)))
        y, U, H = (a + h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4)
                   for a, b1, b2, b3, b4 in zip((y, U, H), k1, k2, k3, k4))
        t = state.t + (i + 1) * h
        if np.any(np.diff(y) + np.diff(H) <= 0):
            raise StepRejected(f"labelling lost monotonicity at t = {t}")
        if callback is not None:
            callback(LagrangianState(t=t, xi=state.xi, y=y, U=U, H=H, C=state.C))
    return LagrangianState(t=t_end if steps else state.t, xi=state.xi, y=y, U=U, H=H, C=state.C)


def xavier_residual(state: LagrangianState) -> float:
    """Largest cell defect of ``U**2 y_xi**2 + U_xi**2 = y_xi H_xi``."""
    d = np.diff(state.xi)
    dy, dU, dH = np.diff(state.y) / d, np.diff(state.U) / d, np.diff(state.H) / d
    Ubar = 0.5 * (state.U[1:] + state.U[:-1])
    return float(np.max(np.abs(Ubar ** 2 * dy ** 2 + dU ** 2 - dy * dH)))


def moment(state: LagrangianState) -> float:
    """Second spatial moment of the energy, integral of y**2 (P dy + dH)."""
    P, _ = compute_PQ(state)
    ybar = 0.5 * (state.y[1:] + state.y[:-1])
    Pbar = 0.5 * (P[1:] + P[:-1])
    return float(np.sum(ybar ** 2 * (Pbar * np.diff(state.y) + np.diff(state.H))))


def relabel_to_new(state: LagrangianState, n_eta: int) -> TransformedSnapshot:
    """Relabel by ``J = 2Q + 2H``, which runs from 0 to 2C along the particles."""
    P, Q = compute_PQ(state)
    J = 2.0 * Q + 2.0 * state.H
    if np.any(np.diff(J) <= 0):
        raise StepRejected("relabelling function is not strictly increasing")
    eta = midpoint_grid(n_eta, 2.0 * state.C)
    if eta[0] < J[0] or eta[-1] > J[-1]:
        raise TargetOutOfRange("label window too narrow for the requested eta grid")
    Y = PchipInterpolator(J, state.y)(eta)
    U = PchipInterpolator(J, state.U)(eta)
    Pe = np.maximum(PchipInterpolator(J, P)(eta), 0.0)
    return TransformedSnapshot(t=state.t, eta=eta, Y=np.maximum.accumulate(Y), U=U,
                               Psqrt=np.sqrt(Pe), C=state.C)


def label_of_eta(state: LagrangianState, eta):
    """The label ``l(eta) = sup{xi : J(xi) < eta}`` by monotone interpolation."""
    P, Q = compute_PQ(state)
    J = 2.0 * Q + 2.0 * state.H
    return PchipInterpolator(J, state.xi)(np.asarray(eta, dtype=float))
