"""Nonlocal operators and the transport system in rescaled coordinates.

On the unit interval the kernel is exp(-|tY(eta) - tY(theta)| / A).  The
operators Q, S, R and the one-sided integrals D, E are computed with a
midpoint rule whose cell at the evaluation node is split in half, so

    left(g)[k]  = h sum_{j<k} K_kj g_j + h/2 g_k
    right(g)[k] = h sum_{j>k} K_kj g_j + h/2 g_k

and the sign kernel drops the node itself.  Each sum is one O(N) sweep;
:func:`compute_operators_direct` evaluates the same rule with dense
matrices for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import CflViolation, DegeneratePressure, GridMismatch, ZeroEnergy
from .kernels import left_sums, right_sums
from .transform import ScaledSnapshot, eta_derivative, midpoint_grid


@dataclass(frozen=True)
class OperatorFields:
    Qt: np.ndarray
    St: np.ndarray
    Rt: np.ndarray
    Dt: np.ndarray
    Et: np.ndarray

    def pressure(self, A: float) -> np.ndarray:
        """Pressure recovered from the one-sided integrals, (D + E) / (2A)."""
        return (self.Dt + self.Et) / (2.0 * A)


def _checked(ss: ScaledSnapshot):
    if ss.A <= 0:
        raise ZeroEnergy("operators need a positive scale")
    n = ss.eta.size
    if not np.allclose(ss.eta, midpoint_grid(n), rtol=0, atol=1e-13):
        raise GridMismatch("operators expect the midpoint grid of (0, 1)")
    return n, 1.0 / n


def derivatives(ss: ScaledSnapshot):
    """Eta-derivatives of tY, tU and tPsqrt."""
    return (eta_derivative(ss.eta, ss.tY), eta_derivative(ss.eta, ss.tU),
            eta_derivative(ss.eta, ss.tPsqrt))


def _first_integrands(ss, Yeta, Ueta):
    A, U, P = ss.A, ss.tU, ss.tP
    return 2.0 * (U ** 2 - P) * Yeta + A ** 5


def _halves(z, g, h):
    w = h * np.atleast_2d(g)
    half = 0.5 * w
    return left_sums(z, w) + half, right_sums(z, w) + half


def compute_operators(ss: ScaledSnapshot, Yeta=None, Ueta=None) -> OperatorFields:
    """Q, S, R, D, E at every node with O(N) sweeps."""
    n, h = _checked(ss)
    A, U, P = ss.A, ss.tU, ss.tP
    if Yeta is None or Ueta is None:
        Yeta, Ueta, _ = derivatives(ss)
    z = ss.tY / A
    gQ = _first_integrands(ss, Yeta, Ueta)
    (lq,), (rq,) = _halves(z, gQ, h)
    D, E = 0.5 * lq, 0.5 * rq
    Q = -0.25 * (lq - rq)
    gS = (2.0 / 3.0) * U ** 3 * Yeta - Ueta * Q - 2.0 * P * U * Yeta
    gR1 = (2.0 / 3.0) * A * U ** 3 * Yeta + A ** 6 * U
    gR2 = U * Q * Yeta
    left, right = _halves(z, np.vstack([gS, gR1, gR2]), h)
    S = left[0] + right[0]
    R = 0.25 * (left[1] - right[1]) - 0.5 * (left[2] + right[2])
    return OperatorFields(Qt=Q, St=S, Rt=R, Dt=D, Et=E)


def compute_operators_direct(ss: ScaledSnapshot, Yeta=None, Ueta=None) -> OperatorFields:
    """Same quadrature as :func:`compute_operators` with dense O(N^2) kernels."""
    n, h = _checked(ss)
    A, U, P = ss.A, ss.tU, ss.tP
    if Yeta is None or Ueta is None:
        Yeta, Ueta, _ = derivatives(ss)
    z = ss.tY / A
    K = np.exp(-np.abs(z[:, None] - z[None, :])) * h
    idx = np.arange(n)
    sign = np.sign(idx[:, None] - idx[None, :])
    lower = np.where(sign > 0, K, 0.0) + np.diag(0.5 * np.diag(K))
    upper = np.where(sign < 0, K, 0.0) + np.diag(0.5 * np.diag(K))
    gQ = _first_integrands(ss, Yeta, Ueta)
    D, E = 0.5 * lower @ gQ, 0.5 * upper @ gQ
    Q = -0.25 * (sign * K) @ gQ
    gS = (2.0 / 3.0) * U ** 3 * Yeta - Ueta * Q - 2.0 * P * U * Yeta
    gR1 = (2.0 / 3.0) * A * U ** 3 * Yeta + A ** 6 * U
    gR2 = U * Q * Yeta
    S = K @ gS
    R = 0.25 * (sign * K) @ gR1 - 0.5 * K @ gR2
    return OperatorFields(Qt=Q, St=S, Rt=R, Dt=D, Et=E)


def transport_velocity(ss: ScaledSnapshot, ops: OperatorFields) -> np.ndarray:
    A = ss.A
    return (2.0 / 3.0) * ss.tU ** 3 / A ** 5 + ops.St / A ** 6


def _sources(ss, ops, floor):
    A = ss.A
    Ps = ss.tPsqrt
    if np.any(ss.tP <= floor):
        raise DegeneratePressure("pressure at or below the floor")
    return (ss.tU, -ops.Qt / A ** 2,
            ops.Qt * ss.tU / (2.0 * A ** 2 * Ps) + ops.Rt / (2.0 * A ** 3 * Ps))


def system_rhs(ss: ScaledSnapshot, ops: OperatorFields | None = None, floor_factor: float = 1e-12):
    """Time derivatives of (tY, tU, tPsqrt)."""
    Yeta, Ueta, Peta = derivatives(ss)
    if ops is None:
        ops = compute_operators(ss, Yeta, Ueta)
    v = transport_velocity(ss, ops)
    sY, sU, sP = _sources(ss, ops, floor_factor * ss.A ** 4)
    return sY - v * Yeta, sU - v * Ueta, sP - v * Peta


def _logit(eta):
    return np.log(eta / (1.0 - eta))


def _resample(eta, fields, feet):
    s = _logit(eta)
    sf = _logit(np.clip(feet, 1e-300, 1.0 - 1e-16))
    return [PchipInterpolator(s, f, extrapolate=True)(sf) for f in fields]


def step_semi_lagrangian(ss: ScaledSnapshot, dt: float, cfl: float = 0.5,
                         floor_factor: float = 1e-12) -> ScaledSnapshot:
    """One Heun step, transporting along characteristics of the velocity.

    Values are carried from the feet of the characteristics (found with a
    midpoint rule) by monotone cubic interpolation in the logit variable,
    then the sources are averaged between the old and the predicted state.
    """
    n, h = _checked(ss)
    eta = ss.eta
    floor = floor_factor * ss.A ** 4
    ops = compute_operators(ss)
    v0 = transport_velocity(ss, ops)
    if dt * np.max(np.abs(v0)) > cfl * h:
        raise CflViolation(f"dt * max|v| = {dt * np.max(np.abs(v0)):.3g} exceeds {cfl} cells")
    src0 = _sources(ss, ops, floor)
    fields = (ss.tY, ss.tU, ss.tPsqrt)

    def feet(v):
        half = eta - 0.5 * dt * v
        vmid = PchipInterpolator(_logit(eta), v, extrapolate=True)(_logit(np.clip(half, 1e-300, 1 - 1e-16)))
        return eta - dt * vmid

    foot = feet(v0)
    carried = _resample(eta, fields, foot)
    carried_src = _resample(eta, src0, foot)
    pred = [c + dt * s for c, s in zip(carried, carried_src)]
    pred_ss = _snapshot(ss, dt, pred)
    ops1 = compute_operators(pred_ss)
    v1 = transport_velocity(pred_ss, ops1)
    foot = feet(0.5 * (v0 + v1))
    carried = _resample(eta, fields, foot)
    carried_src = _resample(eta, src0, foot)
    src1 = _sources(pred_ss, ops1, floor)
    new = [c + 0.5 * dt * (s0 + s1) for c, s0, s1 in zip(carried, carried_src, src1)]
    return _snapshot(ss, dt, new)


def _snapshot(ss, dt, fields):
    Y, U, Ps = fields
    return ScaledSnapshot(t=ss.t + dt, eta=ss.eta, tY=np.maximum.accumulate(Y), tU=U,
                          tPsqrt=np.maximum(Ps, 0.0), A=ss.A)


def residual_report(exact, t: float, n: int, dt: float) -> dict:
    """Relative L2 mismatch between centred time differences of an exact
    rescaled solution and the discrete right-hand side.

    ``exact(t, eta)`` must return ``(tY, tU, tPsqrt, A)``.
    """
    eta = midpoint_grid(n)
    Y, U, Ps, A = exact(t, eta)
    ss = ScaledSnapshot(t=t, eta=eta, tY=Y, tU=U, tPsqrt=Ps, A=A)
    fwd = exact(t + dt, eta)
    bwd = exact(t - dt, eta)
    fd = [(f - b) / (2.0 * dt) for f, b in zip(fwd[:3], bwd[:3])]
    rhs = system_rhs(ss)
    h = 1.0 / n
    norms = [np.sqrt(h * np.sum((a - b) ** 2)) for a, b in zip(fd, rhs)]
    scales = [np.sqrt(h * np.sum(a ** 2)) for a in fd]
    total = float(np.sqrt(sum(x ** 2 for x in norms)) / np.sqrt(sum(x ** 2 for x in scales)))
    return {"N": n, "dt": dt, "residY": float(norms[0] / scales[0]),
            "residU": float(norms[1] / scales[1]), "residP": float(norms[2] / scales[2]),
            "relative": total}


def _log_mean(a, b):
    """Logarithmic mean ``(a - b) / log(a / b)`` of positive numbers."""
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    r = np.where((a > 0) & (b > 0), b / np.where(a > 0, a, 1.0), 1.0)
    x = r - 1.0
    near = np.abs(x) < 1e-4
    safe = np.where(near, 2.0, r)
    ratio = np.where(near, 1.0 + x / 2 - x ** 2 / 12 + x ** 3 / 24, (safe - 1.0) / np.log(safe))
    return a * ratio


def _power(f0, f1, x0, x1):
    """Local exponent of ``f`` against ``log x`` from two positive samples."""
    if f0 > 0 and f1 > 0:
        return np.log(f1 / f0) / np.log(x1 / x0)
    return 0.0


def decay_integral(ss: ScaledSnapshot, rate: float, density, stretch: bool = False) -> np.ndarray:
    """One-sided integral ``int_0^eta exp(-rate (tY(eta) - tY(theta)) / A) g``.

    With ``stretch`` the measure is ``g dtY`` (integrand carrying the factor
    tY_eta), otherwise ``g d(eta)``.  On each cell the full integrand,
    kernel included, is taken log-linear in the integration variable, so a
    cell integral is a logarithmic mean.  This stays accurate at the ends of
    (0, 1), where the kernel and the fields change by O(1) factors from one
    cell to the next.  Cells where ``g`` is not positive fall back to the
    trapezoid rule.
    """
    n, h = _checked(ss)
    g = np.asarray(density, dtype=float)
    z = rate * ss.tY / ss.A
    step = np.diff(ss.tY) if stretch else np.full(n - 1, h)
    hi, lo = g[1:], g[:-1] * np.exp(-np.diff(z))
    positive = (hi > 0) & (lo > 0)
    cell = step * np.where(positive, _log_mean(hi, lo), 0.5 * (hi + lo))
    # piece between the end of the interval and the first node
    if stretch:
        kappa = (np.log(g[1] / g[0]) / (ss.tY[1] - ss.tY[0])
                 if g[0] > 0 and g[1] > 0 and ss.tY[1] > ss.tY[0] else 0.0)
        head = g[0] / max(rate / ss.A + kappa, 1e-300)
    else:
        m = _power(g[0] * np.exp(z[0] - z[1]), g[1], ss.eta[0], ss.eta[1])
        head = ss.eta[0] * g[0] / (1.0 + m) if m > -0.5 else ss.eta[0] * g[0]
    behind = np.empty(n)
    behind[0] = head
    behind[1:] = cell
    return left_sums(z, behind) + behind
