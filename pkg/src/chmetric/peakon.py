"""Closed-form peakon-antipeakon solution and its relabelled images.

The pair has total energy ``E**2`` and collides at ``x = 0`` when ``t = t0``.
With ``s = E (t - t0) / 2`` the outer coefficient is ``(E/2) sinh s``, the
inner one ``E / sinh s`` and the peaks sit at ``+-log cosh s``.  All formulas
are written in terms of ``cosh s`` and ``sinh s`` so that they stay free of
cancellation as ``t`` approaches ``t0`` and reduce to the collision-time
limits exactly at ``t = t0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BetaUndefinedAtBreaking, EtaOutOfRange
from .fields import EulerianSnapshot


@dataclass(frozen=True)
class PeakonParams:
    E: float = 2.0
    t0: float = 2.0

    def __post_init__(self):
        if not (np.isfinite(self.E) and self.E > 0):
            raise ValueError("E must be positive")

    @property
    def C(self) -> float:
        return self.E ** 2

    @property
    def A(self) -> float:
        return float(np.sqrt(2.0) * self.E)

    def phase(self, t: float):
        s = 0.5 * self.E * (t - self.t0)
        return s, np.cosh(s), np.sinh(s)


def abc(params: PeakonParams, t: float):
    """Outer coefficient, inner coefficient and peak position."""
    s, ch, sh = params.phase(t)
    if sh == 0.0:
        raise BetaUndefinedAtBreaking(f"inner coefficient undefined at t = {t}")
    return 0.5 * params.E * sh, params.E / sh, float(np.log(ch))


def _regions(params, t, x):
    s, ch, sh = params.phase(t)
    gamma = np.log(ch)
    x = np.asarray(x, dtype=float)
    return s, ch, sh, gamma, x, x <= -gamma, x >= gamma


def u_exact(params: PeakonParams, t: float, x):
    s, ch, sh, gamma, x, left, right = _regions(params, t, x)
    E = params.E
    if sh == 0.0:
        return np.zeros_like(x)
    outer = 0.5 * E * sh
    inner = E / sh * np.sinh(np.clip(x, -gamma, gamma))
    return np.where(left, -outer * np.exp(np.minimum(x, 0)),
                    np.where(right, outer * np.exp(-np.maximum(x, 0)), inner))


def mu_exact_density(params: PeakonParams, t: float, x):
    """Absolutely continuous part of the energy measure."""
    s, ch, sh, gamma, x, left, right = _regions(params, t, x)
    E = params.E
    if sh == 0.0:
        return np.zeros_like(x)
    tail = 0.5 * E ** 2 * sh ** 2 * np.exp(-2.0 * np.abs(x))
    inner = E ** 2 / sh ** 2 * np.cosh(2.0 * np.clip(x, -gamma, gamma))
    return np.where(left | right, tail, inner)


def atoms_exact(params: PeakonParams, t: float) -> np.ndarray:
    """Point masses as rows ``(location, mass)``; one atom only at collision."""
    if params.phase(t)[2] == 0.0:
        return np.array([[0.0, params.C]])
    return np.zeros((0, 2))


def F_exact(params: PeakonParams, t: float, x):
    """Cumulative energy mu((-inf, x)), left-continuous."""
    s, ch, sh, gamma, x, left, right = _regions(params, t, x)
    E2 = params.C
    if sh == 0.0:
        return np.where(x <= 0, 0.0, E2)
    tail = 0.25 * E2 * sh ** 2 * np.exp(-2.0 * np.abs(x))
    inner = 0.5 * E2 + 0.5 * E2 / sh ** 2 * np.sinh(2.0 * np.clip(x, -gamma, gamma))
    return np.where(left, tail, np.where(right, E2 - tail, inner))


def p_exact(params: PeakonParams, t: float, x):
    s, ch, sh, gamma, x, left, right = _regions(params, t, x)
    E2 = params.C
    if sh == 0.0:
        return 0.25 * E2 * np.exp(-np.abs(x))
    ax = np.abs(x)
    tail = 0.25 * E2 * ch * np.exp(-ax) - 0.125 * E2 * sh ** 2 * np.exp(-2.0 * ax)
    xi = np.clip(x, -gamma, gamma)
    inner = 0.5 * E2 * np.cosh(xi) * (1.0 / (ch + 1.0) - 2.0 * np.sinh(0.5 * xi) ** 2 / sh ** 2)
    return np.where(left | right, tail, inner)


def px_exact(params: PeakonParams, t: float, x):
    """Derivative of the pressure, left-continuous at the collision."""
    s, ch, sh, gamma, x, left, right = _regions(params, t, x)
    E2 = params.C
    if sh == 0.0:
        return np.where(x <= 0, 0.25 * E2 * np.exp(np.minimum(x, 0)),
                        -0.25 * E2 * np.exp(-np.maximum(x, 0)))
    ax = np.abs(x)
    tail = 0.25 * E2 * ch * np.exp(-ax) - 0.25 * E2 * sh ** 2 * np.exp(-2.0 * ax)
    xi = np.clip(x, -gamma, gamma)
    inner = 0.5 * E2 / sh ** 2 * np.sinh(xi) * (ch - 2.0 * np.cosh(xi))
    return np.where(left, tail, np.where(right, -tail, inner))


def G_exact(params: PeakonParams, t: float, x):
    s, ch, sh, gamma, x, left, right = _regions(params, t, x)
    E2 = params.C
    if sh == 0.0:
        return np.where(x <= 0, 0.5 * E2 * np.exp(np.minimum(x, 0)),
                        2.0 * E2 - 0.5 * E2 * np.exp(-np.maximum(x, 0)))
    tail = 0.5 * E2 * ch * np.exp(-np.abs(x))
    inner = E2 + E2 * ch * np.sinh(np.clip(x, -gamma, gamma)) / sh ** 2
    return np.where(left, tail, np.where(right, 2.0 * E2 - tail, inner))


def branch_of_x(params: PeakonParams, t: float, x):
    """Region labels 'left', 'middle', 'right' along x (peaks belong to the tails)."""
    gamma = np.log(params.phase(t)[1])
    x = np.asarray(x, dtype=float)
    return np.where(x <= -gamma, "left", np.where(x >= gamma, "right", "middle"))


def branch_of_eta(params: PeakonParams, eta):
    eta = np.asarray(eta, dtype=float)
    E2 = params.C
    return np.where(eta <= 0.5 * E2, "left", np.where(eta >= 1.5 * E2, "right", "middle"))


def _eta_checked(params, eta):
    eta = np.asarray(eta, dtype=float)
    if np.any(~(eta > 0)) or np.any(~(eta < 2.0 * params.C)):
        raise EtaOutOfRange(f"eta must lie in (0, {2.0 * params.C})")
    return eta


def _relabelled(params: PeakonParams, t: float, eta):
    eta = _eta_checked(params, eta)
    s, ch, sh = params.phase(t)
    E2 = params.C
    E = params.E
    left = eta <= 0.5 * E2
    right = eta >= 1.5 * E2
    # outer tails, written with the distance to the nearer end of (0, 2C)
    dist = np.where(right, 2.0 * E2 - eta, eta)
    dist = np.where(left | right, dist, 0.5 * E2)
    y_tail = np.log(2.0 * dist / (E2 * ch))
    u_tail = sh / (E * ch) * dist
    p_tail = 0.5 * dist - sh ** 2 * dist ** 2 / (2.0 * E2 * ch ** 2)
    # inner region, written with the offset from the midpoint
    z = np.where(left | right, 0.0, E2 - eta)
    w = -z * sh ** 2 / (E2 * ch)
    root = np.sqrt(1.0 + w ** 2)
    y_mid = np.arcsinh(w)
    u_mid = -sh / (E * ch) * z
    p_mid = 0.5 * E2 * root * (1.0 / (ch + 1.0) - z ** 2 * sh ** 2 / (E2 ** 2 * ch ** 2 * (root + 1.0)))
    Y = np.where(left, y_tail, np.where(right, -y_tail, y_mid))
    U = np.where(left, -u_tail, np.where(right, u_tail, u_mid))
    P = np.where(left | right, p_tail, p_mid)
    return Y, U, P


def Y_exact(params: PeakonParams, t: float, eta):
    return _relabelled(params, t, eta)[0]


def U_exact(params: PeakonParams, t: float, eta):
    return _relabelled(params, t, eta)[1]


def P_exact(params: PeakonParams, t: float, eta):
    return _relabelled(params, t, eta)[2]


def Psqrt_exact(params: PeakonParams, t: float, eta):
    return np.sqrt(P_exact(params, t, eta))


def scaled_exact(params: PeakonParams, t: float, eta):
    """Rescaled fields on (0, 1): returns ``(tY, tU, tPsqrt, A)``."""
    eta = np.asarray(eta, dtype=float)
    if np.any(~(eta > 0)) or np.any(~(eta < 1)):
        raise EtaOutOfRange("rescaled eta must lie in (0, 1)")
    A = params.A
    Y, U, P = _relabelled(params, t, A ** 2 * eta)
    return A * Y, A * U, A * np.sqrt(P), A


def scaled_G_exact(params: PeakonParams, t: float, x):
    """Rescaled cumulative function ``G(x / A) / A**2``."""
    A = params.A
    return G_exact(params, t, np.asarray(x, dtype=float) / A) / A ** 2


def _clustered(a: float, b: float, n: int, ends: str) -> np.ndarray:
    """``n`` nodes on [a, b] clustered quadratically at the requested end(s)."""
    s = np.linspace(0.0, 1.0, n)
    if ends == "both":
        frac = 0.5 * (1.0 - np.cos(np.pi * s))
    elif ends == "low":
        frac = 1.0 - np.cos(0.5 * np.pi * s)
    else:
        frac = np.sin(0.5 * np.pi * s)
    return a + (b - a) * frac


def peakon_grid(params: PeakonParams, t: float, n: int = 4096, half_width: float = 15.0) -> np.ndarray:
    """Grid with nodes on both peaks and refinement toward them.

    The energy density jumps at the peaks, so nodes are packed there to keep
    the trapezoid error second order in ``n``.
    """
    gamma = float(np.log(params.phase(t)[1]))
    if gamma >= half_width:
        raise ValueError("peaks lie outside the sampling window")
    if gamma > 0.0:
        n_mid = max(n // 4, 3)
        n_side = (n - n_mid + 2) // 2
        left = _clustered(-half_width, -gamma, n_side, "high")
        mid = _clustered(-gamma, gamma, n_mid, "both")
        right = _clustered(gamma, half_width, n - n_mid - n_side + 2, "low")
        return np.concatenate([left[:-1], mid, right[1:]])
    n_side = (n + 1) // 2
    left = _clustered(-half_width, 0.0, n_side, "high")
    right = _clustered(0.0, half_width, n - n_side + 1, "low")
    return np.concatenate([left, right[1:]])


def sample_snapshot(params: PeakonParams, t: float, n: int = 4096,
                    half_width: float = 15.0, grid: np.ndarray | None = None) -> EulerianSnapshot:
    """Eulerian snapshot of the closed form on a peak-aware grid."""
    x = peakon_grid(params, t, n, half_width) if grid is None else np.asarray(grid, dtype=float)
    return EulerianSnapshot(t=t, x=x, u=u_exact(params, t, x),
                            dens=mu_exact_density(params, t, x),
                            atoms=atoms_exact(params, t), C=params.C)


def _ux_exact(params, t, x):
    s, ch, sh, gamma, x, left, right = _regions(params, t, x)
    if sh == 0.0:
        return np.zeros_like(x)
    u = u_exact(params, t, x)
    inner = params.E / sh * np.cosh(np.clip(x, -gamma, gamma))
    return np.where(left, u, np.where(right, -u, inner))


def relabelled_derivatives(params: PeakonParams, t: float, eta):
    """Eta-derivatives of (Y, U, P, H) obtained through the Eulerian fields.

    ``Y_eta = 1 / G_x(Y)`` and the others follow by the chain rule with
    ``u_x``, ``p_x`` and the energy density at ``x = Y``.  At the collision
    time the middle third of (0, 2C) maps to the atom, where ``Y``, ``U``
    and ``P`` are constant and all energy sits in ``H``.
    """
    eta = _eta_checked(params, eta)
    Y = Y_exact(params, t, eta)
    s, ch, sh = params.phase(t)
    E2 = params.C
    if sh == 0.0:
        inside = (eta > 0.5 * E2) & (eta < 1.5 * E2)
        slope = 0.5 * E2 * np.exp(-np.abs(Y))
        Yeta = np.where(inside, 0.0, 1.0 / slope)
        Peta = np.where(inside, 0.0, px_exact(params, t, Y) * Yeta)
        return Yeta, np.zeros_like(eta), Peta, np.where(inside, 1.0, 0.0)
    gamma = np.log(ch)
    tails = np.abs(Y) >= gamma
    slope = np.where(tails, 0.5 * E2 * ch * np.exp(-np.abs(Y)),
                     E2 * ch * np.cosh(np.clip(Y, -gamma, gamma)) / sh ** 2)
    Yeta = 1.0 / slope
    return (Yeta, _ux_exact(params, t, Y) * Yeta, px_exact(params, t, Y) * Yeta,
            mu_exact_density(params, t, Y) * Yeta)


def scaled_derivatives_exact(params: PeakonParams, t: float, eta):
    """Eta-derivatives of (tY, tU, tPsqrt, tH) on (0, 1)."""
    eta = np.asarray(eta, dtype=float)
    A = params.A
    big = A ** 2 * eta
    Yeta, Ueta, Peta, Heta = relabelled_derivatives(params, t, big)
    Psqrt = np.sqrt(P_exact(params, t, big))
    return A ** 3 * Yeta, A ** 3 * Ueta, A ** 3 * Peta / (2.0 * Psqrt), A ** 5 * Heta
