"""Eulerian data (u, mu) on a grid and the fields p, p_x, F, G built from it.

The energy measure mu is an absolutely continuous part sampled as a nodal
density plus a finite list of point masses.  Nodal quantities are linear
between nodes and vanish outside the grid.  Kernel integrals use the
trapezoid rule split at the evaluation point, accumulated with the O(N)
sweeps in :mod:`chmetric.kernels`.

At a point mass the cumulative function and p_x are taken as left limits,
so F, p_x and G are all left-continuous with right limits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .kernels import split_sums


@dataclass(frozen=True)
class EulerianSnapshot:
    t: float
    x: np.ndarray
    u: np.ndarray
    dens: np.ndarray
    atoms: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    C: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        u = np.asarray(self.u, dtype=float)
        dens = np.asarray(self.dens, dtype=float)
        atoms = np.asarray(self.atoms, dtype=float).reshape(-1, 2)
        if x.ndim != 1 or x.size < 2:
            raise ValueError("grid needs at least two nodes")
        if u.shape != x.shape or dens.shape != x.shape:
            raise ValueError("u and dens must match the grid")
        if np.any(np.diff(x) <= 0):
            raise ValueError("grid must be strictly increasing")
        if np.any(dens < 0):
            raise ValueError("energy density must be nonnegative")
        if np.any(atoms[:, 1] <= 0):
            raise ValueError("point masses must be positive")
        if not np.isfinite(self.C) or self.C < 0:
            raise ValueError("total energy must be finite and nonnegative")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "dens", dens)
        object.__setattr__(self, "atoms", atoms)

    def total_mass(self) -> float:
        """Trapezoid mass of the density plus the point masses."""
        return float(np.trapezoid(self.dens, self.x) + self.atoms[:, 1].sum())

    def to_json(self) -> str:
        return json.dumps({
            "t": self.t,
            "x": self.x.tolist(),
            "u": self.u.tolist(),
            "dens": self.dens.tolist(),
            "atoms": self.atoms.tolist(),
            "C": self.C,
        })

    @classmethod
    def from_json(cls, text: str) -> "EulerianSnapshot":
        raw = json.loads(text)
        return cls(t=raw["t"], x=np.array(raw["x"]), u=np.array(raw["u"]),
                   dens=np.array(raw["dens"]),
                   atoms=np.array(raw.get("atoms", []), dtype=float).reshape(-1, 2),
                   C=raw["C"])


def _trapezoid_sweeps(x, f):
    """Left/right trapezoid integrals of exp(-|x_k - y|) f(y) at every node."""
    dx = np.diff(x)
    ahead = np.zeros_like(f)
    behind = np.zeros_like(f)
    ahead[:-1] = 0.5 * dx * f[:-1]   # node j seen from the cell to its right
    behind[1:] = 0.5 * dx * f[1:]    # node j seen from the cell to its left
    return split_sums(x, ahead, behind)


class _FieldEvaluator:
    """Caches nodal sweeps so that repeated evaluation is cheap."""

    def __init__(self, s: EulerianSnapshot):
        self.s = s
        self.source = s.u ** 2 + s.dens
        self.left, self.right = _trapezoid_sweeps(s.x, self.source)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(s.x) * (s.dens[1:] + s.dens[:-1]))])
        # rescale so the continuous part ends exactly at C minus the point
        # masses; this keeps C - F relatively accurate in the right tail
        target = s.C - s.atoms[:, 1].sum()
        self.cum_scale = target / cum[-1] if cum[-1] > 0 and target > 0 else 1.0
        self.cum = cum * self.cum_scale

    def _locate(self, xq):
        x = self.s.x
        j = np.clip(np.searchsorted(x, xq, side="right") - 1, 0, x.size - 2)
        return j

    def _interp(self, nodal, xq):
        x = self.s.x
        inside = (xq >= x[0]) & (xq <= x[-1])
        return np.where(inside, np.interp(xq, x, nodal), 0.0)

    def u(self, xq):
        return self._interp(self.s.u, xq)

    def dens(self, xq):
        return self._interp(self.s.dens, xq)

    def kernel_parts(self, xq):
        """Continuous-part integrals of exp(-|x-y|)(u^2 + dens) left and right of x."""
        x = self.s.x
        f = self.source
        j = self._locate(xq)
        fq = self._interp(f, xq)
        # distances are clipped so that off-grid queries never overflow
        d_lo = np.maximum(xq - x[j], 0.0)
        d_hi = np.maximum(x[j + 1] - xq, 0.0)
        inside = (xq >= x[0]) & (xq <= x[-1])
        left_in = np.exp(-d_lo) * self.left[j] + 0.5 * d_lo * (np.exp(-d_lo) * f[j] + fq)
        right_in = np.exp(-d_hi) * self.right[j + 1] + 0.5 * d_hi * (fq + np.exp(-d_hi) * f[j + 1])
        below = xq < x[0]
        left = np.where(inside, left_in, np.where(below, 0.0, np.exp(-np.maximum(xq - x[-1], 0.0)) * self.left[-1]))
        right = np.where(inside, right_in, np.where(below, np.exp(-np.maximum(x[0] - xq, 0.0)) * self.right[0], 0.0))
        return left, right

    def atom_parts(self, xq):
        """Atom contributions to the left-continuous left and right integrals."""
        left = np.zeros_like(xq)
        right = np.zeros_like(xq)
        for loc, mass in self.s.atoms:
            w = mass * np.exp(-np.abs(xq - loc))
            strictly_left = loc < xq
            left += np.where(strictly_left, w, 0.0)
            right += np.where(strictly_left, 0.0, w)
        return left, right

    def p(self, xq):
        lc, rc = self.kernel_parts(xq)
        la, ra = self.atom_parts(xq)
        return 0.25 * (lc + rc + la + ra)

    def px(self, xq):
        lc, rc = self.kernel_parts(xq)
        la, ra = self.atom_parts(xq)
        return -0.25 * (lc + la - rc - ra)

    def F(self, xq):
        x = self.s.x
        j = self._locate(xq)
        d_lo = np.maximum(xq - x[j], 0.0)
        cont = self.cum[j] + 0.5 * self.cum_scale * d_lo * (self.s.dens[j] + self._interp(self.s.dens, xq))
        cont = np.where(xq < x[0], 0.0, np.where(xq > x[-1], self.s.C, cont))
        atoms = np.zeros_like(xq)
        for loc, mass in self.s.atoms:
            atoms += np.where(loc < xq, mass, 0.0)
        # beyond the grid the total energy already includes every atom
        return np.where(xq > x[-1], cont, cont + atoms)

    def G(self, xq):
        return 2.0 * self.px(xq) + 2.0 * self.F(xq)

    def G_slope(self, xq):
        """Derivative of G away from atoms: 2p - u^2 + dens."""
        return 2.0 * self.p(xq) - self.u(xq) ** 2 + self.dens(xq)


def evaluator(s: EulerianSnapshot) -> _FieldEvaluator:
    return _FieldEvaluator(s)


def _as_points(x):
    return np.atleast_1d(np.asarray(x, dtype=float))


def _shape_like(x, values):
    return values if np.ndim(x) else float(values[0])


def eval_p(s: EulerianSnapshot, x):
    """Pressure p = 1/4 exp(-|.|) * (u^2 dx + mu)."""
    return _shape_like(x, evaluator(s).p(_as_points(x)))


def eval_px(s: EulerianSnapshot, x):
    """Spatial derivative of the pressure, left-continuous at point masses."""
    return _shape_like(x, evaluator(s).px(_as_points(x)))


def eval_F(s: EulerianSnapshot, x):
    """Cumulative energy mu((-inf, x))."""
    return _shape_like(x, evaluator(s).F(_as_points(x)))


def eval_G(s: EulerianSnapshot, x):
    """G = 2 p_x + 2 F, nondecreasing from 0 to 2C."""
    return _shape_like(x, evaluator(s).G(_as_points(x)))
