"""Relabelling by the pseudo-inverse of G and the energy rescaling.

The relabelled coordinate runs over (0, 2C) and is sampled at cell
midpoints.  Near both ends the position field behaves like a logarithm
(the tails of G are exponential because of the kernel exp(-|x|)), so
derivatives in eta are taken in the logit variable log(eta / (L - eta)),
where every field is smooth, with an essentially non-oscillatory choice of
three-point stencil so that kinks of the data do not smear.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, TargetOutOfRange, ZeroEnergy, ZeroSolution
from .fields import EulerianSnapshot, evaluator


def midpoint_grid(n: int, length: float = 1.0) -> np.ndarray:
    if n < 1:
        raise ValueError("need at least one cell")
    return (np.arange(1, n + 1) - 0.5) * (length / n)


@dataclass(frozen=True)
class TransformedSnapshot:
    t: float
    eta: np.ndarray
    Y: np.ndarray
    U: np.ndarray
    Psqrt: np.ndarray
    C: float

    def __post_init__(self):
        _check_fields(self.eta, (self.Y, self.U, self.Psqrt), 2.0 * self.C)

    @property
    def P(self) -> np.ndarray:
        return self.Psqrt ** 2

    def to_csv(self) -> str:
        return _csv(("eta", "Y", "U", "Psqrt"), (self.eta, self.Y, self.U, self.Psqrt))


@dataclass(frozen=True)
class ScaledSnapshot:
    t: float
    eta: np.ndarray
    tY: np.ndarray
    tU: np.ndarray
    tPsqrt: np.ndarray
    A: float

    def __post_init__(self):
        _check_fields(self.eta, (self.tY, self.tU, self.tPsqrt), 1.0)
        if not (np.isfinite(self.A) and self.A >= 0):
            raise ValueError("scale must be finite and nonnegative")

    @property
    def tP(self) -> np.ndarray:
        return self.tPsqrt ** 2

    def to_csv(self) -> str:
        return _csv(("eta", "tY", "tU", "tPsqrt"), (self.eta, self.tY, self.tU, self.tPsqrt))

    def to_json(self) -> str:
        return json.dumps({"t": self.t, "A": self.A, "eta": self.eta.tolist(),
                           "tY": self.tY.tolist(), "tU": self.tU.tolist(),
                           "tPsqrt": self.tPsqrt.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "ScaledSnapshot":
        raw = json.loads(text)
        return cls(t=raw["t"], eta=np.array(raw["eta"]), tY=np.array(raw["tY"]),
                   tU=np.array(raw["tU"]), tPsqrt=np.array(raw["tPsqrt"]), A=raw["A"])


def _check_fields(eta, fields, length):
    eta = np.asarray(eta, dtype=float)
    if eta.ndim != 1 or eta.size < 1:
        raise ValueError("eta must be a nonempty vector")
    if np.any(np.diff(eta) <= 0):
        raise ValueError("eta must be strictly increasing")
    if length > 0 and (eta[0] <= 0 or eta[-1] >= length):
        raise ValueError("eta must lie inside the open interval")
    for f in fields:
        if np.shape(f) != eta.shape:
            raise ValueError("field length differs from the eta grid")
    if np.any(np.asarray(fields[2]) < 0):
        raise ValueError("square-root pressure must be nonnegative")


def _csv(names, columns) -> str:
    out = io.StringIO()
    out.write(",".join(names) + "\n")
    for row in zip(*columns):
        out.write(",".join(f"{v:.12g}" for v in row) + "\n")
    return out.getvalue()


def pseudo_inverse(xs, gs, targets):
    """Generalized inverse ``sup{x : g(x) < target}`` of sampled monotone data.

    Between samples the inverse is linear.  A sample gap larger than ten
    times the median positive gap is treated as a jump of g, and every
    target inside it maps to the left end of that cell.
    """
    xs = np.asarray(xs, dtype=float)
    gs = np.asarray(gs, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if np.any(np.diff(xs) < 0) or np.any(np.diff(gs) < 0):
        raise ValueError("samples must be nondecreasing")
    if np.any(targets < gs[0]) or np.any(targets > gs[-1]):
        raise TargetOutOfRange("target outside the sampled range of g")
    gaps = np.diff(gs)
    positive = gaps[gaps > 0]
    threshold = 10.0 * np.median(positive) if positive.size else np.inf
    j = np.clip(np.searchsorted(gs, targets, side="left") - 1, 0, gs.size - 2)
    lo, hi = gs[j], gs[j + 1]
    span = np.where(hi > lo, hi - lo, 1.0)
    frac = np.clip((targets - lo) / span, 0.0, 1.0)
    out = xs[j] + frac * (xs[j + 1] - xs[j])
    jump = (hi - lo) > threshold
    out = np.where(jump & (targets > lo), xs[j], out)
    return np.where(targets <= gs[0], xs[0], out)


def invert_increasing(fun, slope, xs, gs, targets, iters: int = 40):
    """Solve ``fun(x) = target`` inside the sampled bracket of each target.

    ``gs`` are the values of ``fun`` at ``xs`` (``xs`` may repeat where
    ``fun`` jumps).  Targets inside a jump return the jump location.
    Newton steps are safeguarded by bisection, so the result always stays
    in its bracket.
    """
    xs = np.asarray(xs, dtype=float)
    gs = np.asarray(gs, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if np.any(targets < gs[0]) or np.any(targets > gs[-1]):
        raise TargetOutOfRange("target outside the range of the sampled function")
    j = np.clip(np.searchsorted(gs, targets, side="left") - 1, 0, gs.size - 2)
    a, b = xs[j].copy(), xs[j + 1].copy()
    ga, gb = gs[j] - targets, gs[j + 1] - targets
    vertical = b == a
    x = np.where(gb > ga, a + (b - a) * (-ga) / np.where(gb > ga, gb - ga, 1.0), a)
    active = ~vertical
    for _ in range(iters):
        if not np.any(active):
            break
        idx = np.nonzero(active)[0]
        xa = x[idx]
        r = fun(xa) - targets[idx]
        lo, hi = a[idx], b[idx]
        lo = np.where(r < 0, xa, lo)
        hi = np.where(r >= 0, xa, hi)
        a[idx], b[idx] = lo, hi
        d = slope(xa)
        step = np.where(d > 0, xa - r / np.where(d > 0, d, 1.0), 0.5 * (lo + hi))
        bad = (step <= lo) | (step >= hi) | ~np.isfinite(step)
        new = np.where(bad, 0.5 * (lo + hi), step)
        done = (np.abs(new - xa) <= 1e-15 * (1.0 + np.abs(xa))) | (hi - lo <= 1e-15 * (1.0 + np.abs(xa)))
        x[idx] = new
        active[idx[done]] = False
    return np.where(targets <= gs[0], xs[0], x)


def _with_jumps(ev, x_nodes):
    """Node values of G with each point mass split into its two one-sided values."""
    s = ev.s
    xs = np.asarray(x_nodes, dtype=float)
    locs = s.atoms[:, 0] if s.atoms.size else np.zeros(0)
    xs = np.union1d(xs, locs)
    gs = ev.G(xs)
    if locs.size:
        masses = s.atoms[:, 1]
        pos = np.searchsorted(xs, locs)
        xs = np.insert(xs, pos + 1, locs)
        gs = np.insert(gs, pos + 1, gs[pos] + masses)
    return xs, np.maximum.accumulate(gs)


def build_transformed(s: EulerianSnapshot, n_eta: int) -> TransformedSnapshot:
    """Sample the relabelled fields at ``n_eta`` midpoints of (0, 2C)."""
    if s.C <= 0 or s.total_mass() <= 0:
        raise ZeroSolution("no energy to relabel")
    ev = evaluator(s)
    xs, gs = _with_jumps(ev, s.x)
    eta = midpoint_grid(n_eta, 2.0 * s.C)
    Y = invert_increasing(ev.G, ev.G_slope, xs, gs, eta)
    Y = np.maximum.accumulate(Y)
    U = ev.u(Y)
    P = np.maximum(ev.p(Y), 0.0)
    return TransformedSnapshot(t=s.t, eta=eta, Y=Y, U=U, Psqrt=np.sqrt(P), C=s.C)


def rescale(ts: TransformedSnapshot) -> ScaledSnapshot:
    """Map onto (0, 1) with scale A = sqrt(2C)."""
    if ts.C <= 0:
        raise ZeroEnergy("rescaling requires positive energy")
    A = float(np.sqrt(2.0 * ts.C))
    return ScaledSnapshot(t=ts.t, eta=ts.eta / A ** 2, tY=A * ts.Y, tU=A * ts.U,
                          tPsqrt=A * ts.Psqrt, A=A)


def zero_scaled(n: int, t: float = 0.0) -> ScaledSnapshot:
    """The zero solution: scale 0 and all fields identically 0."""
    z = np.zeros(n)
    return ScaledSnapshot(t=t, eta=midpoint_grid(n), tY=z, tU=z.copy(), tPsqrt=z.copy(), A=0.0)


def same_grid(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape or not np.allclose(a, b, rtol=0, atol=1e-14):
        raise GridMismatch("fields are sampled on different grids")


# derivatives in eta -------------------------------------------------------

def _three_point(s0, s1, s2, f0, f1, f2, at):
    d0 = (2 * at - s1 - s2) / ((s0 - s1) * (s0 - s2))
    d1 = (2 * at - s0 - s2) / ((s1 - s0) * (s1 - s2))
    d2 = (2 * at - s0 - s1) / ((s2 - s0) * (s2 - s1))
    curv = f0 / ((s0 - s1) * (s0 - s2)) + f1 / ((s1 - s0) * (s1 - s2)) + f2 / ((s2 - s0) * (s2 - s1))
    return f0 * d0 + f1 * d1 + f2 * d2, np.abs(curv)


def _coordinates(eta, length):
    """Candidate variables with their eta-derivatives: suited respectively to
    logarithmic, linear and square-root behaviour at the ends."""
    u = eta / length
    logit = np.log(eta / (length - eta))
    root = np.sqrt(u) - np.sqrt(1.0 - u)
    return [(logit, length / (eta * (length - eta))),
            (eta, np.ones_like(eta)),
            (root, 0.5 / length * (1.0 / np.sqrt(u) + 1.0 / np.sqrt(1.0 - u)))]


def eta_derivative(eta, f, length: float = 1.0):
    """Derivative of nodal data ``f`` on an increasing grid inside (0, length).

    Three-point formulas are evaluated in several variables (logit, eta and
    a square-root map) and on the three stencils around each node.  The
    candidate with the smallest error indicator, the second divided
    difference times the stencil width converted to eta units, is kept, so
    the stencil adapts both to the end behaviour of the field and to kinks.
    """
    eta = np.asarray(eta, dtype=float)
    f = np.asarray(f, dtype=float)
    n = eta.size
    if n < 3:
        raise ValueError("need at least three nodes")
    pad = lambda a: np.concatenate([[np.nan, np.nan], a, [np.nan, np.nan]])
    pad_f = pad(f)
    k = np.arange(n) + 2
    best = np.full(n, np.inf)
    deriv = np.zeros(n)
    with np.errstate(invalid="ignore"):
        for var, jac in _coordinates(eta, length):
            pv = pad(var)
            for shift in (-1, 0, -2):
                i0, i1, i2 = k + shift, k + shift + 1, k + shift + 2
                d, c = _three_point(pv[i0], pv[i1], pv[i2], pad_f[i0], pad_f[i1], pad_f[i2], var)
                indicator = c * (pv[i2] - pv[i0]) * jac
                indicator = np.where(np.isfinite(indicator), indicator, np.inf)
                take = indicator < best
                deriv = np.where(take, d * jac, deriv)
                best = np.where(take, indicator, best)
    return deriv
