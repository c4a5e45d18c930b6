"""Pointwise inequality catalog for rescaled and unscaled relabelled fields.

Every row is a statement ``lhs <= rhs`` evaluated node by node.  Its margin
``rhs - lhs`` is reported relative to the power of A that sets the natural
size of the row (for the unscaled rows, the matching power of sqrt(2C)).
A row passes when the smallest relative margin is at least ``-tol``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import peakon
from .dynamics import OperatorFields, compute_operators, decay_integral
from .transform import ScaledSnapshot, eta_derivative, midpoint_grid


@dataclass(frozen=True)
class FieldSet:
    """Rescaled fields with their eta-derivatives and operators."""
    snapshot: ScaledSnapshot
    Yeta: np.ndarray
    Ueta: np.ndarray
    Pseta: np.ndarray
    Heta: np.ndarray
    ops: OperatorFields

    @property
    def A(self):
        return self.snapshot.A


@dataclass(frozen=True)
class Row:
    name: str
    statement: str
    power: int
    worst: float          # smallest margin divided by A**power
    worst_eta: float
    passed: bool
    extra: dict = field(default_factory=dict)


def exact_fieldset(params: peakon.PeakonParams, t: float, n: int) -> FieldSet:
    eta = midpoint_grid(n)
    Y, U, Ps, A = peakon.scaled_exact(params, t, eta)
    ss = ScaledSnapshot(t=t, eta=eta, tY=Y, tU=U, tPsqrt=Ps, A=A)
    Yeta, Ueta, Pseta, Heta = peakon.scaled_derivatives_exact(params, t, eta)
    return FieldSet(ss, Yeta, Ueta, Pseta, Heta, compute_operators(ss, Yeta, Ueta))


def numeric_fieldset(ss: ScaledSnapshot) -> FieldSet:
    """Derivatives by the logit stencil; the energy slope from the identity
    ``2 P Y_eta - U^2 Y_eta + H_eta = A^5``."""
    Yeta = eta_derivative(ss.eta, ss.tY)
    Ueta = eta_derivative(ss.eta, ss.tU)
    Pseta = eta_derivative(ss.eta, ss.tPsqrt)
    Heta = ss.A ** 5 - (2.0 * ss.tP - ss.tU ** 2) * Yeta
    return FieldSet(ss, Yeta, Ueta, Pseta, Heta, compute_operators(ss, Yeta, Ueta))


def _row(name, statement, power, lhs, rhs, eta, A, tol, **extra):
    margin = (np.asarray(rhs, dtype=float) - np.asarray(lhs, dtype=float)) / A ** power
    margin = np.broadcast_to(margin, eta.shape)
    k = int(np.argmin(margin))
    return Row(name, statement, power, float(margin[k]), float(eta[k]), bool(margin[k] >= -tol), extra)


def scaled_rows(fs: FieldSet, tol: float = 1e-6) -> list[Row]:
    ss = fs.snapshot
    A, eta = ss.A, ss.eta
    Y, U, P, Ps = ss.tY, ss.tU, ss.tP, ss.tPsqrt
    Ye, Ue, Pse, He = fs.Yeta, fs.Ueta, fs.Pseta, fs.Heta
    Q, R, D, E = fs.ops.Qt, fs.ops.Rt, fs.ops.Dt, fs.ops.Et
    r2 = np.sqrt(2.0)
    rows = [
        _row("pressure_nonnegative", "0 <= 4P", 4, 0.0, 4 * P, eta, A, tol),
        _row("pressure_cap", "4P <= A^4", 4, 4 * P, A ** 4, eta, A, tol),
        _row("velocity_cap", "sqrt2 |U| <= A^2", 2, r2 * np.abs(U), A ** 2, eta, A, tol),
        _row("force_by_pressure", "|Q| <= A P", 5, np.abs(Q), A * P, eta, A, tol),
        _row("kinetic_by_pressure", "U^2 <= 2P", 4, U ** 2, 2 * P, eta, A, tol),
        _row("pressure_stretch", "2 P Y_eta <= A^5", 5, 2 * P * Ye, A ** 5, eta, A, tol),
        _row("velocity_gradient", "2 |U U_eta| <= A^4", 4, 2 * np.abs(U * Ue), A ** 4, eta, A, tol),
        _row("kinetic_stretch_lower", "0 <= U^2 Y_eta", 5, 0.0, U ** 2 * Ye, eta, A, tol),
        _row("kinetic_stretch_upper", "U^2 Y_eta <= A^5", 5, U ** 2 * Ye, A ** 5, eta, A, tol),
        _row("gradient_by_stretch", "U_eta^2 <= A^3 Y_eta", 4, Ue ** 2, A ** 3 * Ye, eta, A, tol),
        _row("mixed_stretch", "sqrt2 |U| P^1/2 Y_eta <= A^5", 5, r2 * np.abs(U) * Ps * Ye, A ** 5, eta, A, tol),
        _row("energy_slope_lower", "0 <= H_eta", 5, 0.0, He, eta, A, tol),
        _row("energy_slope_upper", "H_eta <= A^5", 5, He, A ** 5, eta, A, tol),
        _row("monotone_position", "0 <= Y_eta", 1, 0.0, Ye, eta, A, tol),
        _row("gradient_by_energy", "A^2 U_eta^2 <= H_eta Y_eta", 6, A ** 2 * Ue ** 2, He * Ye, eta, A, tol),
        _row("left_integral_lower", "0 <= D", 5, 0.0, D, eta, A, tol),
        _row("left_integral_upper", "D <= 2 A P", 5, D, 2 * A * P, eta, A, tol),
        _row("right_integral_lower", "0 <= E", 5, 0.0, E, eta, A, tol),
        _row("right_integral_upper", "E <= 2 A P", 5, E, 2 * A * P, eta, A, tol),
        _row("pressure_gradient_product", "2 sqrt2 P U_eta <= A^6", 6, 2 * r2 * P * Ue, A ** 6, eta, A, tol),
        _row("pressure_gradient_square", "2 P U_eta^2 <= A^8", 8, 2 * P * Ue ** 2, A ** 8, eta, A, tol),
        _row("pressure_gradient_stretch", "4 P U_eta^2 <= A^7 Y_eta", 8, 4 * P * Ue ** 2, A ** 7 * Ye, eta, A, tol),
        _row("root_pressure_slope", "|(P^1/2)_eta| <= P^1/2 Y_eta / (2A)", 2, np.abs(Pse), Ps * Ye / (2 * A), eta, A, tol),
        _row("root_pressure_velocity", "|U (P^1/2)_eta| <= 3 A^4 / 8", 4, np.abs(U * Pse), 3 * A ** 4 / 8, eta, A, tol),
        _row("root_pressure_square", "(P^1/2)_eta^2 <= A^3 Y_eta / 8", 4, Pse ** 2, A ** 3 * Ye / 8, eta, A, tol),
        _row("root_pressure_stretch", "(P^1/2)_eta^2 <= A^2 Y_eta^2 / 16", 4, Pse ** 2, A ** 2 * Ye ** 2 / 16, eta, A, tol),
    ]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(P > 0, np.abs(R) / (A ** 3 * P), 0.0)
    K = float(np.max(ratio))
    rows.append(Row("source_by_pressure", "|R| <= K A^3 P", 7, 0.0, float(eta[int(np.argmax(ratio))]),
                    bool(np.isfinite(K)), {"K": K}))
    rows += integral_rows(fs, tol)
    return rows


def integral_rows(fs: FieldSet, tol: float = 1e-6) -> list[Row]:
    """Weighted one-sided integrals bounded by the pressure."""
    ss = fs.snapshot
    A, eta = ss.A, ss.eta
    U, P, He = ss.tU, ss.tP, fs.Heta

    def lhs(rate, g, stretch=False):
        return decay_integral(ss, rate, g, stretch)

    return [
        _row("decay_pressure_stretch", "int e^{-3/2 dY/A} P Y_eta <= 2 A P", 5, lhs(1.5, P, True), 2 * A * P, eta, A, tol),
        _row("decay_energy_slope", "int e^{-3/2 dY/A} H_eta <= 4 A P", 5, lhs(1.5, He), 4 * A * P, eta, A, tol),
        _row("decay_kinetic", "int e^{-dY/A} U^2 <= 6 P", 4, lhs(1.0, U ** 2), 6 * P, eta, A, tol),
        _row("decay_pressure_stretch_5_4", "int e^{-5/4 dY/A} P Y_eta <= 4 A P", 5, lhs(1.25, P, True), 4 * A * P, eta, A, tol),
        _row("decay_pressure", "int e^{-3/2 dY/A} P <= 7 P", 4, lhs(1.5, P), 7 * P, eta, A, tol),
        _row("decay_pressure_square", "int e^{-dY/A} P^2 Y_eta <= 3/2 A^5 P", 9, lhs(1.0, P ** 2, True), 1.5 * A ** 5 * P, eta, A, tol),
        _row("decay_kinetic_stretch", "int e^{-dY/A} U^2 Y_eta <= 4 A P", 5, lhs(1.0, U ** 2, True), 4 * A * P, eta, A, tol),
        _row("decay_energy", "int e^{-dY/A} H_eta <= 4 A P", 5, lhs(1.0, He), 4 * A * P, eta, A, tol),
    ]


def unscaled_rows(params: peakon.PeakonParams, t: float, n: int, tol: float = 1e-6) -> list[Row]:
    """Bounds on the relabelled (not rescaled) closed-form fields."""
    C = params.C
    eta = midpoint_grid(n, 2.0 * C)
    Y, U, P = (f(params, t, eta) for f in (peakon.Y_exact, peakon.U_exact, peakon.P_exact))
    Ye, Ue, _, _ = peakon.relabelled_derivatives(params, t, eta)
    A = np.sqrt(2.0 * C)
    return [
        _row("unit_pressure_stretch", "P Y_eta <= 1/2", 0, P * Ye, 0.5, eta, A, tol),
        _row("unit_velocity_gradient", "|U U_eta| <= 1/2", 0, np.abs(U * Ue), 0.5, eta, A, tol),
        _row("unit_kinetic_stretch", "U^2 Y_eta <= 1", 0, U ** 2 * Ye, 1.0, eta, A, tol),
        _row("unit_kinetic_by_pressure", "U^2 <= 2P", 2, U ** 2, 2 * P, eta, A, tol),
        _row("unit_velocity_cap", "|U| <= sqrt C", 1, np.abs(U), np.sqrt(C), eta, A, tol),
        _row("unit_pressure_cap", "P <= C/2", 2, P, C / 2, eta, A, tol),
    ]


def snapshot_rows(ss: ScaledSnapshot, tol: float = 1e-6) -> list[Row]:
    """Catalog of a sampled snapshot with numerically differentiated fields.

    The zero solution has nothing to bound: every row is reported as a
    vacuous pass.
    """
    if ss.A == 0:
        template = scaled_rows(exact_fieldset(peakon.PeakonParams(), 1.0, 16), tol)
        return [Row(r.name, r.statement, r.power, 0.0, float("nan"), True, {"vacuous": True})
                for r in template]
    return scaled_rows(numeric_fieldset(ss), tol)
