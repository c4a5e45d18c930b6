"""Peakon-antipeakon formulas written directly in the alpha/beta/gamma form.

These deliberately avoid the package's cancellation-free rewrites so that
tests compare two independent transcriptions.  Away from the collision time
they are accurate to a few ulps; at the collision time the limits are used.
"""

import numpy as np


def coefficients(E, t0, t):
    s = 0.5 * E * (t - t0)
    alpha = 0.5 * E * np.sinh(s)
    dalpha = 0.25 * E ** 2 * np.cosh(s)
    beta = E / np.sinh(s) if s != 0 else np.inf
    dbeta = -0.5 * E ** 2 * np.cosh(s) / np.sinh(s) ** 2 if s != 0 else -np.inf
    gamma = np.log(np.cosh(s))
    return alpha, dalpha, beta, dbeta, gamma


def u(E, t0, t, x):
    x = np.asarray(x, dtype=float)
    if t == t0:
        return np.zeros_like(x)
    a, _, b, _, g = coefficients(E, t0, t)
    return np.where(x <= -g, -a * np.exp(x), np.where(x >= g, a * np.exp(-x), b * np.sinh(x)))


def density(E, t0, t, x):
    x = np.asarray(x, dtype=float)
    a, _, b, _, g = coefficients(E, t0, t)
    return np.where(np.abs(x) >= g, 2 * a ** 2 * np.exp(-2 * np.abs(x)), b ** 2 * np.cosh(2 * x))


def F(E, t0, t, x):
    x = np.asarray(x, dtype=float)
    if t == t0:
        return np.where(x <= 0, 0.0, E ** 2)
    a, _, b, _, g = coefficients(E, t0, t)
    return np.where(x < -g, a ** 2 * np.exp(2 * x),
                    np.where(x > g, E ** 2 - a ** 2 * np.exp(-2 * x),
                             0.5 * E ** 2 + 0.5 * b ** 2 * np.sinh(2 * x)))


def px(E, t0, t, x):
    x = np.asarray(x, dtype=float)
    if t == t0:
        return np.where(x <= 0, 0.25 * E ** 2 * np.exp(x), -0.25 * E ** 2 * np.exp(-x))
    a, da, b, db, g = coefficients(E, t0, t)
    return np.where(x < -g, da * np.exp(x) - a ** 2 * np.exp(2 * x),
                    np.where(x > g, -da * np.exp(-x) + a ** 2 * np.exp(-2 * x),
                             -db * np.sinh(x) - 0.5 * b ** 2 * np.sinh(2 * x)))


def G(E, t0, t, x):
    x = np.asarray(x, dtype=float)
    if t == t0:
        return np.where(x <= 0, 0.5 * E ** 2 * np.exp(x), 2 * E ** 2 - 0.5 * E ** 2 * np.exp(-x))
    _, da, _, db, g = coefficients(E, t0, t)
    return np.where(x < -g, 2 * da * np.exp(x),
                    np.where(x > g, 2 * E ** 2 - 2 * da * np.exp(-x), E ** 2 - 2 * db * np.sinh(x)))


def p(E, t0, t, x):
    x = np.asarray(x, dtype=float)
    if t == t0:
        return 0.25 * E ** 2 * np.exp(-np.abs(x))
    a, da, b, db, g = coefficients(E, t0, t)
    ax = np.abs(x)
    return np.where(ax >= g, da * np.exp(-ax) - 0.5 * a ** 2 * np.exp(-2 * ax),
                    -db * np.cosh(x) - 0.5 * b ** 2 * np.cosh(x) ** 2)


def Y(E, t0, t, eta):
    eta = np.asarray(eta, dtype=float)
    E2 = E ** 2
    if t == t0:
        return np.where(eta <= E2 / 2, np.log(eta / (E2 / 2)),
                        np.where(eta >= 1.5 * E2, np.log((E2 / 2) / (2 * E2 - eta)), 0.0))
    _, da, _, db, _ = coefficients(E, t0, t)
    return np.where(eta <= E2 / 2, np.log(eta / (2 * da)),
                    np.where(eta >= 1.5 * E2, np.log(2 * da / (2 * E2 - eta)),
                             np.arcsinh((E2 - eta) / (2 * db))))


def U(E, t0, t, eta):
    eta = np.asarray(eta, dtype=float)
    E2 = E ** 2
    if t == t0:
        return np.zeros_like(eta)
    a, da, b, db, _ = coefficients(E, t0, t)
    return np.where(eta <= E2 / 2, -a / (2 * da) * eta,
                    np.where(eta >= 1.5 * E2, a / (2 * da) * (2 * E2 - eta),
                             b / (2 * db) * (E2 - eta)))


def P(E, t0, t, eta):
    eta = np.asarray(eta, dtype=float)
    E2 = E ** 2
    if t == t0:
        return p(E, t0, t, Y(E, t0, t, eta))
    a, da, b, db, _ = coefficients(E, t0, t)
    k = a ** 2 / (8 * da ** 2)
    w = 1 + (E2 - eta) ** 2 / (4 * db ** 2)
    return np.where(eta <= E2 / 2, 0.5 * eta - k * eta ** 2,
                    np.where(eta >= 1.5 * E2, 0.5 * (2 * E2 - eta) - k * (2 * E2 - eta) ** 2,
                             -db * np.sqrt(w) - 0.5 * b ** 2 * w))


def scaled(E, t0, t, eta):
    """(tY, tU, tP, A) on (0, 1)."""
    A = np.sqrt(2.0) * E
    big = A ** 2 * np.asarray(eta, dtype=float)
    return A * Y(E, t0, t, big), A * U(E, t0, t, big), A ** 2 * P(E, t0, t, big), A
