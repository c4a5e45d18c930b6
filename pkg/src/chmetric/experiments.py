"""Verification suites built on the closed-form peakon-antipeakon family.

Each suite takes a small dataclass config, which can be read from a flat
``key = value`` text file (lists are comma separated, ``#`` starts a
comment), and returns a JSON-serialisable report with a ``passed`` flag.
"""

from __future__ import annotations

import json
import os
import typing
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import peakon
from .catalog import exact_fieldset, scaled_rows, unscaled_rows
from .dynamics import compute_operators, residual_report, transport_velocity
from .errors import UnknownFigure
from .metric import (LagrangianTrack, distance_series, eulerian_l2, growth_rate, scaled_peakon,
                     series_csv)
from .peakon import PeakonParams
from .transform import ScaledSnapshot, midpoint_grid, zero_scaled


# configuration -------------------------------------------------------------

@dataclass
class InvariantsConfig:
    energies: tuple[float, ...] = (1.0, 2.0, 4.0)
    offsets: tuple[float, ...] = (-2.0, -0.5, -0.05, 0.05, 0.5, 2.0)
    t0: float = 2.0
    N: int = 4096
    tol: float = 1e-6
    threads: int = 1


@dataclass
class ResidualConfig:
    E: float = 2.0
    t0: float = 2.0
    offsets: tuple[float, ...] = (1.0, -1.0, 0.5)
    sizes: tuple[int, ...] = (1024, 2048, 4096)
    dt: float = 1e-4
    max_residual: float = 1e-2
    min_ratio: float = 1.5


@dataclass
class LipschitzConfig:
    # each pair is E1:t01:E2:t02
    pairs: tuple[str, ...] = ("2:2:2.2:2", "2:2:2:2.1", "1:2:4:2")
    tmax: float = 4.0
    samples: int = 33
    N: int = 4096
    lagrangian: bool = True
    particles: int = 1024
    dt: float = 2e-3
    refine_tol: float = 1e-2
    jump_factor: float = 1.25
    zero_E: float = 2.0
    zero_t0: float = 2.0


@dataclass
class FigureConfig:
    E: float = 2.0
    t0: float = 2.0
    times: tuple[float, ...] = (0.0, 1.5, 2.0, 4.0)
    x_half_width: float = 10.0
    x_points: int = 2001
    eta_points: int = 1000
    resc_energies: tuple[float, ...] = (1.0, 0.5, 0.25)
    resc_time: float = 0.0


def _coerce(kind, text: str):
    origin = typing.get_origin(kind)
    if origin is tuple:
        inner = typing.get_args(kind)[0]
        return tuple(_coerce(inner, part.strip()) for part in text.split(",") if part.strip())
    if kind is bool:
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {text!r}")
    return kind(text)


def parse_config(cls, text: str):
    """Build ``cls`` from ``key = value`` lines; unknown keys are an error."""
    hints = typing.get_type_hints(cls)
    known = {f.name for f in fields(cls)}
    values = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {number}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ValueError(f"line {number}: unknown key {key!r}")
        values[key] = _coerce(hints[key], value)
    return cls(**values)


def load_config(cls, source: str | None):
    """``None`` or ``"default"`` gives the defaults, anything else is a file path."""
    if source is None or source == "default":
        return cls()
    with open(source, encoding="utf-8") as fh:
        return parse_config(cls, fh.read())


def _row_dict(row, **context):
    out = {"name": row.name, "statement": row.statement, "power": row.power,
           "worst": row.worst, "worst_eta": row.worst_eta, "passed": row.passed}
    out.update(row.extra)
    out.update(context)
    return out


# invariant catalog ---------------------------------------------------------

def _invariant_cell(E, offset, cfg: InvariantsConfig):
    params = PeakonParams(E=E, t0=cfg.t0)
    t = cfg.t0 + offset
    rows = scaled_rows(exact_fieldset(params, t, cfg.N), cfg.tol)
    rows += unscaled_rows(params, t, cfg.N, cfg.tol)
    return [_row_dict(r, E=E, offset=offset) for r in rows]


def run_invariants(cfg: InvariantsConfig = InvariantsConfig()) -> dict:
    cells = [(E, off) for E in cfg.energies for off in cfg.offsets]
    with ThreadPoolExecutor(max_workers=max(cfg.threads, 1)) as pool:
        results = list(pool.map(lambda c: _invariant_cell(c[0], c[1], cfg), cells))
    worst: dict[str, dict] = {}
    for cell in results:
        for row in cell:
            best = worst.get(row["name"])
            if best is None or row["worst"] < best["worst"]:
                worst[row["name"]] = dict(row)
            if not row["passed"]:
                worst[row["name"]]["passed"] = False
    summary = list(worst.values())
    return {"suite": "invariants", "config": asdict(cfg), "rows": summary,
            "cells": len(cells), "passed": all(r["passed"] for r in summary)}


# residual study ------------------------------------------------------------

def _centre_row(params: PeakonParams, t: float, n: int) -> dict:
    """On an odd grid the centre node sits at eta = 1/2, where the velocity
    field vanishes by antisymmetry."""
    if n % 2 == 0:
        n += 1
    eta = midpoint_grid(n)
    tY, tU, tPs, A = peakon.scaled_exact(params, t, eta)
    ss = ScaledSnapshot(t=t, eta=eta, tY=tY, tU=tU, tPsqrt=tPs, A=A)
    Yeta, Ueta, _, _ = peakon.scaled_derivatives_exact(params, t, eta)
    v = transport_velocity(ss, compute_operators(ss, Yeta, Ueta))
    k = n // 2
    scale = float(np.max(np.abs(v)))
    return {"name": "centre_at_rest", "U_centre": float(tU[k]), "v_centre": float(v[k]),
            "v_scale": scale, "passed": bool(abs(tU[k]) <= 1e-12 * A and abs(v[k]) <= 1e-8 * max(scale, 1.0))}


def run_residual(cfg: ResidualConfig = ResidualConfig()) -> dict:
    params = PeakonParams(E=cfg.E, t0=cfg.t0)

    def exact(t, eta):
        return peakon.scaled_exact(params, t, eta)

    rows = []
    ok = True
    for off in cfg.offsets:
        t = cfg.t0 + off
        table = [residual_report(exact, t, n, cfg.dt) for n in cfg.sizes]
        ratios = [a["relative"] / b["relative"] for a, b in zip(table, table[1:])]
        finest = table[-1]["relative"]
        passed = finest <= cfg.max_residual and all(r >= cfg.min_ratio for r in ratios)
        ok &= passed
        rows.append({"name": "scaled_system_residual", "offset": off, "table": table,
                     "ratios": ratios, "passed": bool(passed)})
    centre = _centre_row(params, cfg.t0 + cfg.offsets[0], cfg.sizes[-1])
    rows.append(centre)
    ok &= centre["passed"]
    return {"suite": "residual", "config": asdict(cfg), "rows": rows, "passed": bool(ok)}


# Lipschitz study -----------------------------------------------------------

def _pair(text: str):
    E1, t1, E2, t2 = (float(v) for v in text.split(":"))
    return PeakonParams(E1, t1), PeakonParams(E2, t2)


def _totals(series):
    return np.array([b.total for _, b in series])


def _max_slope(times, values):
    return float(np.max(np.abs(np.diff(values)) / np.diff(times)))


def lipschitz_pair(p1: PeakonParams, p2: PeakonParams, cfg: LipschitzConfig) -> dict:
    times = np.linspace(0.0, cfg.tmax, cfg.samples)
    fine = np.linspace(0.0, cfg.tmax, 2 * cfg.samples - 1)
    series = distance_series(p1, p2, times, cfg.N)
    d = _totals(series)
    K = growth_rate(series)
    bound = d[0] * np.exp(K * (times - times[0]))
    bound_ok = bool(np.all(d <= bound * (1 + 1e-12) + 1e-300))
    # a jump in d would double the largest difference quotient under refinement
    slope_coarse = _max_slope(times, d)
    slope_fine = _max_slope(fine, _totals(distance_series(p1, p2, fine, cfg.N)))
    continuous = slope_fine <= cfg.jump_factor * slope_coarse + 1e-12
    row = {"name": "lipschitz_pair", "E1": p1.E, "t01": p1.t0, "E2": p2.E, "t02": p2.t0,
           "K": K, "d0": float(d[0]), "dmax": float(d.max()), "dmin": float(d.min()),
           "bound_holds": bound_ok, "slope_coarse": slope_coarse, "slope_fine": slope_fine,
           "continuous": bool(continuous), "series": series_csv(series)}
    passed = bound_ok and continuous and np.isfinite(K)
    if cfg.lagrangian:
        runs = []
        for dt in (cfg.dt, 0.5 * cfg.dt):
            tracks = [LagrangianTrack.from_peakon(p, times[0], cfg.particles, dt) for p in (p1, p2)]
            runs.append(_totals(distance_series(tracks[0], tracks[1], times, cfg.N)))
        scale = max(float(d.max()), 1e-300)
        refine = float(np.max(np.abs(runs[0] - runs[1])) / scale)
        agree = float(np.max(np.abs(runs[1] - d)) / scale)
        row.update(refine_gap=refine, closed_form_gap=agree,
                   refine_ok=bool(refine <= cfg.refine_tol and agree <= cfg.refine_tol))
        passed = passed and row["refine_ok"]
    row["passed"] = bool(passed)
    return row


def zero_contrast(params: PeakonParams, cfg: LipschitzConfig) -> dict:
    """The peakon pair against the zero solution: u vanishes at the
    collision, but the distance never drops below the scale A."""
    times = np.linspace(0.0, cfg.tmax, cfg.samples)
    series = distance_series(params, lambda t, n: zero_scaled(n, t), times, cfg.N)
    d = _totals(series)
    near = [eulerian_l2(params, params.t0 + h) for h in (0.1, 0.01, 0.001)]
    at = eulerian_l2(params, params.t0)
    floor = float(np.sqrt(2.0 * params.C))
    passed = bool(at <= 1e-12 and near[0] > near[1] > near[2] and np.all(d >= floor * (1 - 1e-12)))
    return {"name": "zero_contrast", "E": params.E, "t0": params.t0, "eulerian_gap_at_t0": at,
            "eulerian_gap_near_t0": near, "dmin": float(d.min()), "scale": floor, "passed": passed}


def run_lipschitz(cfg: LipschitzConfig = LipschitzConfig()) -> dict:
    rows = []
    same = PeakonParams(2.0, 2.0)
    zero = distance_series(same, same, np.linspace(0.0, cfg.tmax, cfg.samples), cfg.N)
    rows.append({"name": "identical_pair", "max_total": float(_totals(zero).max()),
                 "passed": bool(_totals(zero).max() == 0.0)})
    for pair_text in cfg.pairs:
        rows.append(lipschitz_pair(*_pair(pair_text), cfg))
    rows.append(zero_contrast(PeakonParams(cfg.zero_E, cfg.zero_t0), cfg))
    return {"suite": "lipschitz", "config": asdict(cfg), "rows": rows,
            "passed": all(r["passed"] for r in rows)}


# figure data ---------------------------------------------------------------

EULERIAN = {"u": peakon.u_exact, "G": peakon.G_exact, "p": peakon.p_exact,
            "psqrt": lambda prm, t, x: np.sqrt(peakon.p_exact(prm, t, x))}
RELABELLED = {"Y": peakon.Y_exact, "U": peakon.U_exact, "P": peakon.P_exact,
              "Psqrt": peakon.Psqrt_exact}
SCALED = {"tY": 0, "tU": 1, "tP": 2, "tPsqrt": 2}
FIGURE_IDS = tuple(EULERIAN) + tuple(RELABELLED) + tuple(SCALED) + ("resc",)


def _x_grid(params, t, cfg: FigureConfig):
    gamma = float(np.log(params.phase(t)[1]))
    x = np.linspace(-cfg.x_half_width, cfg.x_half_width, cfg.x_points)
    return np.union1d(x, [-gamma, 0.0, gamma])


def _table(coord, values, branches, extra=()):
    lines = ["coord,value,branch"]
    lines += [f"{c:.12g},{v:.12g},{b}" for c, v, b in zip(coord, values, branches)]
    lines += [f"{c:.12g},{v:.12g},{b}" for c, v, b in extra]
    return "\n".join(lines) + "\n"


def figure_table(figure_id: str, params: PeakonParams, t: float, cfg: FigureConfig) -> str:
    """CSV text for one panel at time ``t``."""
    if figure_id in EULERIAN:
        x = _x_grid(params, t, cfg)
        extra = []
        atoms = peakon.atoms_exact(params, t)
        if figure_id in ("u", "G"):
            extra = [(loc, mass, "atom") for loc, mass in atoms]
        return _table(x, EULERIAN[figure_id](params, t, x), peakon.branch_of_x(params, t, x), extra)
    if figure_id in RELABELLED:
        eta = midpoint_grid(cfg.eta_points, 2.0 * params.C)
        return _table(eta, RELABELLED[figure_id](params, t, eta), peakon.branch_of_eta(params, eta))
    if figure_id in SCALED:
        eta = midpoint_grid(cfg.eta_points)
        fields_ = peakon.scaled_exact(params, t, eta)
        values = fields_[SCALED[figure_id]]
        if figure_id == "tP":
            values = values ** 2
        return _table(eta, values, peakon.branch_of_eta(params, params.A ** 2 * eta))
    raise UnknownFigure(f"unknown figure id {figure_id!r}; choose from {', '.join(FIGURE_IDS)}")


def _resc_tables(cfg: FigureConfig) -> dict[str, str]:
    out = {}
    for C in cfg.resc_energies:
        params = PeakonParams(E=float(np.sqrt(C)), t0=cfg.t0)
        t = cfg.resc_time
        x = _x_grid(params, t, cfg)
        tag = f"C{C:g}"
        out[f"resc_u_{tag}.csv"] = _table(x, peakon.u_exact(params, t, x), peakon.branch_of_x(params, t, x))
        out[f"resc_tG_{tag}.csv"] = _table(x, peakon.scaled_G_exact(params, t, x),
                                           peakon.branch_of_x(params, t, x / params.A))
        eta = midpoint_grid(cfg.eta_points)
        out[f"resc_tY_{tag}.csv"] = _table(eta, peakon.scaled_exact(params, t, eta)[0],
                                           peakon.branch_of_eta(params, params.A ** 2 * eta))
    return out


def figure_tables(figure_id: str, cfg: FigureConfig = FigureConfig()) -> dict[str, str]:
    """File name to CSV text for every panel of a figure."""
    if figure_id not in FIGURE_IDS:
        raise UnknownFigure(f"unknown figure id {figure_id!r}; choose from {', '.join(FIGURE_IDS)}")
    if figure_id == "resc":
        return _resc_tables(cfg)
    params = PeakonParams(E=cfg.E, t0=cfg.t0)
    return {f"{figure_id}_t{t:g}.csv": figure_table(figure_id, params, t, cfg) for t in cfg.times}


def emit_figures(figure_id: str, out_dir: str, cfg: FigureConfig = FigureConfig()) -> list[str]:
    tables = figure_tables(figure_id, cfg)
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name, text in tables.items():
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        paths.append(path)
    return paths


# reporting -----------------------------------------------------------------

def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def report_json(report: dict) -> str:
    return json.dumps(_plain(report), indent=2)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def report_text(report: dict) -> str:
    lines = [f"{report['suite']}: {'PASS' if report['passed'] else 'FAIL'}"]
    for row in report["rows"]:
        keys = [k for k in row if k not in ("name", "passed", "series", "table", "statement")]
        detail = " ".join(f"{k}={_fmt(row[k])}" for k in keys if not isinstance(row[k], (list, dict)))
        lines.append(f"  [{'ok' if row['passed'] else 'FAIL'}] {row['name']} {detail}")
    return "\n".join(lines) + "\n"
