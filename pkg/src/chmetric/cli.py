"""Command-line entry point.

Exit status: 0 on success, 1 when a verification check fails, 2 on usage
errors (bad flags, unreadable config, unknown figure id).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, replace

import numpy as np

from . import experiments, peakon
from .errors import ChmetricError, UnknownFigure
from .lagrangian import evolve, init_from_eulerian, relabel_to_new, xavier_residual
from .metric import distance, scaled_peakon
from .peakon import PeakonParams
from .transform import build_transformed, rescale


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--E", type=float, default=2.0, help="amplitude parameter, energy E^2")
    common.add_argument("--t0", type=float, default=2.0, help="collision time")
    common.add_argument("--t", type=float, default=1.0, help="evaluation (or start) time")
    common.add_argument("--tmax", type=float, default=None, help="end time for evolve")
    common.add_argument("--dt", type=float, default=1e-3, help="time step")
    common.add_argument("--N", type=int, default=4096, help="grid size")
    common.add_argument("--out", default=None, help="directory for machine-readable output")
    common.add_argument("--config", default=None, help="key=value config file or 'default'")
    common.add_argument("--E2", type=float, default=None, help="second solution amplitude")
    common.add_argument("--t02", type=float, default=None, help="second solution collision time")
    common.add_argument("--id", dest="figure", default=None, help="figure id")
    common.add_argument("--threads", type=int, default=None, help="cap on worker threads")
    parser = argparse.ArgumentParser(prog="chmetric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [("fields", "sample the Eulerian peakon fields"),
                       ("transform", "relabel sampled fields and compare with the closed form"),
                       ("evolve", "particle evolution from --t to --tmax"),
                       ("residual", "residual of the rescaled system"),
                       ("metric", "distance between two peakon solutions at --t"),
                       ("lipschitz", "distance series and growth-rate study"),
                       ("invariants", "inequality catalog across the test grid"),
                       ("figures", "CSV data for a figure id")]:
        sub.add_parser(name, parents=[common], help=text)
    return parser


def _threads(args) -> int:
    raw = args.threads if args.threads is not None else os.environ.get("CHMETRIC_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError(f"thread count must be an integer, got {raw!r}") from exc
    if n < 1:
        raise UsageError("thread count must be positive")
    import numba
    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
    return n


def _write(args, name: str, text: str):
    if args.out is None:
        return None
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def _config(cls, args):
    try:
        return experiments.load_config(cls, args.config)
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot read config: {exc}") from exc


def _params(args) -> PeakonParams:
    try:
        return PeakonParams(E=args.E, t0=args.t0)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _g(v) -> str:
    return f"{v:.12g}"


def cmd_fields(args) -> int:
    params = _params(args)
    s = peakon.sample_snapshot(params, args.t, args.N)
    _write(args, f"fields_t{args.t:g}.json", s.to_json())
    print(f"t={_g(args.t)} nodes={s.x.size} energy={_g(s.total_mass())} C={_g(s.C)} "
          f"max|u|={_g(float(np.max(np.abs(s.u))))} atoms={len(s.atoms)}")
    return 0


def cmd_transform(args) -> int:
    params = _params(args)
    ts = build_transformed(peakon.sample_snapshot(params, args.t, args.N), args.N)
    exact = [f(params, args.t, ts.eta) for f in (peakon.Y_exact, peakon.U_exact, peakon.Psqrt_exact)]
    gaps = [float(np.max(np.abs(a - b))) for a, b in zip((ts.Y, ts.U, ts.Psqrt), exact)]
    _write(args, f"transform_t{args.t:g}.csv", ts.to_csv())
    _write(args, f"scaled_t{args.t:g}.csv", rescale(ts).to_csv())
    print(f"t={_g(args.t)} sup-gap Y={_g(gaps[0])} U={_g(gaps[1])} Psqrt={_g(gaps[2])}")
    return 0 if max(gaps) <= 1e-3 else 1


def cmd_evolve(args) -> int:
    params = _params(args)
    t_end = args.tmax if args.tmax is not None else args.t + 1.0
    state = init_from_eulerian(peakon.sample_snapshot(params, args.t, 8192), args.N)
    x0 = xavier_residual(state)
    e0 = state.energy()
    worst = [x0]
    end = evolve(state, t_end, args.dt, callback=lambda st: worst.append(xavier_residual(st)))
    gap = float(np.max(np.abs(end.U - peakon.u_exact(params, t_end, end.y))))
    drift = abs(end.energy() - e0)
    _write(args, f"lagrangian_t{t_end:g}.json", end.to_json())
    if args.out is not None:
        _write(args, f"relabelled_t{t_end:g}.csv", relabel_to_new(end, args.N).to_csv())
    ok = gap <= 1e-3 and drift <= 1e-6 * params.C and max(worst) <= 5 * x0 + 1e-14
    print(f"t={_g(args.t)}->{_g(t_end)} u-gap={_g(gap)} energy-drift={_g(drift)} "
          f"xavier-initial={_g(x0)} xavier-max={_g(max(worst))}")
    return 0 if ok else 1


def _suite(args, cls, runner, name, **overrides):
    cfg = _config(cls, args)
    if overrides:
        cfg = replace(cfg, **overrides)
    report = runner(cfg)
    _write(args, f"{name}.json", experiments.report_json(report))
    _write(args, f"{name}.txt", experiments.report_text(report))
    sys.stdout.write(experiments.report_text(report))
    return 0 if report["passed"] else 1


def cmd_metric(args) -> int:
    p1 = _params(args)
    p2 = PeakonParams(E=args.E2 if args.E2 is not None else args.E,
                      t0=args.t02 if args.t02 is not None else args.t0)
    b = distance(scaled_peakon(p1, args.t, args.N), scaled_peakon(p2, args.t, args.N))
    _write(args, "distance.json", json.dumps(asdict(b)))
    print(f"t={_g(args.t)} dY={_g(b.dY)} dU={_g(b.dU)} dP={_g(b.dP)} dA={_g(b.dA)} total={_g(b.total)}")
    return 0


def cmd_figures(args) -> int:
    if args.figure is None:
        raise UsageError("figures needs --id")
    cfg = _config(experiments.FigureConfig, args)
    out = args.out if args.out is not None else "."
    paths = experiments.emit_figures(args.figure, out, cfg)
    for p in paths:
        print(p)
    return 0


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        threads = _threads(args)
        if args.command == "fields":
            return cmd_fields(args)
        if args.command == "transform":
            return cmd_transform(args)
        if args.command == "evolve":
            return cmd_evolve(args)
        if args.command == "metric":
            return cmd_metric(args)
        if args.command == "figures":
            return cmd_figures(args)
        if args.command == "residual":
            return _suite(args, experiments.ResidualConfig, experiments.run_residual, "residual")
        if args.command == "lipschitz":
            return _suite(args, experiments.LipschitzConfig, experiments.run_lipschitz, "lipschitz")
        return _suite(args, experiments.InvariantsConfig, experiments.run_invariants, "invariants",
                      threads=threads)
    except (UsageError, UnknownFigure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ChmetricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
