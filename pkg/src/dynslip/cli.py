"""Command line entry point ``dynslip``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import constitutive as cg
from . import galerkin, periodic, shear
from .errors import NumericalError, ValidationError
from .figures import reproduce_figure
from .io import read_config, render_csv, write_csv
from .spectral import SlipParams, build_basis, count_negative_modes, eigen_condition
from .verify import format_table, run_suite

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


def _emit(args, header, columns, scenario, params, extra=None):
    if args.out in (None, "-"):
        sys.stdout.write(render_csv(header, zip(*[np.asarray(c).tolist() for c in columns]), {"scenario": scenario}))
        return
    rec = write_csv(args.out, header, columns, scenario, params, extra)
    print(f"wrote {rec.path} sha256={rec.checksum}", file=sys.stderr)


def _slip(args):
    return SlipParams(args.alpha, args.beta, args.h)


def _param_map(args, **more):
    out = {"alpha": args.alpha, "beta": args.beta, "h": args.h, "modes": args.modes}
    out.update(more)
    return out


def cmd_eigen(args):
    p = _slip(args)
    b = build_basis(p, args.modes)
    lam = b.lambdas
    cols = [
        np.arange(1, args.modes + 1),
        lam,
        b.amplitudes,
        p.beta * lam**2 - p.alpha,
        np.asarray(eigen_condition(p, lam)),
    ]
    header = ["index", "lambda", "amplitude", "defect_sign_factor", "residual"]
    _emit(args, header, cols, "eigen", _param_map(args), {"negative_modes": count_negative_modes(p)})


def cmd_shear(args):
    p = _slip(args)
    t = shear.response_grid(args.t_end, args.samples)
    if args.delta == 0:
        wall = np.asarray(shear.boundary_slip_limit(p, args.modes, t))
        delta = "limit"
    else:
        scen = shear.ShearScenario(p, args.modes, args.delta)
        wall = np.asarray(shear.solution(scen, t, p.h))
        delta = args.delta
    params = _param_map(args, delta=delta, t_end=args.t_end)
    _emit(args, ["t", "wall_velocity", "relative_slip"], [t, wall, 1.0 - wall], "shear", params)


def cmd_periodic(args):
    p = _slip(args)
    T = args.period
    t = T * np.arange(args.samples + 1) / args.samples
    scen = periodic.PeriodicScenario(p, T, args.modes)
    cols = [t, periodic.wall_shear(scen, t), periodic.dirichlet_wall_shear(p.h, T, args.modes, t)]
    _emit(args, ["t", "wall_shear", "dirichlet_wall_shear"], cols, "periodic", _param_map(args, period=T))


def _number(cfg, key, default):
    raw = cfg.get(key)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(f"config key {key!r} must be a number, got {raw!r}")


def galerkin_config(cfg: dict) -> galerkin.GalerkinConfig:
    """Build a solver configuration from flat config keys."""
    known = {
        "alpha", "beta", "h", "modes", "dt", "t_end", "integrator", "forcing", "delta", "period",
        "graph", "nu", "alpha_star", "r", "eps", "boundary_graph", "gamma", "q", "ledger_rule",
    }
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    params = SlipParams(_number(cfg, "alpha", 0.0), _number(cfg, "beta", 0.0), _number(cfg, "h", math.pi))

    kind = cfg.get("graph", "linear")
    nu = _number(cfg, "nu", 1.0)
    if kind == "linear":
        graph = cg.Linear(nu)
    elif kind == "powerlaw":
        graph = cg.PowerLaw(nu, _number(cfg, "alpha_star", 0.0), _number(cfg, "r", 2.0))
    else:
        raise ValidationError(f"graph must be linear or powerlaw, got {kind!r}")
    if "eps" in cfg:
        graph = cg.Regularized(graph, _number(cfg, "eps", 0.0))

    bkind = cfg.get("boundary_graph", "navier")
    if bkind == "navier":
        boundary = cg.NavierLinear(_number(cfg, "gamma", 1.0))
    elif bkind == "powerslip":
        boundary = cg.PowerLawSlip(_number(cfg, "gamma", 1.0), _number(cfg, "q", 2.0))
    else:
        raise ValidationError(f"boundary_graph must be navier or powerslip, got {bkind!r}")

    fkind = cfg.get("forcing", "none")
    if fkind == "shear":
        forcing = galerkin.ShearRamp(_number(cfg, "delta", 0.01))
    elif fkind == "periodic":
        forcing = galerkin.PeriodicPressure(_number(cfg, "period", 2 * math.pi))
    elif fkind == "none":
        forcing = None
    else:
        raise ValidationError(f"forcing must be shear, periodic or none, got {fkind!r}")

    modes = _number(cfg, "modes", 10)
    if modes != int(modes):
        raise ValidationError("modes must be an integer")
    return galerkin.GalerkinConfig(
        params,
        int(modes),
        graph,
        boundary,
        forcing,
        dt=_number(cfg, "dt", 1e-4),
        t_end=_number(cfg, "t_end", 1.0),
        integrator=cfg.get("integrator", "RK4"),
        ledger_rule=cfg.get("ledger_rule", "stage"),
    )


def cmd_galerkin(args):
    if not args.config:
        raise ValidationError("galerkin needs --config FILE")
    cfg = read_config(args.config)
    config = galerkin_config(cfg)
    traj, ledger = galerkin.run(config)
    residual = galerkin.energy_report(traj, ledger)
    header = ["t"] + [f"c_{i}" for i in range(1, config.n_modes + 1)] + ["energy_residual"]
    cols = [traj.t] + list(traj.c.T) + [residual]
    _emit(args, header, cols, "galerkin", dict(sorted(cfg.items())))


def cmd_figure(args):
    if args.id is None:
        raise ValidationError("figure needs --id")
    out_dir = args.out_dir or args.out or "."
    for rec in reproduce_figure(args.id, out_dir, args.samples, args.modes):
        print(f"{rec.path} {rec.checksum}")


def cmd_verify(args):
    checks = run_suite(args.suite)
    print(format_table(checks))
    if not all(c.passed for c in checks):
        return EXIT_NUMERICAL
    return EXIT_OK


COMMANDS = {
    "eigen": cmd_eigen,
    "shear": cmd_shear,
    "periodic": cmd_periodic,
    "galerkin": cmd_galerkin,
    "figure": cmd_figure,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=10.0)
    common.add_argument("--beta", type=float, default=0.5)
    common.add_argument("--h", type=float, default=math.pi)
    common.add_argument("--modes", type=int, default=10)
    common.add_argument("--out", help="output CSV path (stdout when omitted)")

    parser = argparse.ArgumentParser(prog="dynslip", description="Dynamic slip channel flows: series solutions and checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eigen", parents=[common], help="eigenvalues and amplitudes")
    p = sub.add_parser("shear", parents=[common], help="wall velocity of the ramped-wall flow")
    p.add_argument("--delta", type=float, default=0.0, help="ramp time; 0 selects the instantaneous limit")
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=200)
    p = sub.add_parser("periodic", parents=[common], help="wall shear of the pressure-driven flow")
    p.add_argument("--period", type=float, default=2 * math.pi)
    p.add_argument("--samples", type=int, default=200)
    p = sub.add_parser("galerkin", parents=[common], help="Galerkin run from a config file")
    p.add_argument("--config")
    p = sub.add_parser("figure", parents=[common], help="CSV files for one figure")
    p.add_argument("--id", type=int)
    p.add_argument("--out-dir")
    p.add_argument("--samples", type=int, default=200)
    p = sub.add_parser("verify", parents=[common], help="run a self-check suite")
    p.add_argument("--suite", default="all")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
