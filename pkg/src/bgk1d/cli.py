"""Command-line entry point.

Subcommands:

* ``bgk run <config-file> [--override key=value ...]`` -- execute one
  configured run and write fields.csv / entropy.csv / report.json;
* ``bgk table1 --scheme S2 --tau 1e-2`` -- smooth-flow convergence table
  against a fine nested reference, written as errors.csv;
* ``bgk riemann`` -- Riemann run plus the exact Euler (gamma = 3) reference
  profile;
* ``bgk sweep-cfl`` -- CFL-robustness comparison of the S schemes against a
  small-CFL reference run.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import harness
from .phase_grid import R_GAS
from .riemann import EulerState, exact_riemann_euler

GAMMA_1D = 3.0  # fluid limit of the one-degree-of-freedom gas


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bgk", description="1D BGK benchmark driver")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a config file")
    p_run.add_argument("config", type=Path)
    p_run.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")

    p_tab = sub.add_parser("table1", help="smooth-flow convergence table")
    p_tab.add_argument("--scheme", default="S2", choices=("S1", "S2", "S3"))
    p_tab.add_argument("--tau", type=float, default=1.0e-2)
    p_tab.add_argument("--cfl", type=float, default=4.5)
    p_tab.add_argument("--nx", type=int, nargs="+", default=[20, 40, 80, 160, 320])
    p_tab.add_argument("--nx-ref", type=int, default=1280)
    p_tab.add_argument("--out", type=Path, default=Path("results"))
    p_tab.add_argument("--cache", type=Path, default=None, help="reference cache directory")

    p_rie = sub.add_parser("riemann", help="Riemann run vs exact Euler solution")
    p_rie.add_argument("--nx", type=int, default=300)
    p_rie.add_argument("--cfl", type=float, default=4.5)
    p_rie.add_argument("--tau", type=float, default=1.0e-6)
    p_rie.add_argument("--scheme", default="Conservative", choices=harness.SCHEMES)
    p_rie.add_argument("--out", type=Path, default=Path("results"))

    p_cfl = sub.add_parser("sweep-cfl", help="CFL robustness table")
    p_cfl.add_argument("--cfls", type=float, nargs="+", default=[1.5, 5.5, 10.5])
    p_cfl.add_argument("--cfl-ref", type=float, default=0.5)
    p_cfl.add_argument("--nx", type=int, default=200)
    p_cfl.add_argument("--tau", type=float, default=1.0e-2)
    p_cfl.add_argument("--out", type=Path, default=Path("results"))

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except Exception as exc:  # surface solver errors with context, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.command == "run":
        config = harness.load_config(args.config)
        config = harness.apply_overrides(config, args.override)
        report = harness.run(config)
        drift = ", ".join(f"{k}={v:.3e}" for k, v in report.conservation.items())
        print(f"{config.scheme}: {report.steps} steps in {report.wall_time:.2f}s; drift {drift}")
        return 0

    if args.command == "table1":
        args.out.mkdir(parents=True, exist_ok=True)
        base = harness.SolverConfig(scheme=args.scheme, tau=args.tau, CFL=args.cfl)
        reference = harness.reference_run(replace(base, N_x=args.nx_ref), cache_dir=args.cache)
        runs = [harness.run(replace(base, N_x=n)) for n in args.nx]
        table = harness.error_table(runs, reference)
        harness.write_errors_csv(table, args.out / "errors.csv")
        for i, n in enumerate(table.n_x):
            err = table.errors["rho"][i]
            order = "" if i == 0 else f"  order {table.orders['rho'][i - 1]:.3f}"
            print(f"N_x={n:5d}  rho_err={err:.5e}{order}")
        return 0

    if args.command == "riemann":
        config = harness.riemann_defaults(
            scheme=args.scheme, N_x=args.nx, CFL=args.cfl, tau=args.tau, out_dir=str(args.out)
        )
        report = harness.run(config)
        left = EulerState(config.rho_left, config.u_left, config.rho_left * R_GAS * config.T_left)
        right = EulerState(config.rho_right, config.u_right, config.rho_right * R_GAS * config.T_right)
        xi = (report.x - config.x_split) / config.t_final
        rho, u, p = exact_riemann_euler(left, right, GAMMA_1D, xi)
        lines = ["x,rho,u,p"]
        lines += [
            ",".join(f"{v:.17g}" for v in row) for row in zip(report.x, rho, u, p)
        ]
        (args.out / "exact.csv").write_bytes(("\n".join(lines) + "\n").encode())
        l1 = np.sum(np.abs(report.fields.rho - rho)) * (report.x[1] - report.x[0])
        print(f"L1 density error vs exact Euler: {l1:.4f}")
        return 0

    if args.command == "sweep-cfl":
        args.out.mkdir(parents=True, exist_ok=True)
        lines = ["scheme,CFL,rho_err,u_err,T_err"]
        for scheme in ("S1", "S2", "S3"):
            base = harness.SolverConfig(scheme=scheme, N_x=args.nx, tau=args.tau)
            ref = harness.run(replace(base, CFL=args.cfl_ref))
            for cfl in args.cfls:
                rep = harness.run(replace(base, CFL=cfl))
                errs = [
                    float(np.max(np.abs(getattr(rep.fields, f) - getattr(ref.fields, f))))
                    for f in ("rho", "u", "T")
                ]
                lines.append(f"{scheme},{cfl:g}," + ",".join(f"{e:.17g}" for e in errs))
                print(f"{scheme} CFL={cfl:<5g} Linf(rho,u,T) = " + " ".join(f"{e:.3e}" for e in errs))
        (args.out / "cfl_sweep.csv").write_bytes(("\n".join(lines) + "\n").encode())
        return 0

    raise ValueError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    raise SystemExit(main())
