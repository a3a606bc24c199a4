"""Command-line front end: solve, verify, sample, field, stability, xcheck.

Every command is reproducible: identical flags and seeds produce
byte-identical output files (no timestamps in file bodies).  Exit codes:

    0   success
    1   assertion failure (a residual bound did not hold)
    2   flagged or empty result (report still emitted)
    3   degenerate model (H = 0)
    64  usage error
    65  data format error
"""

from __future__ import annotations

import argparse
import json
import sys

from . import field as field_mod
from . import gkm, levy, ssfm, stability, verify

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_FLAGGED = 2
EXIT_DEGENERATE = 3
EXIT_USAGE = 64
EXIT_DATA = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _complex_flag(text: str) -> complex:
    """Parse 're,im' into a complex number."""
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("complex flags use 're,im'")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _write_json(path: str | None, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_parser() -> _Parser:
    parser = _Parser(prog="stochnls", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the coefficient-matching system")
    p.add_argument("--H", type=_complex_flag, required=True)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--seeds", type=int, default=200)
    p.add_argument("--rng-seed", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="verify a catalog case or a set file")
    p.add_argument("--case", type=int, default=None)
    p.add_argument("--set", dest="set_file", default=None)
    p.add_argument("--H", type=_complex_flag, default=None)
    p.add_argument("--B0", type=_complex_flag, default=1.0 + 0j)
    p.add_argument("--B1", type=_complex_flag, default=None)
    p.add_argument("--k", type=_complex_flag, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("sample", help="sample one noise path to CSV")
    p.add_argument("--drift", type=float, default=0.0)
    p.add_argument("--diffusion", type=float, default=0.0)
    p.add_argument("--rate", type=float, default=0.0)
    p.add_argument("--jump-mean", type=float, default=None)
    p.add_argument("--jump-sd", type=float, default=None)
    p.add_argument("--jump-size", type=float, default=None)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--rng-seed", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("field", help="evaluate a field grid to CSV + JSON")
    p.add_argument("--case", type=int, required=True)
    p.add_argument("--H", type=_complex_flag, required=True)
    p.add_argument("--B0", type=_complex_flag, default=1.0 + 0j)
    p.add_argument("--B1", type=_complex_flag, default=None)
    p.add_argument("--A-const", type=_complex_flag, default=1.0 + 0j)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--x1", type=float, default=1.0)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--nx", type=int, default=16)
    p.add_argument("--nt", type=int, default=8)
    p.add_argument("--drift", type=float, default=0.0)
    p.add_argument("--diffusion", type=float, default=1.0)
    p.add_argument("--rate", type=float, default=0.0)
    p.add_argument("--jump-size", type=float, default=1.0)
    p.add_argument("--path-step", type=float, default=0.01)
    p.add_argument("--rng-seed", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("stability", help="momentum diagnostic and verdict")
    p.add_argument("--case", type=int, required=True)
    p.add_argument("--H", type=_complex_flag, required=True)
    p.add_argument("--B0", type=_complex_flag, default=1.0 + 0j)
    p.add_argument("--B1", type=_complex_flag, default=None)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--lambda", dest="lambda_target", default="upsilon",
                   choices=stability.LAMBDA_TARGETS)
    p.add_argument("--convention", default="modulus",
                   choices=["modulus", "literal"])
    p.add_argument("--interval", type=float, nargs=2, default=[-10.0, 10.0])
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--out", default=None)

    p = sub.add_parser("xcheck", help="cross-check a case against the "
                                      "split-step integrator")
    p.add_argument("--case", type=int, required=True)
    p.add_argument("--H", type=_complex_flag, required=True)
    p.add_argument("--B0", type=_complex_flag, default=1.0 + 0j)
    p.add_argument("--B1", type=_complex_flag, default=None)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--length", type=float, default=8.0)
    p.add_argument("--modes", type=int, default=256)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--t-end", type=float, default=0.5)
    p.add_argument("--norm", default="L2", choices=["L2", "Linf"])
    p.add_argument("--drift", type=float, default=0.0)
    p.add_argument("--diffusion", type=float, default=0.0)
    p.add_argument("--rate", type=float, default=0.0)
    p.add_argument("--jump-size", type=float, default=1.0)
    p.add_argument("--path-step", type=float, default=0.01)
    p.add_argument("--rng-seed", type=int, default=None)
    p.add_argument("--out", default=None)

    return parser


def _sample_spec(args, horizon: float) -> levy.LevySpec:
    if args.jump_mean is not None or args.jump_sd is not None:
        if args.jump_mean is None or args.jump_sd is None:
            raise UsageError("normal jumps need both --jump-mean and --jump-sd")
        law: levy.JumpLaw = levy.NormalJumps(args.jump_mean, args.jump_sd)
    else:
        law = levy.ConstantJumps(args.jump_size if args.jump_size is not None
                                 else 1.0)
    return levy.LevySpec(drift=args.drift, diffusion=args.diffusion,
                         jump_rate=args.rate, jump_law=law, horizon=horizon)


def _cmd_solve(args) -> int:
    if args.M < 1:
        raise UsageError("--M must be >= 1")
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    try:
        roots = gkm.solve_system(args.H, seeds=args.seeds,
                                 rng_seed=args.rng_seed,
                                 shape=gkm.balanced_shape(args.M))
    except gkm.DegenerateModelError as exc:
        print(f"degenerate model: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    records = [gkm.coefficient_set_record(cs, args.H) for cs in roots]
    _write_json(args.out, records)
    if not roots:
        print("no convergent start produced a nontrivial root",
              file=sys.stderr)
        return EXIT_FLAGGED
    return EXIT_OK


def _cmd_verify(args) -> int:
    if (args.case is None) == (args.set_file is None):
        raise UsageError("verify needs exactly one of --case or --set")
    if args.case is not None:
        if not 1 <= args.case <= 12:
            raise UsageError("--case must be in 1..12")
        if args.H is None:
            raise UsageError("--H is required with --case")
        if args.H == 0:
            print("degenerate model: H = 0", file=sys.stderr)
            return EXIT_DEGENERATE
        report = verify.verification_report(args.case, args.H, B0=args.B0,
                                            B1=args.B1, k=args.k)
        _write_json(args.out, report)
        if args.case in gkm.FLAGGED_CASES:
            return EXIT_FLAGGED
        return EXIT_OK if report["passed"] else EXIT_ASSERTION

    try:
        with open(args.set_file) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read set file: {exc}", file=sys.stderr)
        return EXIT_DATA
    if isinstance(payload, dict):
        payload = [payload]
    reports = []
    try:
        for record in payload:
            cs, H = gkm.coefficient_set_from_record(record)
            reports.append(verify.set_report(cs, H))
    except (ValueError, TypeError) as exc:
        print(f"malformed set file: {exc}", file=sys.stderr)
        return EXIT_DATA
    _write_json(args.out, reports)
    if not reports:
        return EXIT_FLAGGED
    return EXIT_OK if all(r["passed"] for r in reports) else EXIT_ASSERTION


def _cmd_sample(args) -> int:
    if args.rng_seed is None:
        raise UsageError("--rng-seed is required: sampling is random")
    spec = _sample_spec(args, args.horizon)
    path = levy.sample_path(spec, args.step, args.rng_seed)
    levy.write_path_csv(path, args.out)
    return EXIT_OK


def _cmd_field(args) -> int:
    if not 1 <= args.case <= 12:
        raise UsageError("--case must be in 1..12")
    if args.sigma != 0.0 and args.rng_seed is None:
        raise UsageError("--rng-seed is required when sigma != 0")
    if args.H == 0:
        print("degenerate model: H = 0", file=sys.stderr)
        return EXIT_DEGENERATE
    if args.H.imag != 0:
        raise UsageError("field grids need a real H (the phase must stay real)")
    cs = gkm.case_coefficients(args.case, args.H, B0=args.B0, B1=args.B1)
    params = gkm.params_for_H(args.H.real, alpha=args.alpha, rho=args.rho,
                              sigma=args.sigma)
    frame = field_mod.frame_for(cs, params, A_const=args.A_const)
    path = None
    if args.sigma != 0.0:
        spec = _sample_spec(args, max(args.t1, 1e-9))
        path = levy.sample_path(spec, args.path_step, args.rng_seed)
    grid = field_mod.field_grid(cs, params, frame, path,
                                (args.x0, args.x1), (args.t0, args.t1),
                                args.nx, args.nt,
                                provenance_label=f"case-{args.case}")
    field_mod.write_field_csv(grid, args.out)
    field_mod.write_provenance_json(grid, args.out + ".json")
    return EXIT_FLAGGED if args.case in gkm.FLAGGED_CASES else EXIT_OK


def _cmd_stability(args) -> int:
    if not 1 <= args.case <= 12:
        raise UsageError("--case must be in 1..12")
    if args.H == 0:
        print("degenerate model: H = 0", file=sys.stderr)
        return EXIT_DEGENERATE
    if args.H.imag != 0:
        raise UsageError("stability sweeps need a real H")
    convention = ("modulus_squared" if args.convention == "modulus"
                  else "literal_square")
    cfg = stability.StabilityConfig(interval=tuple(args.interval),
                                    quadrature_points=args.points,
                                    lambda_target=args.lambda_target,
                                    integrand_convention=convention)
    params = gkm.params_for_H(args.H.real, alpha=args.alpha, rho=args.rho,
                              sigma=args.sigma)
    report = stability.stability_report(args.case, params, cfg, B0=args.B0,
                                        B1=args.B1)
    _write_json(args.out, report)
    return EXIT_FLAGGED if args.case in gkm.FLAGGED_CASES else EXIT_OK


def _cmd_xcheck(args) -> int:
    if not 1 <= args.case <= 12:
        raise UsageError("--case must be in 1..12")
    if args.sigma != 0.0 and args.rng_seed is None:
        raise UsageError("--rng-seed is required when sigma != 0")
    if args.H == 0:
        print("degenerate model: H = 0", file=sys.stderr)
        return EXIT_DEGENERATE
    if args.H.imag != 0:
        raise UsageError("xcheck needs a real H")
    params = gkm.params_for_H(args.H.real, alpha=args.alpha, rho=args.rho,
                              sigma=args.sigma)
    grid = ssfm.SimGrid(domain_length=args.length, n_modes=args.modes,
                        dt=args.dt, t_end=args.t_end)
    path = None
    if args.sigma != 0.0:
        spec = _sample_spec(args, args.t_end)
        path = levy.sample_path(spec, args.path_step, args.rng_seed)
    report = ssfm.xcheck_case(args.case, params, grid, path=path,
                              norm=args.norm, B0=args.B0, B1=args.B1)
    payload = {
        "case": args.case,
        "testable": report.testable,
        "reason": report.reason,
        "pole_locations": list(report.pole_locations),
        "errors": report.errors,
        "norm": report.norm,
    }
    _write_json(args.out, payload)
    if not report.testable:
        return EXIT_FLAGGED
    return EXIT_OK


_COMMANDS = {
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "sample": _cmd_sample,
    "field": _cmd_field,
    "stability": _cmd_stability,
    "xcheck": _cmd_xcheck,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except argparse.ArgumentTypeError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
