"""Command-line front end.

Subcommands: rd (rate-distortion queries), bound (feasibility / lower
bounds), simulate (Monte Carlo vs the closed form), sweep (CSV grids),
verify (the full criteria suite). Every command has a --json twin carrying
the same numbers at full double precision; text output uses nine
significant digits. Exit codes: 0 success, 1 verification or statistical
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .bounds import check_feasibility, minimax_lower_bound, uncoded_distortion
from .model import ChannelParams, DistortionPair, ParameterError, SourceParams
from .rate_distortion import classify_region, conditional_rd, joint_rd
from .simulate import DEFAULT_SEED, SimConfig, simulate_uncoded
from .sweep import SweepSpec, write_sweep_csv
from .verification import run_criteria


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def _grid(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid value: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmacfb",
        description=(
            "Distortion bounds and simulation for a correlated Gaussian source "
            "pair sent over a two-user Gaussian multiple-access channel with "
            "causal feedback."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rd = sub.add_parser("rd", help="rate-distortion function values")
    rd.add_argument("--sigma2", type=float, required=True, help="source variance")
    rd.add_argument("--rho", type=float, required=True, help="source correlation in [0, 1]")
    rd.add_argument("--d1", type=float, required=True, help="MSE target, component 1")
    rd.add_argument("--d2", type=float, required=True, help="MSE target, component 2")
    rd.add_argument("--json", action="store_true", help="machine-readable output")

    bound = sub.add_parser("bound", help="converse bound or feasibility test")
    bound.add_argument("--sigma2", type=float, required=True)
    bound.add_argument("--rho", type=float, required=True)
    bound.add_argument("--n", type=float, required=True, help="noise variance")
    bound.add_argument("--p", type=float, help="common power (symmetric case)")
    bound.add_argument("--p1", type=float, help="power of user 1 (general case)")
    bound.add_argument("--p2", type=float, help="power of user 2 (general case)")
    bound.add_argument("--d1", type=float, help="MSE target 1 (general case)")
    bound.add_argument("--d2", type=float, help="MSE target 2 (general case)")
    bound.add_argument("--json", action="store_true")

    sim = sub.add_parser("simulate", help="Monte Carlo run of the uncoded scheme")
    sim.add_argument("--sigma2", type=float, required=True)
    sim.add_argument("--rho", type=float, required=True)
    sim.add_argument("--p", type=float, required=True, help="per-user power")
    sim.add_argument("--n", type=float, required=True, help="noise variance")
    sim.add_argument("--symbols", type=int, required=True, help="number of source pairs")
    sim.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED})")
    sim.add_argument("--chunks", type=int, default=1, help="independent substreams")
    sim.add_argument("--json", action="store_true")

    sweep = sub.add_parser("sweep", help="bound-vs-scheme grid to CSV")
    sweep.add_argument("--sigma2", type=float, default=1.0)
    sweep.add_argument("--n", type=float, default=1.0, help="noise variance")
    sweep.add_argument("--rho-grid", type=_grid, required=True, help="comma-separated rho values")
    sweep.add_argument("--snr-grid", type=_grid, required=True, help="comma-separated P/N values")
    sweep.add_argument("--out", required=True, help="output CSV path")
    sweep.add_argument("--json", action="store_true")

    verify = sub.add_parser("verify", help="run the verification criteria")
    mode = verify.add_mutually_exclusive_group()
    mode.add_argument("--quick", dest="scale", action="store_const", const="quick")
    mode.add_argument("--full", dest="scale", action="store_const", const="full")
    verify.set_defaults(scale="quick")
    verify.add_argument("--json", action="store_true")

    return parser


def _cmd_rd(args: argparse.Namespace) -> int:
    source = SourceParams(args.sigma2, args.rho)
    pair = DistortionPair(args.d1, args.d2)
    region = classify_region(source, pair)
    payload = {
        "region": region.value,
        "joint_bits": joint_rd(source, pair),
        "cond1_bits": conditional_rd(source, args.d1),
        "cond2_bits": conditional_rd(source, args.d2),
    }
    if args.json:
        print(json.dumps(payload))
    else:
        print(f"region = {payload['region']}")
        for key in ("joint_bits", "cond1_bits", "cond2_bits"):
            print(f"{key} = {_fmt(payload[key])}")
    return 0


def _cmd_bound(args: argparse.Namespace) -> int:
    general_flags = [args.p1, args.p2, args.d1, args.d2]
    if args.p is not None and any(v is not None for v in general_flags):
        raise ParameterError("use either --p (symmetric) or --p1/--p2/--d1/--d2 (general), not both")
    if args.p is None and any(v is None for v in general_flags):
        raise ParameterError("general case needs all of --p1 --p2 --d1 --d2")

    source = SourceParams(args.sigma2, args.rho)
    if args.p is not None:
        res = minimax_lower_bound(source, args.p, args.n)
        payload = {
            "lower_bound": res.lower_bound,
            "rho_star": res.rho_star,
            "active": res.active,
        }
        if args.json:
            print(json.dumps(payload))
        else:
            print(f"lower_bound = {_fmt(res.lower_bound)}")
            print(f"rho_star = {_fmt(res.rho_star)}")
            print(f"active = {res.active}")
        return 0

    channel = ChannelParams(args.p1, args.p2, args.n)
    res = check_feasibility(source, channel, DistortionPair(args.d1, args.d2))
    payload = {
        "feasible": res.feasible,
        "rho_interval": list(res.rho_interval) if res.rho_interval else None,
        "witness": res.witness,
    }
    if args.json:
        print(json.dumps(payload))
    elif res.feasible:
        print("feasible = true")
        print(f"rho_interval = [{_fmt(res.rho_interval[0])}, {_fmt(res.rho_interval[1])}]")
        print(f"witness = {_fmt(res.witness)}")
    else:
        print("feasible = false")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    if args.symbols < 1:
        raise ParameterError("symbols must be >= 1")
    source = SourceParams(args.sigma2, args.rho)
    cfg = SimConfig(num_blocks=args.symbols, block_len=1, seed=args.seed, chunking=args.chunks)
    report = simulate_uncoded(source, args.p, args.n, cfg)
    d_u = uncoded_distortion(source, args.p, args.n)

    def z_score(d_hat: float, stderr: float) -> float:
        if stderr == 0.0:
            return 0.0 if d_hat == d_u else float("inf")
        return (d_hat - d_u) / stderr

    z1 = z_score(report.d1_hat, report.stderr_d1)
    z2 = z_score(report.d2_hat, report.stderr_d2)
    payload = dataclasses.asdict(report)
    payload.update({"d_uncoded": d_u, "z1": z1, "z2": z2, "seed": args.seed})
    if args.json:
        print(json.dumps(payload))
    else:
        for key in (
            "d1_hat", "d2_hat", "stderr_d1", "stderr_d2",
            "p1_hat", "p2_hat", "rho_tilde_hat",
        ):
            print(f"{key} = {_fmt(getattr(report, key))}")
        print(f"d_uncoded = {_fmt(d_u)}")
        print(f"z1 = {_fmt(z1)}")
        print(f"z2 = {_fmt(z2)}")
    if max(abs(z1), abs(z2)) > 4.0:
        print("simulation disagrees with the analytic uncoded distortion (|z| > 4)", file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = SweepSpec(
        rho_grid=args.rho_grid,
        snr_grid=args.snr_grid,
        sigma2=args.sigma2,
        n0=args.n,
    )
    rows = write_sweep_csv(spec, args.out)
    if args.json:
        print(json.dumps({"path": args.out, "rows": rows}))
    else:
        print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    results = run_criteria(args.scale)
    if args.json:
        print(json.dumps([dataclasses.asdict(r) for r in results]))
    else:
        for res in results:
            status = "PASS" if res.passed else "FAIL"
            print(f"{status} {res.name}: {res.detail}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


_HANDLERS = {
    "rd": _cmd_rd,
    "bound": _cmd_bound,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())
