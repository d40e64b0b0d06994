"""Command-line surface: certify, sweep, simulate, geometry."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import kernels
from .certify import SearchConfig, certify
from .core import BcnfParams
from .errors import BcnfChaosError, FailureC1, FailureC2
from .export import certificate_document, format_certificate, geometry_document, write_json
from .sweep import SweepSpec, default_workers, write_sweep

DIVERGENCE_GUARD = 1e8


def _add_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tau-l", type=float, required=True, dest="tau_L")
    parser.add_argument("--tau-r", type=float, required=True, dest="tau_R")
    parser.add_argument("--delta-l", type=float, required=True, dest="delta_L")
    parser.add_argument("--delta-r", type=float, required=True, dest="delta_R")


def _add_search(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beta-min", type=float, default=0.01)
    parser.add_argument("--beta-step", type=float, default=0.01)
    parser.add_argument("--beta-max", type=float, default=5.0)
    parser.add_argument("--r-max", type=int, default=15)
    parser.add_argument("--l-max", type=int, default=15, dest="ell_max")


def _search_config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(
        beta_min=args.beta_min,
        beta_step=args.beta_step,
        beta_max=args.beta_max,
        r_max=args.r_max,
        ell_max=args.ell_max,
    )


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected LO:HI:COUNT, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if count < 1:
        raise argparse.ArgumentTypeError("COUNT must be >= 1")
    return lo, hi, count


def _parse_point(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected X1,X2, got {text!r}")
    return float(parts[0]), float(parts[1])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcnfchaos",
        description="Certified chaos detection for the planar border-collision normal form.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cert = sub.add_parser("certify", help="certify one parameter point")
    _add_params(cert)
    _add_search(cert)
    cert.add_argument("--out", type=str, default=None, help="also write the certificate here")

    swp = sub.add_parser("sweep", help="certify a parameter grid")
    swp.add_argument("--tau-l", type=_parse_range, required=True, dest="tau_L_range",
                     metavar="LO:HI:COUNT",
                     help="endpoint-inclusive grid; write --tau-l=LO:HI:COUNT when LO is negative")
    swp.add_argument("--tau-r", type=_parse_range, required=True, dest="tau_R_range",
                     metavar="LO:HI:COUNT",
                     help="endpoint-inclusive grid; write --tau-r=LO:HI:COUNT when LO is negative")
    swp.add_argument("--delta-l", type=float, required=True, dest="delta_L")
    swp.add_argument("--delta-r", type=float, required=True, dest="delta_R")
    _add_search(swp)
    swp.add_argument("--workers", type=int, default=None)
    swp.add_argument("--out", type=str, required=True)

    sim = sub.add_parser("simulate", help="iterate an orbit and write its points")
    _add_params(sim)
    sim.add_argument("--n", type=int, default=5000)
    sim.add_argument("--transient", type=int, default=0)
    sim.add_argument("--x0", type=_parse_point, default=(0.0, 0.0), metavar="X1,X2")
    sim.add_argument("--out", type=str, default=None, help="default: standard output")

    geo = sub.add_parser("geometry", help="export plot-ready construction data")
    _add_params(geo)
    _add_search(geo)
    geo.add_argument("--beta", type=float, default=None,
                     help="use this seed instead of scanning")
    geo.add_argument("--out", type=str, default=None, help="default: standard output")

    return parser


def cmd_certify(args: argparse.Namespace) -> int:
    m = BcnfParams(args.tau_L, args.tau_R, args.delta_L, args.delta_R)
    try:
        cert = certify(m, _search_config(args))
    except (BcnfChaosError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = format_certificate(cert)
    print(text)
    if args.out:
        write_json(certificate_document(cert), args.out)
    return 0 if cert.chi_chaos else 1


def cmd_sweep(args: argparse.Namespace) -> int:
    workers = args.workers if args.workers is not None else default_workers()
    try:
        spec = SweepSpec(
            tau_L_range=args.tau_L_range,
            tau_R_range=args.tau_R_range,
            delta_L=args.delta_L,
            delta_R=args.delta_R,
            search=_search_config(args),
            workers=workers,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    cells = write_sweep(spec, args.out)
    certified = sum(cell.chi_chaos for cell in cells)
    print(f"{len(cells)} cells -> {args.out} ({certified} certified)")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.n < 1 or args.transient < 0:
        print("error: need n >= 1 and transient >= 0", file=sys.stderr)
        return 2
    total = args.transient + args.n
    out = np.empty((total, 2), dtype=float)
    wrote = kernels.simulate_into(
        args.tau_L, args.tau_R, args.delta_L, args.delta_R,
        float(args.x0[0]), float(args.x0[1]), total, DIVERGENCE_GUARD, out,
    )
    if wrote < total:
        print(
            f"error: orbit norm exceeded {DIVERGENCE_GUARD:g} after {wrote + 1} iterates",
            file=sys.stderr,
        )
        return 3
    lines = ["x1,x2"]
    lines.extend(
        f"{repr(row[0] + 0.0)},{repr(row[1] + 0.0)}" for row in out[args.transient:].tolist()
    )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_geometry(args: argparse.Namespace) -> int:
    m = BcnfParams(args.tau_L, args.tau_R, args.delta_L, args.delta_R)
    try:
        doc = geometry_document(m, beta=args.beta, cfg=_search_config(args))
    except (FailureC1, FailureC2) as exc:
        print(f"error: {exc.stage}: {exc}", file=sys.stderr)
        return 1
    except (BcnfChaosError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        write_json(doc, args.out)
        print(f"geometry -> {args.out}")
    else:
        import json

        print(json.dumps(doc, indent=2))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "certify": cmd_certify,
        "sweep": cmd_sweep,
        "simulate": cmd_simulate,
        "geometry": cmd_geometry,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
