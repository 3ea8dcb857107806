"""Command-line interface: ``qcoherence compute | verify | demo``.

Exit codes: 0 ok, 1 verification failure, 2 usage or input error,
3 validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import coherence as coh
from . import io as qio
from . import twoslit, verify
from .entropy import quantum_rel_entropy, von_neumann
from .numlin import ValidationError
from .qobj import is_compatible, luders_state

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3
INTERFERENCE_TOL = 1e-8


class UsageError(Exception):
    pass


def log_base(bits: bool) -> tuple[float, str]:
    if bits:
        return 2.0, "bits"
    env = os.environ.get("COHERENCE_LOG_BASE", "e").strip().lower()
    if env == "e":
        return math.e, "nats"
    if env == "2":
        return 2.0, "bits"
    raise UsageError(f"COHERENCE_LOG_BASE must be 'e' or '2', got {env!r}")


def parse_dims(text: str) -> tuple[int, int]:
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            break
    else:
        lo = hi = text
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dimension range must look like 2..8, got {text!r}") from None
    if lo_i < 1 or hi_i < lo_i:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}")
    return lo_i, hi_i


def cmd_compute(args) -> int:
    base, unit = log_base(args.bits)
    rho = qio.read_state(args.state)
    A = qio.read_observable(args.observable)
    if A.dim != rho.dim:
        raise ValidationError(f"state has dimension {rho.dim}, observable {A.dim}")

    conv = 1.0 / math.log(base)
    rho_L = luders_state(A, rho)
    ic_entropy = (von_neumann(rho_L) - von_neumann(rho)) * conv
    ic_relative = quantum_rel_entropy(rho, rho_L) * conv
    ic = coh.coherence_information(A, rho, base)
    dec = coh.entropy_decomposition(A, rho, base)
    skew = coh.skew_information(rho, A, args.skew_p)
    out = {
        "dim": rho.dim,
        "outcomes": len(A),
        "unit": unit,
        "compatible": is_compatible(A, rho, args.tol),
        "coherence_information": ic,
        "coherence_information_entropy_difference": ic_entropy,
        "coherence_information_relative_entropy": ic_relative,
        "route_agreement": abs(ic_entropy - ic_relative),
        "state_entropy": dec.state_entropy,
        "uncertainty": dec.uncertainty,
        "conditional_entropy": dec.conditional_entropy,
        "decomposition_residual": dec.residual,
        "skew_information": skew,
        "skew_p": args.skew_p,
    }
    if args.luders_out:
        qio.write_matrix(args.luders_out, rho_L.matrix)

    if args.json:
        print(json.dumps(out, sort_keys=True))
        return EXIT_OK
    w = 36
    print(f"{'dimension':<{w}}{out['dim']}")
    print(f"{'outcomes':<{w}}{out['outcomes']}")
    print(f"{'compatible':<{w}}{'yes' if out['compatible'] else 'no'}")
    print(f"{'S(rho)':<{w}}{dec.state_entropy:.6f} {unit}")
    print(f"{'S(A,rho)':<{w}}{dec.uncertainty:.6f} {unit}")
    print(f"{'sum p_l S(P_l rho P_l / p_l)':<{w}}{dec.conditional_entropy:.6f} {unit}")
    print(f"{'I_C via S(rho_L) - S(rho)':<{w}}{ic_entropy:.6f} {unit}")
    print(f"{'I_C via S(rho || rho_L)':<{w}}{ic_relative:.6f} {unit}")
    print(f"{'route agreement':<{w}}{out['route_agreement']:.1e}")
    print(f"{'decomposition residual':<{w}}{dec.residual:.1e}")
    print(f"{f'skew information (p={args.skew_p:g})':<{w}}{skew:.6f}  (depends on eigenvalues)")
    print(f"I_C = {ic:.6f} {unit}")
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; valid: all, {', '.join(verify.SUITES)}")
    reports = []
    t0 = time.perf_counter()
    for name in names:
        rep = verify.run_suite(name, args.trials, args.dims, args.seed, args.tol)
        reports.append(rep)
        if not args.json:
            print(rep.to_line())
    elapsed = time.perf_counter() - t0
    ok = all(r.passed for r in reports)
    if args.json:
        print(json.dumps([r.to_dict() for r in reports], sort_keys=True))
    else:
        print(f"# {sum(r.passed for r in reports)}/{len(reports)} suites passed in {elapsed:.2f} s")

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "reports.json").write_text(json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=1) + "\n")
        (out / "reports.txt").write_text("\n".join(r.to_line() for r in reports) + "\n")
        from .plotting import plot_residuals

        plot_residuals(reports, out / "residuals.png")
    return EXIT_OK if ok else EXIT_FAIL


def run_demo(grid: int, time_: float, polarizers: bool, separation=None, width=None, mass: float = 1.0) -> dict:
    """Build the model, evolve both sources and summarize the comparison."""
    model = twoslit.build_model(grid, separation, width, mass, time_, polarizers)
    coherent = twoslit.screen_pattern(model, "coherent")
    luders = twoslit.screen_pattern(model, "luders")
    l1, modulation = twoslit.fringe_contrast(coherent, luders)
    return {
        "model": model,
        "coherent": coherent,
        "luders": luders,
        "summary": {
            "grid": grid,
            "time": time_,
            "mass": mass,
            "slit_separation": model.slit_separation,
            "slit_width": model.slit_width,
            "polarizers": polarizers,
            "spatial_state_compatible": is_compatible(model.spatial_slits, model.spatial_state),
            "coherence_information_nats": coh.coherence_information(model.slits, model.rho),
            "l1_gap": l1,
            "modulation": modulation,
            "max_pattern_difference": float(np.max(np.abs(coherent - luders))),
            "interference": l1 > INTERFERENCE_TOL,
        },
    }


def cmd_demo(args) -> int:
    cfg = twoslit.default_config()
    grid = cfg["grid"] if args.grid is None else args.grid
    scale = grid / cfg["grid"]
    separation = args.separation if args.separation is not None else cfg["slit_separation"] * scale
    width = args.width if args.width is not None else cfg["slit_width"] * scale
    time_ = cfg["time"] * scale**2 if args.time is None else args.time
    mass = cfg["mass"] if args.mass is None else args.mass
    try:
        res = run_demo(grid, time_, args.polarizers, separation, width, mass)
    except ValidationError as e:
        raise UsageError(str(e)) from None
    s = res["summary"]

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        qio.write_columns(out / "coherent.txt", res["coherent"], "cell\tprobability (coherent)")
        qio.write_columns(out / "luders.txt", res["luders"], "cell\tprobability (Lüders)")
        doc = {"summary": s, "coherent": res["coherent"].tolist(), "luders": res["luders"].tolist()}
        (out / "patterns.json").write_text(json.dumps(doc, sort_keys=True) + "\n")
        from .plotting import plot_patterns

        title = f"N={grid}, t={time_:g}" + (", polarizers" if args.polarizers else "")
        plot_patterns(res["coherent"], res["luders"], out / "patterns.png", title)

    if args.json:
        print(json.dumps(s, sort_keys=True))
    else:
        for k in ("grid", "time", "slit_separation", "slit_width", "polarizers", "spatial_state_compatible"):
            print(f"{k:<28}{s[k]}")
        print(f"{'coherence_information_nats':<28}{s['coherence_information_nats']:.6f}")
        print(f"{'l1_gap':<28}{s['l1_gap']:.6e}")
        print(f"{'modulation':<28}{s['modulation']:.6e}")
        print(f"interference: {'yes' if s['interference'] else 'no'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcoherence", description="Coherence information toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="coherence information of an observable in a state")
    c.add_argument("state", help="state JSON file")
    c.add_argument("observable", help="observable JSON file")
    c.add_argument("--bits", action="store_true", help="report in bits")
    c.add_argument("--tol", type=float, default=1e-8, help="commutator tolerance for the compatibility flag")
    c.add_argument("--skew-p", type=float, default=0.5, help="skew information exponent in (0, 1)")
    c.add_argument("--luders-out", help="write the Lüders state to this JSON file")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="run randomized property suites")
    v.add_argument("--suite", default="all", help=f"one of: all, {', '.join(verify.SUITES)}")
    v.add_argument("--trials", type=int, default=verify.DEFAULT_TRIALS)
    v.add_argument("--dims", type=parse_dims, default=verify.DEFAULT_DIMS, help="dimension range, e.g. 2..8")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=float, default=None, help="override each suite's tolerance")
    v.add_argument("--json", action="store_true")
    v.add_argument("--out", help="directory for reports and residual figure")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("demo", help="two-slit interference versus the Lüders state")
    d.add_argument("--grid", type=int, default=None)
    d.add_argument("--time", type=float, default=None)
    d.add_argument("--separation", type=float, default=None)
    d.add_argument("--width", type=float, default=None)
    d.add_argument("--mass", type=float, default=None)
    d.add_argument("--polarizers", action="store_true")
    d.add_argument("--out", help="directory for pattern files and figure")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
