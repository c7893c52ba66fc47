"""Command-line interface: ``tsi-lab <command> [options]``.

Exit codes: 0 success, 1 numerical/internal failure, 2 usage or
precondition error, 3 validation criteria failed.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import os
import sys
import tempfile
import warnings
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from . import validation
from .engineering import (
    CONVENTIONS,
    DEFAULT_CONVENTION,
    build_plan,
    optimize_transmittance,
)
from .errors import DomainError, NormalizationError, TSIError, UndefinedStatistic
from .fidelity import fidelity_sweep
from .maps import MapKind, MapSpec
from .state import build_tsi, photon_distribution
from .stats import HUSIMI_RESOLUTION, husimi_grid, stats_sweep

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2, 3
SWEEP_HEADER = ["N", "p_even", "p_odd", "mean_n", "delta_n", "q", "g2", "dx1", "dx2"]


# -- parsing helpers ---------------------------------------------------------

def parse_seed(text: str):
    """``3/10`` selects exact rational iteration; ``0.3+0.1j`` a complex seed."""
    text = text.strip()
    if "/" in text:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f"invalid rational seed {text!r}") from None
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None


def parse_float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def read_config(path: str) -> Dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment.  Keys use flag names."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


# -- output ------------------------------------------------------------------

def write_output(text: str, path: Optional[str]) -> None:
    if not path or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tsi-lab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def _json(payload: dict, args) -> str:
    if not args.no_meta:
        payload = dict(payload)
        payload["meta"] = {
            "tool": "tsi-lab",
            "version": __version__,
            "command": args.command,
            "generated": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        }
    return json.dumps(payload, indent=2) + "\n"


def _pairs(values, polar: bool, digits: Optional[int] = None) -> List[List[float]]:
    out = []
    for v in np.asarray(values, dtype=complex):
        a, b = (abs(v), float(np.angle(v))) if polar else (v.real, v.imag)
        if digits is not None:
            a, b = round(float(a), digits), round(float(b), digits)
        out.append([float(a), float(b)])
    return out


def map_spec(args) -> MapSpec:
    return MapSpec(args.map, mu=args.mu, seed=args.seed)


def _describe(spec: MapSpec) -> dict:
    return {"kind": spec.kind.value, "mu": float(spec.mu), "seed": str(spec.seed)}


# -- commands ----------------------------------------------------------------

def cmd_state(args) -> int:
    spec = map_spec(args)
    st = build_tsi(spec, args.n)
    p = photon_distribution(st)
    if args.format == "csv":
        if args.polar:
            rows = [[n, repr(float(abs(c))), repr(float(np.angle(c))), repr(float(p[n]))] for n, c in enumerate(st.amplitudes)]
            text = _csv(rows, ["n", "abs", "phase", "p_n"])
        else:
            rows = [[n, repr(float(c.real)), repr(float(c.imag)), repr(float(p[n]))] for n, c in enumerate(st.amplitudes)]
            text = _csv(rows, ["n", "re", "im", "p_n"])
    else:
        text = _json({"map": _describe(spec), "n": args.n, "amplitudes": _pairs(st.amplitudes, args.polar)}, args)
    write_output(text, args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    reports = stats_sweep(map_spec(args), args.n)
    if args.format == "json":
        rows = [
            {"N": r.dim, "p_even": r.p_even, "p_odd": r.p_odd, "mean_n": r.mean_n, "delta_n": r.delta_n,
             "q": r.mandel_q, "g2": r.g2, "dx1": r.dx1, "dx2": r.dx2}
            for r in reports
        ]
        text = _json({"map": _describe(map_spec(args)), "sweep": rows}, args)
    else:
        rows = [
            [r.dim, _fmt(r.p_even), _fmt(r.p_odd), _fmt(r.mean_n), _fmt(r.delta_n), _fmt(r.mandel_q), _fmt(r.g2),
             _fmt(r.dx1), _fmt(r.dx2)]
            for r in reports
        ]
        text = _csv(rows, SWEEP_HEADER)
    write_output(text, args.output)
    return EXIT_OK


def cmd_husimi(args) -> int:
    st = build_tsi(map_spec(args), args.n)
    lo, hi = args.window
    grid = husimi_grid(st, (lo, hi), (lo, hi), args.resolution)
    if args.format == "json":
        text = _json(
            {"re": grid.re_axis.tolist(), "im": grid.im_axis.tolist(), "q": grid.values.tolist(),
             "integral": grid.integral()},
            args,
        )
    else:
        rows = [
            [repr(float(x)), repr(float(y)), repr(float(grid.values[i, j]))]
            for i, y in enumerate(grid.im_axis)
            for j, x in enumerate(grid.re_axis)
        ]
        text = _csv(rows, ["re", "im", "q"])
    write_output(text, args.output)
    return EXIT_OK


def _plan(args):
    st = build_tsi(map_spec(args), args.n)
    T = args.t
    p_star = None
    if args.optimize_t:
        T, p_star = optimize_transmittance(
            st.amplitudes, root_order=args.root_order, cutoff=args.cutoff, convention=args.convention
        )
    plan = build_plan(st.amplitudes, T, root_order=args.root_order, cutoff=args.cutoff, convention=args.convention)
    return st, plan, p_star


def format_plan_table(plan) -> str:
    lines = [f"{'k':>2} {'|beta|':>8} {'phi_beta':>9} {'|alpha|':>8} {'phi_alpha':>10}"]
    for k in range(plan.n + 1):
        if k < plan.n:
            b = plan.betas[k]
            left = f"{abs(b):8.3f} {np.angle(b):9.3f}"
        else:
            left = " " * 18
        a = plan.alphas[k]
        lines.append(f"{k + 1:>2} {left} {abs(a):8.3f} {np.angle(a):10.3f}")
    lines.append(f"T = {plan.transmittance:.4f}  success probability = {plan.success_prob:.6f} ({plan.convention})")
    return "\n".join(lines) + "\n"


def cmd_engineer(args) -> int:
    st, plan, p_star = _plan(args)
    if args.format == "table":
        text = format_plan_table(plan)
    elif args.format == "csv":
        rows = []
        for k in range(plan.n + 1):
            b = _pairs([plan.betas[k]], True, 3)[0] if k < plan.n else ["", ""]
            a = _pairs([plan.alphas[k]], True, 3)[0]
            rows.append([k + 1, *b, *a])
        text = _csv(rows, ["k", "beta_abs", "beta_phase", "alpha_abs", "alpha_phase"])
    else:
        payload = {
            "coefficients": _pairs(st.amplitudes, args.polar),
            "betas": _pairs(plan.betas, True, 3),
            "T": round(plan.transmittance, 6),
            "alphas": _pairs(plan.alphas, True, 3),
            "success_prob": plan.success_prob,
            "convention": plan.convention,
            "cutoff_used": plan.cutoff_used,
        }
        text = _json(payload, args)
    write_output(text, args.output)
    return EXIT_OK


def cmd_fidelity(args) -> int:
    _, plan, _ = _plan(args)
    if args.eta_grid:
        lo, hi, count = args.eta_grid
        etas = list(np.linspace(lo, hi, int(count)))
    else:
        etas = args.eta
    reports = fidelity_sweep(plan, etas, args.cutoff)
    if args.format == "json":
        payload = {
            "T": plan.transmittance,
            "reports": [
                {"eta": r.eta, "fidelity": r.fidelity, "branch_norms": r.branch_norms.tolist(),
                 "branch_overlaps": r.branch_overlaps.tolist()}
                for r in reports
            ],
        }
        text = _json(payload, args)
    else:
        text = _csv([[repr(float(r.eta)), repr(r.fidelity)] for r in reports], ["eta", "fidelity"])
    write_output(text, args.output)
    return EXIT_OK


def cmd_validate(args) -> int:
    keys = args.only or list(validation.CRITERIA)
    unknown = [k for k in keys if k not in validation.CRITERIA]
    if unknown:
        raise DomainError(f"unknown criteria {unknown}; choose from {list(validation.CRITERIA)}")
    if args.list:
        text = "".join(f"{k:<10} {validation.DESCRIPTIONS[k]}\n" for k in keys)
        write_output(text, args.output)
        return EXIT_OK
    results = validation.run_all(keys, t_override=args.t_override)
    out = []
    for r in results:
        out.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.key}: {r.title}")
        if args.verbose or not r.passed:
            out += [f"    {d}" for d in r.details]
    failed = [r.key for r in results if not r.passed]
    out.append(f"{len(results) - len(failed)}/{len(results)} criteria passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    write_output("\n".join(out) + "\n", args.output)
    return EXIT_VALIDATION if failed else EXIT_OK


# -- parser ------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, n_default: int) -> None:
    p.add_argument("--map", choices=[k.value for k in MapKind], default="doubling")
    p.add_argument("--mu", type=float, default=4.0, help="map parameter (ignored by doubling)")
    p.add_argument("--seed", type=parse_seed, default=parse_seed("0.3"), help="C0; use p/q for exact rational iteration")
    p.add_argument("--n", type=int, default=n_default, help="largest Fock index N")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o", default=None, help="output file (atomic write); stdout if omitted")
    p.add_argument("--polar", action="store_true", help="complex values as (magnitude, phase)")
    p.add_argument("--no-meta", action="store_true", help="omit the timestamped meta block from JSON")


def _plan_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t", type=float, default=0.862, help="beam-splitter amplitude transmittance")
    p.add_argument("--optimize-t", action="store_true", help="maximize the success probability over T")
    p.add_argument("--cutoff", type=int, default=None, help="Fock cutoff (default: adaptive)")
    p.add_argument("--root-order", type=parse_int_list, default=None,
                   help="1-based permutation of the canonical root order (descending |beta|, ascending phase)")
    p.add_argument("--convention", choices=CONVENTIONS, default=DEFAULT_CONVENTION,
                   help="success-probability normalization")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsi-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None, help="file of 'key = value' defaults; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="amplitudes of a TSI")
    _common(p, 5)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("sweep", help="photon statistics for N = 0..n")
    _common(p, 50)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("husimi", help="Husimi Q function on a square grid")
    _common(p, 15)
    p.add_argument("--window", type=float, nargs=2, default=[-6.0, 6.0], metavar=("LO", "HI"))
    p.add_argument("--resolution", type=int, default=HUSIMI_RESOLUTION)
    p.set_defaults(func=cmd_husimi)

    p = sub.add_parser("engineer", help="roots, displacements and success probability")
    _common(p, 5)
    _plan_opts(p)
    p.set_defaults(func=cmd_engineer, format="json")
    p._option_string_actions["--format"].choices = ["csv", "json", "table"]

    p = sub.add_parser("fidelity", help="generation fidelity under detector inefficiency")
    _common(p, 5)
    _plan_opts(p)
    p.add_argument("--eta", type=parse_float_list, default=[0.99, 0.95, 0.90], help="comma-separated efficiencies")
    p.add_argument("--eta-grid", type=float, nargs=3, default=None, metavar=("LO", "HI", "COUNT"))
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("validate", help="reproduction criteria report")
    p.add_argument("--list", action="store_true", help="list criteria without running them")
    p.add_argument("--only", type=lambda s: [x.strip() for x in s.split(",") if x.strip()], default=None)
    p.add_argument("--t-override", type=float, default=None, help="use this T for every configuration")
    p.add_argument("--verbose", "-v", action="store_true")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_validate)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config(known.config)
    command = next((a for a in rest if not a.startswith("-")), None)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    if command in subparsers.choices:
        sp = subparsers.choices[command]
        dests = {a.dest for a in sp._actions}
        unknown = set(values) - dests
        if unknown:
            raise DomainError(f"unknown config keys for '{command}': {sorted(unknown)}")
        sp.set_defaults(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, DomainError) as exc:
        print(f"tsi-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except (DomainError, NormalizationError, UndefinedStatistic) as exc:
        print(f"tsi-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TSIError as exc:
        print(f"tsi-lab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as exc:  # noqa: BLE001 - map anything unexpected to exit 1
        print(f"tsi-lab: internal error: {exc!r}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
