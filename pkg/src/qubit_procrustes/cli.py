"""Command line front end: ``pair``, ``sweep``, ``verify`` and ``channel-info``.

Exit codes: 0 success, 1 usage error, 2 invalid state or channel,
3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channels import CHANNEL_GRAMMAR, ball_check, make_channel, parse_channel
from .errors import ConsistencyError, QubitProcrustesError
from .metrics import CROSS_CHECK_TOL, report_from_overlap
from .procrustes import optimal_overlap
from .qstate import as_bloch, density_from_bloch, uhlmann_fidelity
from .sweep import (
    SweepSpec,
    bloch_from_angles,
    format_real,
    preset_states,
    rows_to_csv,
    run_sweep,
)
from .verify import DEFAULT_SAMPLES, SUITES, run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_VERIFY = 3

# tolerance used to report fixed points and unitality
_FIX_TOL = 1e-12


class UsageError(Exception):
    pass


class InvalidArgument(Exception):
    """A state or channel argument that parses but is not valid."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _reals(text: str, count: int, what: str) -> list:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count:
        raise InvalidArgument(f"{what}: expected {count} comma-separated reals, got {text!r}")
    out = []
    for p in parts:
        try:
            x = float(p)
        except ValueError:
            raise InvalidArgument(f"{what}: {p!r} is not a plain real number (angles are radians)") from None
        if not math.isfinite(x):
            raise InvalidArgument(f"{what}: non-finite value {p!r}")
        out.append(x)
    return out


def parse_state(text: str) -> np.ndarray:
    """``phi=..,theta=..,r=..`` in radians."""
    vals = {}
    for tok in text.split(","):
        key, eq, val = tok.partition("=")
        key = key.strip()
        if not eq or key not in ("phi", "theta", "r") or key in vals:
            raise InvalidArgument(f"state must look like phi=<rad>,theta=<rad>,r=<len>; got {text!r}")
        vals[key] = _reals(val, 1, key)[0]
    if len(vals) != 3:
        raise InvalidArgument(f"state needs phi, theta and r; got {text!r}")
    return bloch_from_angles(vals["phi"], vals["theta"], vals["r"])


def parse_param(text: str):
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"--param must be name:start:stop:count, got {text!r}")
    name = parts[0].strip()
    try:
        start, stop = float(parts[1]), float(parts[2])
        count = int(parts[3])
    except ValueError:
        raise UsageError(f"--param must be name:start:stop:count, got {text!r}") from None
    if count < 2:
        raise UsageError("--param count must be at least 2")
    return name, start, stop, count


# -- pair ------------------------------------------------------------------

def _pair_fields(r, s) -> dict:
    res = optimal_overlap(r, s)
    f = uhlmann_fidelity(density_from_bloch(r), density_from_bloch(s))
    if abs(res.g_star - math.sqrt(f)) > CROSS_CHECK_TOL:
        raise ConsistencyError(f"g* = {res.g_star!r} but sqrt(F) = {math.sqrt(f)!r}")
    rep = report_from_overlap(res)
    out = {
        "r": [float(x) for x in r],
        "s": [float(x) for x in s],
        "g_star": rep.g_star,
        "fidelity": rep.fidelity,
        "d_n": rep.d_n,
        "bures": rep.bures,
        "bures_angle": rep.bures_angle,
        "root_infidelity": rep.root_infidelity,
        "theta": rep.theta,
        "axis": res.axis.tolist(),
        "degenerate": rep.degenerate,
        "singular_values": res.singular_values.tolist(),
        "s_star": res.s_star.tolist(),
        "u_star_re": res.u_star.real.tolist(),
        "u_star_im": res.u_star.imag.tolist(),
    }
    return out


def _flatten(fields: dict) -> list:
    flat = []
    for key, val in fields.items():
        if isinstance(val, bool):
            flat.append((key, "true" if val else "false"))
        elif isinstance(val, list):
            arr = np.asarray(val, dtype=float)
            if arr.ndim == 1:
                for i, x in enumerate(arr):
                    flat.append((f"{key}_{'xyz'[i] if arr.size == 3 else i}", format_real(x)))
            else:
                for (i, j), x in np.ndenumerate(arr):
                    flat.append((f"{key}_{i}{j}", format_real(x)))
        else:
            flat.append((key, format_real(val)))
    return flat


def cmd_pair(args) -> int:
    if args.state:
        if len(args.state) != 2 or args.vectors:
            raise UsageError("pair takes two vectors or exactly two --state options")
        r, s = (parse_state(t) for t in args.state)
    else:
        if len(args.vectors) != 2:
            raise UsageError("pair takes two Bloch vectors x,y,z (or two --state options)")
        r, s = (np.array(_reals(v, 3, "Bloch vector")) for v in args.vectors)
    r, s = as_bloch(r), as_bloch(s)
    fields = _pair_fields(r, s)
    fmt = args.format or "kv"
    if fmt == "json":
        print(json.dumps(fields, indent=2))
    elif fmt == "csv":
        flat = _flatten(fields)
        print(",".join(k for k, _ in flat))
        print(",".join(v for _, v in flat))
    else:
        for key, val in _flatten(fields):
            print(f"{key}={val}")
    return EXIT_OK


# -- sweep -----------------------------------------------------------------

def cmd_sweep(args) -> int:
    if args.channel is None or args.param is None:
        raise UsageError("sweep needs --channel and --param")
    pname, start, stop, count = parse_param(args.param)
    try:
        name, fixed = parse_channel(args.channel, allow_missing=(pname,))
    except QubitProcrustesError as exc:
        raise InvalidArgument(str(exc)) from None
    if name == "affine":
        raise InvalidArgument("affine channels have no sweepable parameter\n" + CHANNEL_GRAMMAR)
    if args.state and args.preset:
        raise UsageError("use either --state or --preset, not both")
    states = [parse_state(t) for t in args.state] if args.state else preset_states(args.preset or "radii")
    if args.format not in (None, "csv"):
        raise UsageError("sweep writes csv only")
    try:
        spec = SweepSpec(channel=name, fixed=fixed, param=pname, start=start, stop=stop,
                         count=count, states=tuple(states), reference=args.reference)
    except QubitProcrustesError as exc:
        raise UsageError(str(exc)) from None
    rows = run_sweep(spec)
    text = rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.figures:
        try:
            from .figures import render_sweep
            stem = Path(args.out).stem if args.out else f"{name}_{pname}"
            paths = render_sweep(rows, pname, args.figures, stem)
        except ImportError:
            print("--figures needs matplotlib (pip install 'artifact[figures]')", file=sys.stderr)
            return EXIT_USAGE
        for p in paths:
            print(f"wrote {p}", file=sys.stderr)
    return EXIT_OK


# -- verify ----------------------------------------------------------------

def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if args.samples is not None and args.samples < 1:
        raise UsageError("--samples must be positive")
    ok = True
    for name in names:
        res = run_suite(name, args.samples, args.seed)
        status = "PASS" if res.passed else "FAIL"
        print(f"{name}: {status} max_violation={res.max_violation:.3e} "
              f"samples={res.samples} seed={res.seed}")
        for c in res.checks:
            print(f"  {'ok  ' if c.passed else 'FAIL'} {c.label}: {c.value:.3e} (tol {c.tol:.0e})")
        ok = ok and res.passed
    return EXIT_OK if ok else EXIT_VERIFY


# -- channel-info ----------------------------------------------------------

def z_axis_fixed_points(m, c):
    """Fixed points of ``r -> M r + c`` on the z axis: ``'axis'``, a list of z values, or ``[]``."""
    col = np.array([m[0][2], m[1][2], m[2][2] - 1.0])
    rhs = -np.asarray(c, dtype=float)
    if np.max(np.abs(col)) <= _FIX_TOL:
        return "axis" if np.max(np.abs(rhs)) <= _FIX_TOL else []
    z = float(col @ rhs / (col @ col))
    if np.max(np.abs(col * z - rhs)) <= _FIX_TOL and abs(z) <= 1.0 + _FIX_TOL:
        return [z]
    return []


def cmd_channel_info(args) -> int:
    spec = args.spec or args.channel
    if not spec:
        raise UsageError("channel-info needs a channel spec")
    try:
        chan = make_channel(*parse_channel(spec))
    except QubitProcrustesError as exc:
        raise InvalidArgument(str(exc)) from None
    fixed = z_axis_fixed_points(chan.m, chan.c)
    worst = ball_check(chan, seed=args.seed)
    print(f"channel={spec}")
    for i in range(3):
        print(f"m_row_{i}=" + ",".join(format_real(x) for x in chan.m[i]))
    print("c=" + ",".join(format_real(x) for x in chan.c))
    print(f"unital={'true' if np.linalg.norm(chan.c) < _FIX_TOL else 'false'}")
    print(f"symmetric={'true' if np.allclose(chan.m, chan.m.T, atol=_FIX_TOL, rtol=0) else 'false'}")
    if fixed == "axis":
        print("z_axis_fixed_points=entire axis")
    elif fixed:
        print("z_axis_fixed_points=" + ";".join(f"(0,0,{format_real(z)})" for z in fixed))
    else:
        print("z_axis_fixed_points=none")
    print(f"ball_check_max_norm={format_real(worst)}")
    print(f"ball_check={'pass' if worst <= 1.0 + 1e-9 else 'fail'}")
    return EXIT_OK


# -- entry -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qubit-procrustes",
                description="Optimal qubit purification overlaps, D_N and the misalignment angle.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    pp = sub.add_parser("pair", help="full report for one pair of Bloch vectors")
    pp.add_argument("vectors", nargs="*", metavar="x,y,z",
                    help="two Bloch vectors (write '--' first if one starts with '-')")
    pp.add_argument("--state", action="append", default=[], help="phi=..,theta=..,r=.. (radians)")
    pp.add_argument("--format", choices=("kv", "json", "csv"))

    ps = sub.add_parser("sweep", help="sweep one channel parameter over input states, csv output")
    ps.add_argument("--channel", help="channel spec; the swept parameter may be left out")
    ps.add_argument("--param", help="name:start:stop:count")
    ps.add_argument("--state", action="append", default=[], help="phi=..,theta=..,r=.. (repeatable)")
    ps.add_argument("--preset", choices=("radii", "angles"),
                    help="built-in input family (default radii when no --state)")
    ps.add_argument("--reference", choices=("ideal-not",),
                    help="compare the channel output with sigma_x rho sigma_x instead of rho")
    ps.add_argument("--out", help="csv path (default stdout)")
    ps.add_argument("--seed", type=int, default=0, help="accepted for uniformity; sweeps are deterministic")
    ps.add_argument("--format", choices=("csv",))
    ps.add_argument("--figures", metavar="DIR", help="also render D_N and Theta plots (needs matplotlib)")

    pv = sub.add_parser("verify", help="run an invariant suite")
    pv.add_argument("suite", choices=(*SUITES, "all"))
    pv.add_argument("--samples", type=int,
                    help="sample count (defaults: " + ", ".join(f"{k}={v}" for k, v in DEFAULT_SAMPLES.items()) + ")")
    pv.add_argument("--seed", type=int, default=0)

    pc = sub.add_parser("channel-info", help="affine data and basic properties of a channel")
    pc.add_argument("spec", nargs="?", help="channel spec, e.g. ad:g=0.5")
    pc.add_argument("--channel", help="same as the positional spec")
    pc.add_argument("--seed", type=int, default=0, help="seed for the ball-preservation sample")
    return p


_COMMANDS = {
    "pair": cmd_pair,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "channel-info": cmd_channel_info,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 1 on bad usage (see _Parser) and 0 for --help / --version
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidArgument, QubitProcrustesError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConsistencyError as exc:
        print(f"consistency check failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
