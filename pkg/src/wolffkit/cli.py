"""Command-line front end: classify, eval, verify, atlas, iterate.

Exit codes: 0 success, 2 bad arguments, 3 quadrature failure,
4 construction mode unavailable or parameters not admissible,
5 verification failed.
"""

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .asymptotics import iterate_liouville
from .constructions import BoundednessVerdict, Mode, build_pair, coefficient_ratios, verify_decay_class
from .core import SystemParams, classify, criticality_gap
from .errors import (DegenerateProduct, InvalidParameters, ModeUnavailable, NotAdmissible,
                     QuadratureFailure, WolffkitError)
from .wolff import QuadratureSpec, power_pair_density, wolff_profile

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_QUADRATURE = 3
EXIT_MODE = 4
EXIT_VERIFY = 5

PARAM_FLAGS = ("n", "beta", "gamma", "p", "q", "s1", "s2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# formatting

def _num(x):
    """Shortest round-trip text for a float; non-finite values become null."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


def _csv_field(x):
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return repr(float(x))


# --------------------------------------------------------------------------
# argument handling

def _read_config(path):
    """key = value lines; '#' starts a comment.  Keys are flag names without dashes."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc.strerror}") from None
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


def _add_params(sp, with_pq=True):
    sp.add_argument("--n", type=int, help="dimension (integer >= 3)")
    sp.add_argument("--beta", type=float)
    sp.add_argument("--gamma", type=float)
    if with_pq:
        sp.add_argument("--p", type=float)
        sp.add_argument("--q", type=float)
    sp.add_argument("--s1", type=float, help="sigma1")
    sp.add_argument("--s2", type=float, help="sigma2")
    sp.add_argument("--allow-nonconvention", action="store_true",
                    help="accept sigma_i <= -beta*gamma")


def _add_quad(sp):
    sp.add_argument("--rel-tol", type=float, default=1e-8)
    sp.add_argument("--max-subdivisions", type=int, default=2000)


def _add_threads(sp):
    sp.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: $WOLFFKIT_THREADS or CPU count)")


def build_parser():
    parser = _Parser(prog="wolffkit", description="Wolff potentials and Wolff-type integral systems")
    parser.add_argument("--version", action="version", version=f"wolffkit {__version__}")
    parser.add_argument("--config", help="key=value file supplying default flag values")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("classify", help="regime of a parameter set")
    _add_params(sp)
    sp.add_argument("--format", choices=("json", "table"), default="json")

    sp = sub.add_parser("eval", help="Wolff potential of r^sigma (1+r^2)^(-theta*power)")
    sp.add_argument("--n", type=int)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--sigma", type=float, default=0.0)
    sp.add_argument("--power", type=float, default=1.0)
    sp.add_argument("--radii", help="comma separated radii")
    sp.add_argument("--range", dest="radius_range", help="lo:hi:count, log spaced (lo > 0)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_quad(sp)
    _add_threads(sp)

    sp = sub.add_parser("verify", help="check an explicit slow or fast solution pair")
    _add_params(sp)
    sp.add_argument("--mode", choices=("slow", "fast"))
    sp.add_argument("--rate-tol", type=float, default=0.02)
    sp.add_argument("--log-tol", type=float, default=0.10)
    _add_quad(sp)

    sp = sub.add_parser("atlas", help="regime grid over (p, q)")
    _add_params(sp, with_pq=False)
    sp.add_argument("--p-range", help="lo:hi:steps")
    sp.add_argument("--q-range", help="lo:hi:steps")
    _add_threads(sp)

    sp = sub.add_parser("iterate", help="exponent recursion of the Liouville argument")
    _add_params(sp)
    sp.add_argument("--a-start", type=float, default=None)
    sp.add_argument("--max-iter", type=int, default=200)
    sp.add_argument("--no-stop", action="store_true", help="run all max-iter steps")
    return parser


def _parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a command is required (classify, eval, verify, atlas, iterate)")
    if args.config:
        conf = _read_config(args.config)
        # Flags given on the command line win over the config file.
        sub = parser._subparsers._group_actions[0].choices[args.command]
        for action in sub._actions:
            if action.dest in conf and getattr(args, action.dest) == action.default:
                raw = conf[action.dest]
                if isinstance(action, argparse._StoreTrueAction):
                    value = raw.lower() in ("1", "true", "yes", "on")
                elif action.type is not None:
                    try:
                        value = action.type(raw)
                    except ValueError:
                        raise UsageError(f"config value for {action.dest!r} is not valid: {raw!r}") from None
                else:
                    value = raw
                if action.choices is not None and value not in action.choices:
                    raise UsageError(f"config value for {action.dest!r} must be one of "
                                     f"{', '.join(map(str, action.choices))}")
                setattr(args, action.dest, value)
    return args


def _require(args, names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"missing required flag --{name.replace('_', '-')}")


def _params(args):
    _require(args, PARAM_FLAGS)
    return SystemParams(args.n, args.beta, args.gamma, args.p, args.q, args.s1, args.s2,
                        allow_nonconvention=args.allow_nonconvention)


def _threads(args):
    if getattr(args, "threads", None) is not None:
        value = args.threads
    elif os.environ.get("WOLFFKIT_THREADS"):
        try:
            value = int(os.environ["WOLFFKIT_THREADS"])
        except ValueError:
            raise UsageError("WOLFFKIT_THREADS must be an integer") from None
    else:
        value = os.cpu_count() or 1
    if value < 1:
        raise UsageError("--threads must be >= 1")
    return value


def _range(text, flag, log=False):
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except (AttributeError, ValueError):
        raise UsageError(f"{flag} must look like lo:hi:steps") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise UsageError(f"{flag}: need lo < hi")
    if steps < 2:
        raise UsageError(f"{flag}: need steps >= 2")
    if log:
        if lo <= 0:
            raise UsageError(f"{flag}: log spacing needs lo > 0")
        return np.logspace(math.log10(lo), math.log10(hi), steps)
    return np.linspace(lo, hi, steps)


def _quad(args):
    return QuadratureSpec(rel_tol=args.rel_tol, max_subdivisions=args.max_subdivisions)


# --------------------------------------------------------------------------
# commands

def _report_dict(params, report):
    return {
        "command": "classify",
        "params": {"n": params.n, "beta": params.beta, "gamma": params.gamma, "p": params.p,
                   "q": params.q, "sigma1": params.sigma1, "sigma2": params.sigma2},
        "regime": report.regime.value,
        "reason": report.reason,
        "q0": _num(report.q0),
        "p0": _num(report.p0),
        "max_rate": _num(report.max_rate),
        "a0": _num(report.a0),
        "criticality_gap": _num(report.criticality),
        "convention_holds": report.convention_holds,
    }


def cmd_classify(args, out):
    params = _params(args)
    data = _report_dict(params, classify(params))
    if args.format == "json":
        out.write(_dump_json(data))
    else:
        for key in ("regime", "reason", "q0", "p0", "max_rate", "a0", "criticality_gap",
                    "convention_holds"):
            value = data[key]
            text = "" if value is None else (repr(value) if isinstance(value, float) else str(value))
            out.write(f"{key:<17} {text}\n")
    return EXIT_OK


def _radii(args):
    if (args.radii is None) == (args.radius_range is None):
        raise UsageError("give exactly one of --radii and --range")
    if args.radii is not None:
        try:
            radii = np.array([float(s) for s in args.radii.split(",") if s.strip()])
        except ValueError:
            raise UsageError("--radii must be a comma separated list of numbers") from None
        if radii.size == 0 or np.any(radii < 0) or not np.all(np.isfinite(radii)):
            raise UsageError("--radii must be finite and >= 0")
        return radii
    return _range(args.radius_range, "--range", log=True)


def cmd_eval(args, out):
    _require(args, ("n", "beta", "gamma", "theta"))
    radii = _radii(args)
    f = power_pair_density(args.theta, args.sigma, args.power, args.n)
    quad = _quad(args)
    workers = min(_threads(args), radii.size)
    chunks = np.array_split(radii, workers)
    if workers == 1:
        values = [wolff_profile(f, args.beta, args.gamma, radii, quad)]
    else:
        with ThreadPoolExecutor(workers) as pool:
            values = list(pool.map(lambda c: wolff_profile(f, args.beta, args.gamma, c, quad), chunks))
    values = np.concatenate(values)
    if args.format == "csv":
        out.write("r,value\n")
        for r, w in zip(radii, values):
            out.write(f"{r:.17g},{w:.17g}\n")
    else:
        out.write(_dump_json({"command": "eval",
                              "rows": [{"r": _num(r), "value": _num(w)}
                                       for r, w in zip(radii, values)]}))
    return EXIT_OK


def _rel_err(value, target):
    return abs(value - target) / abs(target) if target else abs(value)


def cmd_verify(args, out):
    params = _params(args)
    _require(args, ("mode",))
    quad = _quad(args)
    pair = build_pair(params, Mode(args.mode))
    report = coefficient_ratios(pair, quad=quad)
    fits = verify_decay_class(pair, quad)
    rates_ok = (_rel_err(fits.u_fit.theta, fits.expected_u) <= args.rate_tol
                and _rel_err(fits.v_fit.theta, fits.expected_v) <= args.rate_tol)
    if fits.expected_kappa_v:
        rates_ok = rates_ok and _rel_err(fits.v_fit.kappa, fits.expected_kappa_v) <= args.log_tol
    bounded = report.verdict is BoundednessVerdict.DOUBLE_BOUNDED
    data = {
        "command": "verify",
        "mode": pair.mode.value,
        "theta1": _num(pair.theta1),
        "theta2": _num(pair.theta2),
        "fast_theorem_hypotheses": pair.fast_theorem_hypotheses,
        "spread_c1": _num(report.spread_c1),
        "spread_c2": _num(report.spread_c2),
        "tail_spread_c1": _num(report.tail_spread_c1),
        "tail_spread_c2": _num(report.tail_spread_c2),
        "theta_u": _num(fits.u_fit.theta),
        "theta_v": _num(fits.v_fit.theta),
        "kappa_v": _num(fits.v_fit.kappa),
        "expected_theta_u": _num(fits.expected_u),
        "expected_theta_v": _num(fits.expected_v),
        "expected_kappa_v": _num(fits.expected_kappa_v),
        "rates_ok": rates_ok,
        "verdict": report.verdict.value,
    }
    out.write(_dump_json(data))
    return EXIT_OK if bounded and rates_ok else EXIT_VERIFY


def _atlas_cell(base, p, q):
    try:
        params = SystemParams(base["n"], base["beta"], base["gamma"], p, q, base["s1"], base["s2"],
                              allow_nonconvention=base["allow"])
    except InvalidParameters:
        return (p, q, "Invalid", None, None, None, None)
    report = classify(params)
    try:
        gap = criticality_gap(params)
    except DegenerateProduct:
        gap = None
    return (p, q, report.regime.value, report.q0, report.p0, report.a0, gap)


def cmd_atlas(args, out, err):
    _require(args, ("n", "beta", "gamma", "s1", "s2", "p_range", "q_range"))
    ps = _range(args.p_range, "--p-range")
    qs = _range(args.q_range, "--q-range")
    # Validate the fixed part once so that bad n/beta/gamma is a usage error.
    SystemParams(args.n, args.beta, args.gamma, 1.0, 1.0, args.s1, args.s2,
                 allow_nonconvention=args.allow_nonconvention)
    base = {"n": args.n, "beta": args.beta, "gamma": args.gamma, "s1": args.s1,
            "s2": args.s2, "allow": args.allow_nonconvention}
    cells = [(float(p), float(q)) for p in ps for q in qs]
    workers = _threads(args)
    if workers == 1:
        rows = [_atlas_cell(base, p, q) for p, q in cells]
    else:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(lambda c: _atlas_cell(base, *c), cells))
    out.write("p,q,regime,q0,p0,a0,criticality_gap\n")
    counts = {}
    for row in rows:
        out.write(",".join(_csv_field(v) for v in row) + "\n")
        counts[row[2]] = counts.get(row[2], 0) + 1
    summary = ", ".join(f"{k}={counts[k]}" for k in sorted(counts))
    err.write(f"atlas: {len(rows)} cells ({ps.size} x {qs.size}); {summary}\n")
    return EXIT_OK


def cmd_iterate(args, out):
    params = _params(args)
    if args.max_iter < 1:
        raise UsageError("--max-iter must be >= 1")
    trace = iterate_liouville(params, a_start=args.a_start, max_iter=args.max_iter,
                              stop=not args.no_stop)
    data = {
        "command": "iterate",
        "a": [_num(v) for v in trace.a],
        "b": [_num(v) for v in trace.b],
        "verdict": trace.verdict.value,
        "index": trace.index,
        "limit": _num(trace.limit),
        "closed_form_check": _num(trace.closed_form_check),
    }
    out.write(_dump_json(data))
    return EXIT_OK


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _parse(argv)
        if args.command == "classify":
            return cmd_classify(args, out)
        if args.command == "eval":
            return cmd_eval(args, out)
        if args.command == "verify":
            return cmd_verify(args, out)
        if args.command == "atlas":
            return cmd_atlas(args, out, err)
        return cmd_iterate(args, out)
    except UsageError as exc:
        err.write(f"wolffkit: error: {exc}\n")
        return EXIT_USAGE
    except (ModeUnavailable, NotAdmissible) as exc:
        err.write(f"wolffkit: {exc}\n")
        return EXIT_MODE
    except QuadratureFailure as exc:
        where = f" (radius {exc.rho!r})" if exc.rho is not None else ""
        err.write(f"wolffkit: quadrature failure{where}: {exc}\n")
        return EXIT_QUADRATURE
    except WolffkitError as exc:
        # Invalid parameters, divergent tails and the like: the inputs are at fault.
        err.write(f"wolffkit: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
