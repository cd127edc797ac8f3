"""Command-line front end: ``airyspec <command> [options]``.

Every command writes rows as CSV (17 significant digits, LF endings) or as
JSON ``{"rows": [...], "manifest": {...}}``; ``report`` defaults to JSON.
With ``--out PATH`` a CSV file gets a sidecar ``PATH.manifest.json``; on
stdout the manifest goes to stderr.
``airyspec replay MANIFEST`` re-runs a recorded command.

Exit codes: 0 success, 1 property or acceptance failure, 2 usage error,
3 numerical convergence failure.
"""

import argparse
import csv
import hashlib
import io
import json
import math
import platform
import sys

import numpy as np
import scipy

from . import __version__, _kernels
from . import checks, eigenfunctions, feynman_kac, heat_kernel, spectrum
from .airy_core import DEFAULT_CONFIG as AIRY_CONFIG
from .errors import ArgumentError, ConvergenceError, PropertyFailure

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3
SAMPLER_NAMES = {"direct": "direct_cauchy", "subordinated": "subordinated_bm"}


def config_hash():
    settings = {
        "airy": [AIRY_CONFIG.target_rel_error, AIRY_CONFIG.series_asymptotic_switch_point,
                 AIRY_CONFIG.anchor_step],
        "zero_tol": spectrum.ZERO_TOL,
        "ibp_order": eigenfunctions.IBP_ORDER,
        "far_order": eigenfunctions.FAR_ORDER,
        "uniform_bound": heat_kernel.UNIFORM_BOUND,
        "bound_constant": heat_kernel.BOUND_CONSTANT,
        "heat_kernel": [heat_kernel.DEFAULT_CONFIG.t_min, heat_kernel.DEFAULT_CONFIG.truncation_rel_error,
                        heat_kernel.DEFAULT_CONFIG.max_terms],
    }
    blob = json.dumps(settings, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def manifest(command, parameters, seed=None):
    return {
        "command": command,
        "parameters": parameters,
        "versions": {
            "airyspec": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
            "backend": _kernels.BACKEND,
            "config_hash": config_hash(),
        },
        "seed": seed,
    }


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def render(rows, man, fmt):
    if fmt == "json":
        return json.dumps({"rows": checks._jsonable(rows), "manifest": man}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if rows:
        header = list(rows[0].keys())
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(row[k]) for k in header])
    return buf.getvalue()


def emit(rows, man, args):
    text = render(rows, man, args.format)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
        if args.format == "csv":
            with open(args.out + ".manifest.json", "w", newline="\n") as fh:
                json.dump(man, fh, indent=2)
                fh.write("\n")
    else:
        sys.stdout.write(text)
        if args.format == "csv":
            sys.stderr.write(json.dumps(man) + "\n")


# commands: each returns (rows, parameters, seed, exit_code)

def cmd_eigenvalues(args):
    if args.count < 1:
        raise ArgumentError("--count must be at least 1")
    rows = []
    for n in range(1, args.count + 1):
        ev = spectrum.eigenvalue(n)
        b = spectrum.eigenvalue_bounds(ev.k)
        ok = ev.value <= b.upper_odd if n % 2 else b.lower_even <= ev.value <= b.upper_even
        rows.append({"n": n, "parity": ev.parity, "k": ev.k, "lambda": ev.value,
                     "asymptotic": spectrum.eigenvalue_asymptotic(n), "bound_check": "pass" if ok else "fail"})
    return rows, {"count": args.count}, None, EXIT_OK


def cmd_eigenfunction(args):
    if args.points < 2:
        raise ArgumentError("--points must be at least 2")
    if not args.x_max > args.x_min:
        raise ArgumentError("--x-max must exceed --x-min")
    x = np.linspace(args.x_min, args.x_max, args.points)
    phi = eigenfunctions.evaluate(args.n, x)
    crossover = eigenfunctions.window(args.n)
    rows = []
    for xi, v in zip(x, phi):
        tail = eigenfunctions.tail_expansion(args.n, xi, 3) if abs(xi) >= crossover else None
        rows.append({"x": float(xi), "phi": float(v), "tail": tail})
    params = {"n": args.n, "x_min": args.x_min, "x_max": args.x_max, "points": args.points}
    return rows, params, None, EXIT_OK


def cmd_trace(args):
    rows = []
    for t in args.t_values:
        tr = spectrum.trace(t)
        rows.append({"t": t, "trace": tr, "scaled": t ** 1.5 * tr})
    return rows, {"t_values": list(args.t_values)}, None, EXIT_OK


def cmd_heatkernel(args):
    if args.points < 1:
        raise ArgumentError("--points must be at least 1")
    grid = np.linspace(args.x_min, args.x_max, args.points)
    res = heat_kernel.kernel_grid(args.t, grid, grid)
    lam1 = spectrum.eigenvalue(1).value
    rows = []
    for i, x in enumerate(grid):
        for j, y in enumerate(grid):
            u = float(res.value[i, j])
            r = u * (1 + x ** 4) * (1 + y ** 4) * math.exp(lam1 * args.t)
            rows.append({"x": float(x), "y": float(y), "u": u, "r": r,
                         "tail_bound": float(res.tail_bound[i, j]), "n_terms": int(res.n_terms[i, j])})
    code = EXIT_OK
    if np.any(res.value <= 0):
        code = EXIT_PROPERTY
    elif args.t > 1:
        rs = [row["r"] for row in rows]
        c = heat_kernel.BOUND_CONSTANT
        if max(rs) > c or min(rs) < 1 / c:
            code = EXIT_PROPERTY
    params = {"t": args.t, "x_min": args.x_min, "x_max": args.x_max, "points": args.points}
    return rows, params, None, code


def cmd_verify_mc(args):
    cfg = feynman_kac.McConfig(t=args.t, n_steps=args.steps, n_paths=args.paths,
                               seed=args.seed, sampler=SAMPLER_NAMES[args.sampler])
    est = feynman_kac.estimate_semigroup(args.x, cfg)
    pred = feynman_kac.spectral_prediction(args.x, args.t)
    z = (est.mean - pred) / est.std_error if est.std_error > 0 else math.inf
    rows = [{"x": args.x, "t": args.t, "paths": args.paths, "steps": args.steps,
             "sampler": cfg.sampler, "estimate": est.mean, "std_error": est.std_error,
             "prediction": pred, "z_score": z}]
    params = {"x": args.x, "t": args.t, "paths": args.paths, "steps": args.steps,
              "sampler": args.sampler, "seed": args.seed}
    return rows, params, args.seed, EXIT_OK if abs(z) <= 3 else EXIT_PROPERTY


def cmd_report(args):
    results = checks.run_all(args.only)
    for r in results:
        sys.stderr.write(r.line() + "\n")
    rows = []
    for r in results:
        d = r.to_dict()
        if args.format == "csv":
            d = {k: d[k] for k in ("number", "title", "passed", "seconds", "budget")}
        rows.append(d)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY
    return rows, {"only": args.only}, None, code


COMMANDS = {
    "eigenvalues": cmd_eigenvalues,
    "eigenfunction": cmd_eigenfunction,
    "trace": cmd_trace,
    "heatkernel": cmd_heatkernel,
    "verify-mc": cmd_verify_mc,
    "report": cmd_report,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="airyspec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"airyspec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt="csv"):
        p.add_argument("--format", choices=("csv", "json"), default=fmt)
        p.add_argument("--out", metavar="PATH")
        return p

    p = common(sub.add_parser("eigenvalues", help="table of eigenvalues with asymptotics and bounds"))
    p.add_argument("--count", type=int, default=6)

    p = common(sub.add_parser("eigenfunction", help="phi_n on a grid with its tail expansion"))
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--x-min", type=float, default=-10.0)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=201)

    p = common(sub.add_parser("trace", help="semigroup trace and its t^(3/2) scaling"))
    p.add_argument("--t-values", type=float, nargs="+", default=[0.1, 0.03, 0.01, 0.003])

    p = common(sub.add_parser("heatkernel", help="u(t,x,y) on a square grid with the bound ratio"))
    p.add_argument("--t", type=float, default=1.5)
    p.add_argument("--x-min", type=float, default=-5.0)
    p.add_argument("--x-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=11)

    p = common(sub.add_parser("verify-mc", help="Monte Carlo Feynman-Kac estimate vs spectral prediction"))
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--sampler", choices=sorted(SAMPLER_NAMES), default="direct")
    p.add_argument("--seed", type=int, default=20240601)

    p = common(sub.add_parser("report", help="run the acceptance suite"), fmt="json")
    p.add_argument("--only", type=int, nargs="+", choices=sorted(checks.CRITERIA), default=None)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", metavar="PATH")
    return parser


def _replay_args(parser, args):
    with open(args.manifest) as fh:
        data = json.load(fh)
    man = data.get("manifest", data)
    argv = [man["command"]]
    for key, value in man["parameters"].items():
        if value is None:
            continue
        flag = "--" + key.replace("_", "-")
        argv.append(flag)
        argv.extend(str(v) for v in value) if isinstance(value, list) else argv.append(str(value))
    argv += ["--format", args.format or ("json" if "manifest" in data else "csv")]
    if args.out:
        argv += ["--out", args.out]
    return parser.parse_args(argv)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            args = _replay_args(parser, args)
        rows, params, seed, code = COMMANDS[args.command](args)
        emit(rows, manifest(args.command, params, seed), args)
        return code
    except (ArgumentError, OSError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"airyspec: error: {exc}\n")
        return EXIT_USAGE
    except ConvergenceError as exc:
        sys.stderr.write(f"airyspec: convergence failure: {exc} {exc.diagnostics}\n")
        return EXIT_CONVERGENCE
    except PropertyFailure as exc:
        sys.stderr.write(f"airyspec: property failure: {exc} {exc.diagnostics}\n")
        return EXIT_PROPERTY


if __name__ == "__main__":
    sys.exit(main())
