"""Command-line entry point: ``hjrates {solve,rates,oracle,verify}``.

Exit status is 0 on success, 2 when a solve did not converge, 3 for bad
configuration, and 1 when ``verify`` finds a failing criterion.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import HJError, NotConverged
from .experiment import (
    config_from_mapping,
    emit_report,
    fit_rows,
    read_config,
    run_experiment,
    solve_cell,
)
from .hamiltonians import CATALOG_IDS, get_hamiltonian
from .oracles import oracle_for, oracle_limit, oracle_solution

EXIT_OK, EXIT_FAIL, EXIT_NOT_CONVERGED, EXIT_CONFIG = 0, 1, 2, 3

# flags shared by solve and rates; dest names double as config-file keys
_SHARED = (
    ("--example", dict(choices=CATALOG_IDS)),
    ("--prototype", dict(choices=("p1", "p2"))),
    ("--solver", dict()),
    ("--h", dict(type=float)),
    ("--dt", dict(type=float)),
    ("--tol", dict(type=float)),
    ("--theta", dict(type=float)),
    ("--n-controls", dict(type=int)),
    ("--w-max", dict(type=float)),
    ("--alpha", dict(type=float)),
    ("--beta", dict(type=float)),
    ("--gamma", dict(type=float)),
    ("--m", dict(type=float)),
)


def _add_shared(p: argparse.ArgumentParser) -> None:
    for flag, kw in _SHARED:
        p.add_argument(flag, **kw)
    p.add_argument("--config", help="flat key = value file; flags override it")


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors, not the argparse default of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hjrates", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one domain and print the grid function")
    _add_shared(p)
    p.add_argument("--k", type=int)
    p.add_argument("--out", help="write 'x u' lines here instead of stdout")

    p = sub.add_parser("rates", help="run an experiment over several k and fit rates")
    _add_shared(p)
    p.add_argument("--k", help="comma separated domain indices, e.g. 1,2,4")
    p.add_argument("--region", type=float)
    p.add_argument("--error-floor", type=float)
    p.add_argument("--theorem", choices=("T11", "T12", "T14", "T15", "P44"))
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))

    p = sub.add_parser("oracle", help="print closed-form u_k and its limit")
    p.add_argument("--example", required=True, choices=CATALOG_IDS)
    p.add_argument("--prototype", default="p1", choices=("p1", "p2"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", type=float, nargs="+", default=[0.0])
    for name in ("alpha", "beta", "gamma", "m"):
        p.add_argument(f"--{name}", type=float)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--only", help="comma separated criterion numbers")
    return parser


def _collect(args, extra_keys) -> dict:
    """Config-file values overlaid with the flags actually given."""
    values = read_config(args.config) if getattr(args, "config", None) else {}
    for flag, _ in _SHARED:
        key = flag[2:]
        val = getattr(args, key.replace("-", "_"))
        if val is not None:
            values[key] = val
    for key in extra_keys:
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            values[key] = val
    return values


def _cmd_solve(args) -> int:
    values = _collect(args, ("k", "out"))
    k = values.get("k")
    if k is None:
        raise HJError("--k is required")
    values["region"] = 0.0
    config = config_from_mapping(values)
    solver = config.solvers[0]
    u, report, converged = solve_cell(config, solver, config.k_list[0])
    lines = [f"# {config.example} {config.prototype} k={config.k_list[0]} solver={solver} "
             f"iterations={report.iterations} residual={report.final_residual:.3e}"]
    lines += [f"{x:.16e} {v:.16e}" for x, v in zip(u.nodes, u.values)]
    text = "\n".join(lines) + "\n"
    out = values.get("out")
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def _cmd_rates(args) -> int:
    values = _collect(args, ("k", "region", "error-floor", "theorem", "workers"))
    config = config_from_mapping(values)
    rows = run_experiment(config)
    fits = fit_rows(rows, config)
    for r in rows:
        flag = "" if r.converged else "  (not converged)"
        print(f"{r.solver} k={r.k:<3d} sup_error={r.sup_error:.6e} iterations={r.iterations}{flag}")
    for f in fits:
        print(f"{f['solver']} fit: {f['model']} exponent={f['exponent']:.6g} "
              f"amplitude={f['amplitude']:.6g} rms={f['rms_log_residual']:.2e} "
              f"{f['theorem']} holds={f['holds']} C={f['fitted_C']}")
    out = args.out or values.get("out")
    if out:
        fmt = args.format or values.get("format") or ("json" if str(out).endswith(".json") else "csv")
        emit_report(rows, fits, fmt, out)
    return EXIT_OK if all(r.converged for r in rows) else EXIT_NOT_CONVERGED


def _cmd_oracle(args) -> int:
    params = {n: getattr(args, n) for n in ("alpha", "beta", "gamma", "m") if getattr(args, n) is not None}
    spec = get_hamiltonian(args.example, **params)
    oid = oracle_for(spec, args.prototype)
    if oid is None:
        raise HJError(f"no closed form for {args.example} on {args.prototype}")
    xs = np.asarray(args.x, dtype=float)
    uk = np.atleast_1d(oracle_solution(oid, args.k, xs))
    lim = np.atleast_1d(oracle_limit(oid, xs))
    print("x u_k u u_k-u")
    for x, a, b in zip(xs, uk, lim):
        print(f"{x:.16g} {a:.16g} {b:.16g} {a - b:.16g}")
    if not oid.unique_limit:
        print("# note: the bounded limit is not the only solution on the line")
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .acceptance import run_all

    only = None
    if args.only:
        only = [int(s) for s in args.only.split(",")]
    results = run_all(only)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


_COMMANDS = {"solve": _cmd_solve, "rates": _cmd_rates, "oracle": _cmd_oracle, "verify": _cmd_verify}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return _COMMANDS[args.command](args)
    except NotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except (HJError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
