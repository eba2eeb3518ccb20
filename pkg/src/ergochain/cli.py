"""Command-line interface.

Subcommands:

* ``ff-scan``    free-fermion block decomposition over a ladder of sizes
* ``spin-scan``  exact-diagonalization decomposition for the spin chains
* ``predict``    exact values vs closed-form predictions
* ``fit``        shared-parameter or log-gamma fit of a scan file
* ``check``      self-test suites (PASS/FAIL lines)

Exit codes: 0 success, 1 failed checks or failed computation, 2 usage or
input errors.  All emitted text uses LF line endings and ``%.12g`` floats,
so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import nullcontext

from . import __version__, checks, cftpredict, fitkit, freefermion, manybody, records
from .errors import ConvergenceError, DegeneracyError, FitError, InputError

BENCHMARK_GRIDS = {"ising": [6, 8, 10, 12, 14], "heisenberg": [8, 12, 16, 20]}
FF_MAX_SIZE = 8192
PREDICT_FIELDS = ("E_A", "E_tilde", "E_A0", "W", "Q")


def _add_common(sub, seed=True):
    sub.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="output format (default: csv)")
    sub.add_argument("--output", default="-", metavar="PATH",
                     help="output file, '-' for stdout (default)")
    if seed:
        sub.add_argument("--seed", type=int, default=42,
                         help="seed for stochastic solvers (default: 42)")


def _add_sizes(sub):
    sub.add_argument("--n-list", metavar="N1,N2,...",
                     help="explicit comma-separated chain sizes")
    sub.add_argument("--n-min", type=int, help="smallest size of a geometric range")
    sub.add_argument("--n-max", type=int, help="largest size of a geometric range")
    sub.add_argument("--geom", type=int, default=2, metavar="R",
                     help="geometric ratio for --n-min/--n-max (default: 2)")


def _parse_sizes(args, parser, default=None):
    has_list = args.n_list is not None
    has_range = args.n_min is not None or args.n_max is not None
    if has_list and has_range:
        parser.error("give either --n-list or --n-min/--n-max, not both")
    if has_list:
        try:
            sizes = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
        except ValueError:
            parser.error(f"--n-list must be comma-separated integers, got {args.n_list!r}")
        if not sizes:
            parser.error("--n-list is empty")
    elif has_range:
        if args.n_min is None or args.n_max is None:
            parser.error("--n-min and --n-max must be given together")
        if args.geom < 2:
            parser.error(f"--geom must be an integer >= 2, got {args.geom}")
        if args.n_min < 2 or args.n_max < args.n_min:
            parser.error(f"need 2 <= n-min <= n-max, got {args.n_min}..{args.n_max}")
        sizes, n = [], args.n_min
        while n <= args.n_max:
            sizes.append(n)
            n *= args.geom
    elif default is not None:
        sizes = list(default)
    else:
        parser.error("no sizes given: use --n-list or --n-min/--n-max")
    return sorted(set(sizes))


def _open_output(path):
    if path == "-":
        return nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="")


def _write_table(stream, fmt, header, rows):
    """Emit rows of (str|int|float) either as CSV with header or JSON lines."""
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([records.format_float(x) if isinstance(x, float) else str(x)
                             for x in row])
    else:
        for row in rows:
            stream.write(json.dumps(dict(zip(header, row))) + "\n")


def cmd_ff_scan(args, parser):
    sizes = _parse_sizes(args, parser)
    frac = args.block_fraction
    if not 0.0 < frac < 1.0:
        parser.error(f"--block-fraction must lie in (0, 1), got {frac}")
    specs = []
    for n in sizes:
        if n % 2 or not 2 <= n <= FF_MAX_SIZE:
            parser.error(f"chain sizes must be even and <= {FF_MAX_SIZE}, got {n}")
        ell = int(round(frac * n))
        if not 1 <= ell <= n - 1:
            parser.error(f"block fraction {frac} gives invalid block {ell} for N={n}")
        specs.append(freefermion.ChainSpec(n, ell))
    out = []
    for spec in specs:
        energy, c = freefermion.chain_state(spec)
        out.append(records.from_freefermion(energy, freefermion.block_energies(spec, c)))
    with _open_output(args.output) as stream:
        records.write_records(out, stream, args.format)
    return 0


def cmd_spin_scan(args, parser):
    kind = args.model
    if args.paper_grid and (args.n_list is not None or args.n_min is not None
                            or args.n_max is not None):
        parser.error("--paper-grid replaces explicit size flags")
    if args.paper_grid:
        sizes = BENCHMARK_GRIDS[kind]
    else:
        sizes = _parse_sizes(args, parser, default=BENCHMARK_GRIDS[kind])
    if kind == "heisenberg" and args.gamma is not None:
        parser.error("--gamma applies only to the ising chain")
    gamma = 1.0 if args.gamma is None else args.gamma
    cap = 20 if kind == "ising" else 24
    for n in sizes:
        if n % 2 or not 2 <= n <= cap:
            parser.error(f"{kind} sizes must be even with 2 <= N <= {cap}, got {n}")
    out = []
    for n in sizes:
        model = manybody.SpinModel(kind, n, gamma)
        out.append(records.from_spin(kind, manybody.decomposition(model, seed=args.seed)))
    with _open_output(args.output) as stream:
        records.write_records(out, stream, args.format)
    return 0


def cmd_predict(args, parser):
    sizes = _parse_sizes(args, parser)
    constants = cftpredict.CftConstants(log_gamma=args.log_gamma)
    rows = []
    for n in sizes:
        if n % 2 or not 4 <= n <= FF_MAX_SIZE:
            parser.error(f"predict needs even 4 <= N <= {FF_MAX_SIZE}, got {n}")
        dec = freefermion.decompose(freefermion.ChainSpec(n))
        exact = {"E_A": dec.e_a, "E_tilde": dec.e_tilde, "E_A0": dec.e_a0,
                 "W": dec.w, "Q": dec.q}
        predicted = {
            "E_A": cftpredict.predict_e_a(n, constants),
            "E_tilde": cftpredict.predict_e_tilde(n, constants),
            "E_A0": cftpredict.predict_e_a0(n, constants),
            "W": cftpredict.predict_w(n, constants),
            "Q": cftpredict.predict_q(n, constants),
        }
        for name in PREDICT_FIELDS:
            rows.append((n, name, exact[name], predicted[name],
                         abs(exact[name] - predicted[name])))
    with _open_output(args.output) as stream:
        _write_table(stream, args.format,
                     ("N", "quantity", "exact", "predicted", "abs_dev"), rows)
    return 0


def cmd_fit(args, parser):
    del parser
    try:
        with open(args.scanfile, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read scan file: {exc}") from None
    recs = sorted(records.parse_records(text), key=lambda r: r.n)
    kinds = sorted({r.model for r in recs})
    if len(kinds) != 1:
        raise InputError(f"scan file mixes models {kinds}; fit one model at a time")
    ns = [r.n for r in recs]
    if len(set(ns)) != len(ns):
        raise InputError("scan file repeats chain sizes; deduplicate before fitting")
    q_series = fitkit.Series("Q", ns, [r.q for r in recs])
    if args.kind == "shared":
        fit = fitkit.shared_fit([
            fitkit.Series("deltaE", ns, [r.delta_e for r in recs]),
            fitkit.Series("W", ns, [r.w for r in recs]),
            q_series,
        ])
        rows = [("alpha1", fit.alpha1), ("alpha2", fit.alpha2),
                ("alpha3", fit.alpha3), ("alpha4", fit.alpha4),
                ("residual", fit.residual),
                ("r2_deltaE", fit.r_squared["deltaE"]),
                ("r2_W", fit.r_squared["W"]), ("r2_Q", fit.r_squared["Q"])]
    else:
        log_gamma, residual = fitkit.fit_log_gamma(q_series)
        rows = [("log_gamma", log_gamma), ("residual", residual)]
    with _open_output(args.output) as stream:
        _write_table(stream, args.format, ("param", "value"), rows)
    return 0


def cmd_check(args, parser):
    del parser
    names = list(args.suite) if args.suite else None
    results = checks.run_suites(names, n_max=args.n_max, seed=args.seed)
    failed = 0
    with _open_output(args.output) as stream:
        for r in results:
            failed += not r.passed
            stream.write(f"{'PASS' if r.passed else 'FAIL'} "
                         f"{r.suite}:{r.name} - {r.detail}\n")
        stream.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ergochain",
        description="Ergotropy and bound energy of blocks of critical chains")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("ff-scan", help="free-fermion block decomposition scan")
    _add_sizes(p)
    p.add_argument("--block-fraction", type=float, default=0.5, metavar="F",
                   help="block size as a fraction of N (default: 0.5)")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_ff_scan)

    p = subs.add_parser("spin-scan", help="spin-chain block decomposition scan")
    p.add_argument("--model", choices=("ising", "heisenberg"), required=True)
    p.add_argument("--gamma", type=float, default=None,
                   help="transverse field of the ising chain (default: 1.0)")
    p.add_argument("--paper-grid", action="store_true",
                   help="use the reference grids (ising 6..14, heisenberg 8..20)")
    _add_sizes(p)
    _add_common(p)
    p.set_defaults(func=cmd_spin_scan)

    p = subs.add_parser("predict", help="exact vs closed-form block energies")
    _add_sizes(p)
    p.add_argument("--log-gamma", type=float, default=2.3,
                   help="non-universal scale in the bound-energy form (default: 2.3)")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_predict)

    p = subs.add_parser("fit", help="fit a scan file")
    p.add_argument("scanfile", help="CSV or JSON-lines scan produced by a scan command")
    p.add_argument("--kind", choices=("shared", "log-gamma"), default="shared",
                   help="shared 4-parameter family or log-gamma extraction")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_fit)

    p = subs.add_parser("check", help="run invariant self-test suites")
    p.add_argument("--suite", action="append", choices=(*checks.SUITES, "all"),
                   help="suite to run (repeatable; default: all)")
    p.add_argument("--n-max", type=int, default=None,
                   help="override the largest size each suite touches")
    _add_common(p)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DegeneracyError, ConvergenceError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
