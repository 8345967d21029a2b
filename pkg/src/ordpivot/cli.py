"""Command-line front end.

Subcommands: ``decompose`` (report the boundary/cluster structure of a
frame), ``sample`` (draw replicated samples), ``verify`` (run the oracle
suites), ``reproduce-tables`` (the built-in design-effect comparison).
Exit codes: 0 success, 1 validation error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, io, tables, verify
from .errors import OrdPivotError
from .samplers import (
    RandomSource,
    compromise_markov,
    deville_systematic,
    ordered_pivotal,
    ordered_systematic,
    randomized_pivotal,
    srs,
)
from .strata import build_clusters, cumulate, decompose

ALGORITHMS = ("ops", "dss", "sys", "srs", "cmc", "rps")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; keep 2 reserved for
    # verification failures and report usage problems as validation errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ordpivot", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ordpivot {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_dec = sub.add_parser("decompose", help="report boundaries, strata, and clusters")
    p_dec.add_argument("--pi-file", required=True, help="population frame (unit,pi[,y...])")
    p_dec.add_argument("--format", choices=("csv", "json"), default="csv")
    p_dec.add_argument("--out", help="write the report here instead of stdout")
    p_dec.add_argument(
        "--figures", action="store_true",
        help="render a PNG of the decomposition next to --out",
    )

    p_smp = sub.add_parser("sample", help="draw replicated samples")
    p_smp.add_argument("--pi-file", required=True)
    p_smp.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p_smp.add_argument("--rho", type=float, help="chain parameter, required for cmc")
    p_smp.add_argument("--replicates", type=int, default=1)
    p_smp.add_argument("--seed", type=int, default=0)
    p_smp.add_argument("--format", choices=("csv", "json"), default="csv")
    p_smp.add_argument("--out")

    p_ver = sub.add_parser("verify", help="run the oracle verification suites")
    p_ver.add_argument("--level", choices=("fast", "full"), default="fast")

    p_tab = sub.add_parser(
        "reproduce-tables", help="design-effect table for the built-in population"
    )
    p_tab.add_argument("--format", choices=("csv", "json"), default="csv")
    p_tab.add_argument("--out", help="write flat metric rows here")
    p_tab.add_argument(
        "--figures", action="store_true",
        help="render a PNG of the design effects next to --out",
    )
    return parser


def _emit(text: str, out: str | None):
    if out:
        io.write_text(out, text)
    else:
        print(text)


def _figure_path(out: str, suffix: str) -> Path:
    base = Path(out)
    return base.with_name(base.stem + f"_{suffix}.png")


def _cmd_decompose(args) -> int:
    pi, _ = io.read_frame(args.pi_file)
    pv = cumulate(pi)
    dec = decompose(pv)
    cp = build_clusters(dec, pv)
    if args.format == "json":
        payload = {
            "N": pv.N,
            "n": pv.n,
            "V": list(pv.V[1:]),
            "cross_border": list(dec.cross_border),
            "a": list(dec.a),
            "b": list(dec.b),
            "strata": [list(s) for s in dec.strata],
            "phantom_units": [
                k for k, flag in zip(dec.cross_border, dec.phantom_flags) if flag
            ],
            "clusters": [list(c) for c in cp.clusters],
            "psi": list(cp.psi),
            "phantom_clusters": list(cp.phantom_clusters),
        }
        text = json.dumps(payload, indent=2)
    else:
        cross = set(dec.cross_border)
        boundary = {k: i for i, k in enumerate(dec.cross_border, start=1)}
        lines = ["unit,pi,V,cross_border,a,b"]
        for k in range(1, pv.N + 1):
            if k in cross:
                i = boundary[k]
                extra = f"1,{dec.a[i - 1]:.12g},{dec.b[i - 1]:.12g}"
            else:
                extra = "0,,"
            lines.append(f"{k},{pv.pi[k - 1]:.12g},{pv.V[k]:.12g},{extra}")
        lines.append("")
        lines.append("stratum,units")
        for i, members in enumerate(dec.strata, start=1):
            lines.append(f"{i},{' '.join(str(u) for u in members)}")
        lines.append("")
        lines.append("cluster,units,psi")
        for j, (members, mass) in enumerate(zip(cp.clusters, cp.psi), start=1):
            label = " ".join(str(u) for u in members) if members else "-"
            lines.append(f"{j},{label},{mass:.12g}")
        text = "\n".join(lines)
    _emit(text, args.out)
    if args.figures:
        if not args.out:
            raise OrdPivotError("--figures needs --out to place the image next to")
        from . import plots

        plots.save_figure(
            plots.decomposition_figure(pv, dec, cp), _figure_path(args.out, "decomposition")
        )
    return 0


def _cmd_sample(args) -> int:
    if args.algorithm == "cmc":
        if args.rho is None:
            raise OrdPivotError("cmc needs --rho")
        if not 0.0 <= args.rho <= 1.0:
            raise OrdPivotError(f"--rho must lie in [0, 1], got {args.rho}")
    if args.replicates < 1:
        raise OrdPivotError("--replicates must be at least 1")
    if args.seed < 0:
        raise OrdPivotError("--seed must be a nonnegative integer")
    pi, _ = io.read_frame(args.pi_file)
    pv = cumulate(pi)
    draws = []
    for r in range(1, args.replicates + 1):
        rng = RandomSource.from_key(args.seed, r)
        if args.algorithm == "ops":
            sample = ordered_pivotal(pv, rng)
        elif args.algorithm == "dss":
            sample = deville_systematic(pv, rng)
        elif args.algorithm == "sys":
            sample = ordered_systematic(pv, rng)
        elif args.algorithm == "srs":
            sample = srs(pv.N, pv.n, rng)
        elif args.algorithm == "cmc":
            sample = compromise_markov(pv.N, pv.n, args.rho, rng)
        else:
            sample = randomized_pivotal(pv, rng)
        draws.append((r, sample.units))
    if args.format == "json":
        text = json.dumps(
            [{"replicate": r, "units": list(units)} for r, units in draws], indent=2
        )
    else:
        text = "\n".join(f"{r}," + ",".join(str(u) for u in units) for r, units in draws)
    _emit(text, args.out)
    return 0


def _cmd_verify(args) -> int:
    results = verify.full_checks() if args.level == "full" else verify.fast_checks()
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 2 if failed else 0


def _cmd_tables(args) -> int:
    print("study variables")
    print(tables.format_variable_table())
    print()
    print("design effects (rounded to 2 decimals)")
    print(tables.format_deff_table())
    rows = tables.flat_metric_rows()
    if args.out:
        if args.format == "json":
            text = json.dumps(
                [
                    {"metric": m, "design": d, "n": n, "value": v}
                    for m, d, n, v in rows
                ],
                indent=2,
            )
        else:
            text = "metric,design,n,value\n" + "\n".join(
                f"{m},{d},{n},{v:.2f}" for m, d, n, v in rows
            )
        io.write_text(args.out, text)
    if args.figures:
        if not args.out:
            raise OrdPivotError("--figures needs --out to place the image next to")
        from . import plots

        plots.save_figure(plots.deff_figure(), _figure_path(args.out, "deff"))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "decompose":
            return _cmd_decompose(args)
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_tables(args)
    except OrdPivotError as exc:
        print(f"ordpivot: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ordpivot: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
