"""``qsep`` command-line interface.

Exit status: 0 on success, 2 for bad flags or parameter values, 3 when a
numerical verification fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from qsep import entropy as ent
from qsep.hermit import PartitionSpec
from qsep.reproduce import figure1_csv, figure_curve, headline_csv, headline_rows
from qsep.spectra import family_spectra, spectrum_to_csv, spectrum_to_json
from qsep.states import FamilySpec
from qsep.thresholds import (
    DEFAULT_TOL,
    NO_ROOT,
    asymptotic_threshold,
    bound_ghz,
    bound_w,
    default_q_grid,
    max_eigenvalue_maps,
    ppt_min_eigenvalue,
    ppt_threshold,
    ppt_threshold_all_cuts,
    solve_x_threshold,
    threshold_curve,
)
from qsep.verify import VERIFY_TOL, run_oracle_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3

_KINDS = {"w": "W", "ghz": "GHZ", "werner": "Werner2"}


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    return v if isinstance(v, str) else f"{v:.12g}"


def _family(args, need_x: bool = False) -> FamilySpec:
    kind = _KINDS[args.family]
    n_qubits = 2 if kind == "Werner2" else args.n_qubits
    x = args.x if getattr(args, "x", None) is not None else 0.0
    if need_x and getattr(args, "x", None) is None:
        raise UsageError("--x is required for this subcommand")
    try:
        return FamilySpec(kind, n_qubits, args.traced, x)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _as_published(args) -> bool:
    return args.mode == "as-published"


def _emit(text: str, args) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _table(rows: list[tuple], header: tuple) -> str:
    cells = [tuple(str(c) for c in header)] + [tuple(_fmt(c) for c in r) for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def _scalar(name: str, value, args, extra: dict | None = None) -> str:
    if args.format == "json":
        return json.dumps({name: value, **(extra or {})}) + "\n"
    if args.format == "csv":
        return f"{name}\n{_fmt(value)}\n"
    return _fmt(value) + "\n"


def cmd_spectrum(args) -> int:
    spec = _family(args, need_x=True)
    joint, marginal = family_spectra(spec, args.marginal_qubits, _as_published(args))
    s = joint if args.which == "joint" else marginal
    if args.format == "json":
        text = spectrum_to_json(s) + "\n"
    elif args.format == "csv":
        text = spectrum_to_csv(s)
    else:
        text = _table(list(s.levels), ("value", "multiplicity"))
    _emit(text, args)
    return EXIT_OK


def cmd_entropy(args) -> int:
    spec = _family(args, need_x=True)
    joint, marginal = family_spectra(spec, args.marginal_qubits, _as_published(args))
    q = args.q
    values = {
        "tsallis_joint": ent.tsallis_entropy(joint, q),
        "tsallis_marginal": ent.tsallis_entropy(marginal, q),
        "renyi_joint": ent.renyi_entropy(joint, q),
        "renyi_marginal": ent.renyi_entropy(marginal, q),
        "von_neumann_joint": ent.von_neumann_entropy(joint),
        "von_neumann_marginal": ent.von_neumann_entropy(marginal),
        "ar_conditional": ent.ar_conditional_entropy(joint, marginal, q),
        "renyi_conditional": ent.renyi_conditional_entropy(joint, marginal, q),
    }
    if args.format == "json":
        text = json.dumps(values) + "\n"
    elif args.format == "csv":
        text = "quantity,value\n" + "".join(f"{k},{_fmt(v)}\n" for k, v in values.items())
    else:
        text = _table(list(values.items()), ("quantity", "value"))
    _emit(text, args)
    return EXIT_OK


def cmd_threshold(args) -> int:
    spec = _family(args)
    x = solve_x_threshold(spec, args.q, args.tol, args.marginal_qubits, _as_published(args))
    _emit(_scalar("x_star", x, args, {"q": args.q, "mode": args.mode}), args)
    return EXIT_OK


def cmd_curve(args) -> int:
    spec = _family(args)
    if args.points:
        grid = np.logspace(np.log10(args.q_min), np.log10(args.q_max), args.points).tolist()
    else:
        grid = default_q_grid()
    curve = threshold_curve(spec, grid, args.tol, args.marginal_qubits, _as_published(args))
    if args.format == "json":
        text = json.dumps(curve.to_dict(), indent=2) + "\n"
    elif args.format == "csv":
        text = curve.to_csv()
    else:
        text = _table(curve.samples, ("q", "x_star"))
    _emit(text, args)
    return EXIT_OK


def cmd_bound(args) -> int:
    spec = _family(args)
    if args.numeric or spec.kind == "Werner2":
        value = asymptotic_threshold(
            *max_eigenvalue_maps(spec, args.marginal_qubits, _as_published(args))
        )
    elif spec.kind == "W":
        value = float(bound_w(spec.n_qubits, spec.traced))
    else:
        if spec.traced:
            raise UsageError("the GHZ bound is defined for the full state (--traced 0)")
        value = float(bound_ghz(spec.n_qubits))
    _emit(_scalar("bound", value, args), args)
    return EXIT_OK


def _partition(args, spec: FamilySpec) -> PartitionSpec | None:
    if not args.subset:
        return None
    try:
        subset = tuple(int(s) for s in args.subset.split(","))
        return PartitionSpec(spec.n_qubits, subset)
    except ValueError as exc:
        raise UsageError(f"bad --subset {args.subset!r}: {exc}") from exc


def cmd_ppt(args) -> int:
    spec = _family(args)
    if spec.traced:
        raise UsageError("PPT is computed on the full state (--traced 0)")
    if args.x is not None:
        value = ppt_min_eigenvalue(spec, _partition(args, spec))
        _emit(_scalar("min_eigenvalue", value, args), args)
    elif args.all_cuts:
        value, part = ppt_threshold_all_cuts(spec, args.tol)
        _emit(_scalar("ppt_threshold", value, args, {"subset": list(part.subset)}), args)
    else:
        value = ppt_threshold(spec, _partition(args, spec), args.tol)
        _emit(_scalar("ppt_threshold", value, args), args)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_oracle_sweep(args.max_qubits)
    failed = [r for r in results if not r.passed]
    worst = max(r.max_error for r in results)
    lines = [
        f"cases: {len(results)}",
        f"max |closed form - oracle|: {worst:.3g} (tolerance {VERIFY_TOL:g})",
    ]
    for r in failed:
        lines.append(f"MISMATCH {r.name} {r.spec} error {r.max_error:.3g}")
    lines.append("FAIL" if failed else "OK")
    _emit("\n".join(lines) + "\n", args)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_reproduce(args) -> int:
    if args.all:
        rows = headline_rows()
        _emit(headline_csv(rows), args)
        return EXIT_OK if all(r.passed for r in rows) else EXIT_VERIFY
    if args.figure == "1":
        _emit(figure1_csv(), args)
        return EXIT_OK
    curve = figure_curve(args.figure)
    if args.format == "json":
        _emit(json.dumps(curve.to_dict(), indent=2) + "\n", args)
    else:
        _emit(curve.to_csv(), args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsep",
        description="Separability of symmetric W/GHZ families via q-conditional entropies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def family_flags(p, with_x: bool = False, with_q: bool = False):
        p.add_argument("--family", choices=sorted(_KINDS), required=True)
        p.add_argument("--n-qubits", type=int, default=2)
        p.add_argument("--traced", type=int, default=0)
        p.add_argument("--marginal-qubits", type=int, default=None,
                       help="size of the conditioning subsystem (default: one fewer qubit)")
        p.add_argument("--mode", choices=("default", "as-published"), default="default")
        if with_x:
            p.add_argument("--x", type=float, default=None)
        if with_q:
            p.add_argument("--q", type=float, required=True)

    def output_flags(p, default_format: str = "table"):
        p.add_argument("--format", choices=("csv", "json", "table"), default=default_format)
        p.add_argument("--output", default=None)

    p = sub.add_parser("spectrum", help="closed-form joint or marginal spectrum")
    family_flags(p, with_x=True)
    p.add_argument("--which", choices=("joint", "marginal"), default="joint")
    output_flags(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("entropy", help="entropies and conditional entropies at (x, q)")
    family_flags(p, with_x=True, with_q=True)
    output_flags(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("threshold", help="x*(q) where the conditional entropy vanishes")
    family_flags(p, with_q=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    output_flags(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("curve", help="threshold curve over a q grid")
    family_flags(p)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--q-min", type=float, default=0.2)
    p.add_argument("--q-max", type=float, default=1000.0)
    p.add_argument("--points", type=int, default=0,
                   help="log-spaced grid size (default: built-in grid incl. q = 1)")
    output_flags(p, "csv")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("bound", help="large-q separability bound")
    family_flags(p)
    p.add_argument("--numeric", action="store_true",
                   help="solve max-eigenvalue equality instead of the closed form")
    output_flags(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("ppt", help="Peres partial-transpose threshold or min eigenvalue")
    family_flags(p, with_x=True)
    p.add_argument("--subset", default=None, help="comma-separated qubits to transpose")
    p.add_argument("--all-cuts", action="store_true", help="minimum over every bipartition")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    output_flags(p)
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("verify", help="closed-form spectra against the brute-force oracle")
    p.add_argument("--max-qubits", type=int, default=8)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce", help="figure data or the headline-number table")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--figure", choices=("1", "2", "3a", "3b"))
    group.add_argument("--all", action="store_true")
    output_flags(p, "csv")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "q", None) is not None and not args.q > 0:
        parser.error("--q must be positive")
    if getattr(args, "max_qubits", None) is not None and not 2 <= args.max_qubits <= 10:
        parser.error("--max-qubits must lie in [2, 10]")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"qsep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
