"""Command-line interface.

Systems are JSON files {"name": optional string, "rows": [[int, ...], ...]}.
Exit codes: 0 success, 1 usage error, 2 input error, 3 results left
indeterminate by a budget.  Stochastic commands require --seed; nothing is
ever seeded from the clock.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .errors import IllDefinedDensityError, RadoError
from .experiments import (
    PROPERTIES,
    TrialConfig,
    estimate_probability,
    threshold_sweep,
    write_curve_csv,
)
from .extremal import extremal_number, pi_sequence, supersaturation_min
from .partitions import realized_patterns
from .solutions import (
    SolutionClass,
    count_solutions,
    enumerate_solutions,
    interval,
    max_ell_degree,
    patterns_realized_in,
)
from .systems import LinearSystem, classify, max_density, max_one_density, subsystem

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INDETERMINATE = 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are 1
        raise UsageError(message)


def system_to_json(system: LinearSystem) -> dict:
    doc: dict = {"rows": [list(r) for r in system.matrix.entries]}
    if system.name is not None:
        doc = {"name": system.name, "rows": doc["rows"]}
    return doc


def parse_system_data(doc) -> LinearSystem:
    if not isinstance(doc, dict):
        raise InputError("system file must contain a JSON object")
    unknown = set(doc) - {"name", "rows"}
    if unknown:
        raise InputError(f"unexpected fields in system file: {sorted(unknown)}")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise InputError("'name' must be a string")
    rows = doc.get("rows")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("'rows' must be a list of integer lists")
    if not rows:
        raise InputError("empty matrix: need at least one row")
    width = len(rows[0])
    for r in rows:
        if len(r) != width:
            raise InputError("non-rectangular rows")
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool):
                raise InputError(f"matrix entries must be integers, got {x!r}")
    if width == 0:
        raise InputError("empty matrix: need at least one column")
    return LinearSystem.from_rows(rows, name=name)


def parse_system(path: str) -> LinearSystem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc
    return parse_system_data(doc)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"expected a rational number, got {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _fraction_list(text: str) -> list[Fraction]:
    return [_fraction(part) for part in text.split(",") if part != ""]


def _solution_class(text: str) -> SolutionClass:
    try:
        return SolutionClass(text)
    except ValueError as exc:
        raise UsageError(
            f"unknown solution class {text!r}; expected all, nontrivial or proper"
        ) from exc


def _to_jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, frozenset):
        return sorted(value)
    if isinstance(value, dict):
        return {k: _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, SolutionClass):
        return value.value
    return value


class Report:
    """Collects a command's config echo and payload for text or JSON output."""

    def __init__(self, command: str, config: dict):
        self.doc = {
            "command": command,
            "version": __version__,
            "config": _to_jsonable(config),
            "results": {},
        }
        self.lines: list[str] = []

    def add(self, key: str, value, text: str | None = None):
        self.doc["results"][key] = _to_jsonable(value)
        self.lines.append(text if text is not None else f"{key}: {_plain(value)}")

    def emit(self, as_json: bool) -> None:
        if as_json:
            print(json.dumps(self.doc, indent=2, sort_keys=True))
        else:
            print("\n".join(self.lines))


def _plain(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_plain(v) for v in value) + "]"
    if value is None:
        return "-"
    return str(value)


def _density_cell(report_or_error):
    if isinstance(report_or_error, IllDefinedDensityError):
        return {"ill_defined": True, "offending_columns": list(report_or_error.columns)}
    return {"value": report_or_error.value, "witness": list(report_or_error.witness)}


def build_parser() -> _Parser:
    parser = _Parser(prog="rado", description=__doc__)
    parser.add_argument("--version", action="version", version=f"rado {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("system", help="path to a system JSON file")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        return p

    add("classify", "classification flags, densities and witnesses")

    p = add("density", "maximum 1-density and maximum density with witnesses")
    p.add_argument("--kind", choices=["m1", "m", "both"], default="both")

    p = add("subsystem", "induced system on a column set (emits system JSON)")
    p.add_argument("--cols", required=True, type=_int_list, help="1-based columns, e.g. 1,2,4")

    p = add("patterns", "repetition patterns realized by non-trivial solutions")
    p.add_argument("--ground-n", type=int, help="also restrict witnesses to [n]")

    p = add("count", "count solutions of a class in a ground set")
    p.add_argument("--n", type=int, help="use the ground set {1..n}")
    p.add_argument("--set", type=_int_list, dest="elements", help="explicit ground set")
    p.add_argument("--class", dest="solution_class", type=_solution_class, default=SolutionClass.ALL)
    p.add_argument("--rhs", type=_int_list, help="inhomogeneous right-hand side")

    p = add("enumerate", "list solutions of a class in a ground set")
    p.add_argument("--n", type=int)
    p.add_argument("--set", type=_int_list, dest="elements")
    p.add_argument("--class", dest="solution_class", type=_solution_class, default=SolutionClass.ALL)
    p.add_argument("--rhs", type=_int_list)
    p.add_argument("--limit", type=int, default=1000, help="stop after this many solutions")

    p = add("degrees", "maximum ell-degrees of the solution hypergraph on [n]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, help="one ell (default: all 1..m)")

    p = add("extremal", "largest proper-solution-free subset sizes")
    p.add_argument("--n", type=int, help="single n")
    p.add_argument("--ns", type=_int_list, help="ascending list of n values")
    p.add_argument("--budget-nodes", type=int, help="search node budget")

    p = add("supersat", "minimum solution count over delta-dense subsets of [n]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=_fraction, required=True)
    p.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int)

    p = add("simulate", "estimate a property probability on random sets [n]_p")
    p.add_argument("--property", choices=PROPERTIES, required=True)
    p.add_argument("--class", dest="solution_class", type=_solution_class, default=SolutionClass.PROPER)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epsilon", type=_fraction)
    p.add_argument("--colors", type=int)
    p.add_argument("--budget-nodes", type=int)

    p = add("sweep", "threshold sweep over p = C * n^(-1/exponent)")
    p.add_argument("--property", choices=PROPERTIES, required=True)
    p.add_argument("--class", dest="solution_class", type=_solution_class, default=SolutionClass.PROPER)
    p.add_argument("--exponent", choices=["m1", "m"], default="m1")
    p.add_argument("--n", type=_int_list, required=True, help="n grid, e.g. 500,1000")
    p.add_argument("--C", type=_fraction_list, required=True, help="C grid, e.g. 0.1,1,10")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epsilon", type=_fraction)
    p.add_argument("--colors", type=int)
    p.add_argument("--budget-nodes", type=int)
    p.add_argument("--csv", help="also write the curve to this CSV file")

    return parser


def _ground(args) -> tuple[int, ...]:
    if getattr(args, "n", None) is not None and getattr(args, "elements", None) is not None:
        raise UsageError("give either --n or --set, not both")
    if getattr(args, "n", None) is not None:
        return interval(args.n)
    if getattr(args, "elements", None) is not None:
        return tuple(args.elements)
    raise UsageError("need --n or --set")


def _cmd_classify(system, args) -> tuple[Report, int]:
    report = Report("classify", {"system": system_to_json(system)})
    result = classify(system)
    report.add("name", system.label())
    report.add("rank", system.rank)
    for flag in ("irredundant", "positive", "abundant", "partition_regular",
                 "density_regular", "invariant"):
        report.add(flag, getattr(result, flag))
    report.add(
        "m1",
        _density_cell(result.m1) if result.m1 else None,
        text=f"m1: {result.m1.value} (witness Q={list(result.m1.witness)})"
        if result.m1
        else "m1: - (not abundant)",
    )
    report.add(
        "m",
        _density_cell(result.m),
        text=f"m: {result.m.value} (witness Q={list(result.m.witness)})",
    )
    report.add("proper_solution", result.proper_solution)
    report.add("positive_solution", result.positive_solution)
    report.add("failing_pair", result.failing_pair)
    report.add("column_blocks", result.blocks)
    return report, EXIT_OK


def _cmd_density(system, args) -> tuple[Report, int]:
    report = Report("density", {"system": system_to_json(system), "kind": args.kind})
    if args.kind in ("m1", "both"):
        try:
            report.add("m1", _density_cell(max_one_density(system)))
        except IllDefinedDensityError as exc:
            report.add("m1", _density_cell(exc))
    if args.kind in ("m", "both"):
        try:
            report.add("m", _density_cell(max_density(system)))
        except IllDefinedDensityError as exc:
            report.add("m", _density_cell(exc))
    return report, EXIT_OK


def _cmd_subsystem(system, args) -> tuple[Report, int]:
    sub = subsystem(system, args.cols)
    doc = system_to_json(sub)
    report = Report("subsystem", {"system": system_to_json(system), "cols": args.cols})
    report.add("subsystem", doc, text=json.dumps(doc))
    return report, EXIT_OK


def _cmd_patterns(system, args) -> tuple[Report, int]:
    report = Report(
        "patterns", {"system": system_to_json(system), "ground_n": args.ground_n}
    )
    algebraic = realized_patterns(system)
    report.add("patterns", [[list(b) for b in p.blocks] for p in algebraic])
    if args.ground_n is not None:
        within = patterns_realized_in(system, interval(args.ground_n))
        report.add("patterns_within_ground", [[list(b) for b in p.blocks] for p in within])
    return report, EXIT_OK


def _cmd_count(system, args) -> tuple[Report, int]:
    elements = _ground(args)
    value = count_solutions(system, elements, args.solution_class, rhs=args.rhs)
    report = Report(
        "count",
        {
            "system": system_to_json(system),
            "class": args.solution_class,
            "elements": list(elements),
            "rhs": args.rhs,
        },
    )
    report.add("count", value)
    return report, EXIT_OK


def _cmd_enumerate(system, args) -> tuple[Report, int]:
    elements = _ground(args)
    out = []
    for x in enumerate_solutions(system, elements, args.solution_class, rhs=args.rhs):
        out.append(list(x))
        if len(out) >= args.limit:
            break
    report = Report(
        "enumerate",
        {
            "system": system_to_json(system),
            "class": args.solution_class,
            "elements": list(elements),
            "rhs": args.rhs,
            "limit": args.limit,
        },
    )
    report.add("solutions", out, text="\n".join(str(tuple(x)) for x in out) or "(none)")
    report.add("truncated", len(out) >= args.limit)
    return report, EXIT_OK


def _cmd_degrees(system, args) -> tuple[Report, int]:
    ells = [args.ell] if args.ell is not None else list(range(1, system.cols + 1))
    report = Report("degrees", {"system": system_to_json(system), "n": args.n, "ell": args.ell})
    rows = []
    for ell in ells:
        profile = max_ell_degree(system, args.n, ell)
        rows.append(
            {
                "ell": ell,
                "max_degree": profile.max_degree,
                "attaining": list(profile.attaining) if profile.attaining else None,
            }
        )
    report.add(
        "degrees",
        rows,
        text="\n".join(
            f"ell={r['ell']}: max degree {r['max_degree']} at {r['attaining']}" for r in rows
        ),
    )
    return report, EXIT_OK


def _cmd_extremal(system, args) -> tuple[Report, int]:
    if (args.n is None) == (args.ns is None):
        raise UsageError("give exactly one of --n or --ns")
    report = Report(
        "extremal",
        {"system": system_to_json(system), "n": args.n, "ns": args.ns,
         "budget_nodes": args.budget_nodes},
    )
    exit_code = EXIT_OK
    if args.n is not None:
        res = extremal_number(system, args.n, node_budget=args.budget_nodes)
        report.add("n", res.n)
        report.add("value", res.value)
        report.add("witness", res.witness)
        report.add("exact", res.exact)
        report.add("upper_bound", res.upper_bound)
        if not res.exact:
            exit_code = EXIT_INDETERMINATE
    else:
        points = pi_sequence(system, args.ns, node_budget=args.budget_nodes)
        rows = [
            {"n": p.n, "value": p.value, "ratio": p.ratio, "exact": p.exact}
            for p in points
        ]
        report.add(
            "sequence",
            rows,
            text="\n".join(
                f"n={r['n']}: ex={r['value']} ratio={r['ratio']}"
                + ("" if r["exact"] else " (not exact)")
                for r in rows
            ),
        )
        if not all(p.exact for p in points):
            exit_code = EXIT_INDETERMINATE
    return report, exit_code


def _cmd_supersat(system, args) -> tuple[Report, int]:
    if args.mode == "sampled" and args.seed is None:
        raise UsageError("--mode sampled requires --seed")
    res = supersaturation_min(
        system, args.n, args.delta, mode=args.mode, samples=args.samples, seed=args.seed
    )
    report = Report(
        "supersat",
        {
            "system": system_to_json(system),
            "n": args.n,
            "delta": args.delta,
            "mode": args.mode,
            "samples": args.samples,
            "seed": args.seed,
        },
    )
    report.add("subset_size", res.subset_size)
    report.add("min_count", res.min_count)
    report.add("total_count", res.total_count)
    report.add("zeta", res.zeta)
    report.add("exact", res.exact)
    report.add("witness", res.witness)
    return report, EXIT_OK


def _estimate_row_payload(row) -> dict:
    return {
        "property": row.property,
        "class": row.solution_class,
        "n": row.n,
        "C": row.C,
        "p": row.p,
        "trials": row.trials,
        "successes": row.successes,
        "indeterminate": row.indeterminate,
        "estimate": row.estimate,
        "ci_low": row.ci_low,
        "ci_high": row.ci_high,
        "seed": row.seed,
    }


def _cmd_simulate(system, args) -> tuple[Report, int]:
    config = TrialConfig(
        n=args.n,
        p=args.p,
        trials=args.trials,
        seed=args.seed,
        solution_class=args.solution_class,
        epsilon=args.epsilon,
        colors=args.colors,
        node_budget=args.budget_nodes,
    )
    row = estimate_probability(system, config, args.property)
    report = Report(
        "simulate",
        {
            "system": system_to_json(system),
            "property": args.property,
            "class": args.solution_class,
            "n": args.n,
            "p": args.p,
            "trials": args.trials,
            "seed": args.seed,
            "epsilon": args.epsilon,
            "colors": args.colors,
            "budget_nodes": args.budget_nodes,
        },
    )
    payload = _estimate_row_payload(row)
    report.add(
        "estimate",
        payload,
        text=f"estimate: {row.estimate} ({row.successes}/{row.trials - row.indeterminate} "
        f"decided, {row.indeterminate} indeterminate, 95% CI "
        f"[{row.ci_low:.4f}, {row.ci_high:.4f}])",
    )
    return report, EXIT_INDETERMINATE if row.indeterminate else EXIT_OK


def _cmd_sweep(system, args) -> tuple[Report, int]:
    curve = threshold_sweep(
        system,
        ns=args.n,
        Cs=args.C,
        exponent_source=args.exponent,
        prop=args.property,
        solution_class=args.solution_class,
        trials=args.trials,
        seed=args.seed,
        epsilon=args.epsilon,
        colors=args.colors,
        node_budget=args.budget_nodes,
    )
    report = Report(
        "sweep",
        {
            "system": system_to_json(system),
            "property": args.property,
            "class": args.solution_class,
            "exponent": args.exponent,
            "n": args.n,
            "C": [str(c) for c in args.C],
            "trials": args.trials,
            "seed": args.seed,
            "epsilon": args.epsilon,
            "colors": args.colors,
        },
    )
    report.add("exponent_value", curve.exponent)
    if curve.reference_c is not None:
        report.add("reference_c", curve.reference_c)
    rows = [_estimate_row_payload(r) for r in curve.rows]
    report.add(
        "rows",
        rows,
        text="\n".join(
            f"n={r['n']} C={r['C']} p={r['p']:.6g}: {r['successes']}/{r['trials']}"
            + (f" ({r['indeterminate']} indeterminate)" if r["indeterminate"] else "")
            for r in rows
        )
        or "(empty grid)",
    )
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            write_curve_csv(curve, fh)
        report.add("csv", args.csv)
    indeterminate = sum(r.indeterminate for r in curve.rows)
    return report, EXIT_INDETERMINATE if indeterminate else EXIT_OK


_COMMANDS = {
    "classify": _cmd_classify,
    "density": _cmd_density,
    "subsystem": _cmd_subsystem,
    "patterns": _cmd_patterns,
    "count": _cmd_count,
    "enumerate": _cmd_enumerate,
    "degrees": _cmd_degrees,
    "extremal": _cmd_extremal,
    "supersat": _cmd_supersat,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        system = parse_system(args.system)
        report, code = _COMMANDS[args.subcommand](system, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RadoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report.emit(args.json)
    return code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
