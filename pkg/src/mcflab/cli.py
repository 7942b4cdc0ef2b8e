"""``mcf-lab``: catalogue, expansions, measures, duality checks and figures."""

from __future__ import annotations

import argparse
import contextlib
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, montecarlo
from .duality import dual_check, involution_criterion_check, known_intertwiner, search_intertwiner
from .errors import McfError, NoKnownIntertwiner, OutOfDomain
from .figures import partition
from .measure import cylinder_measure, symmetry_test
from .permutations import all_permutations, involutions
from .report import Record, ReportDocument
from .systems import ALGORITHMS, FibredSystem, dualize, registry

EXIT_USAGE = 64

# digit strings whose comparison needs a caveat in the report
RECONSTRUCTED = {
    ("brun-mult", 2, ("1:1", "2:1")): "reconstructed comparison: the original inequality "
    "has the same string on both sides; compared here with the reversed string (2:1, 1:1)",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=montecarlo.default_seed(), help="RNG seed (env MCF_SEED; default 42)")
    g.add_argument("--samples", type=float, default=montecarlo.DEFAULT_SAMPLES, help="Monte Carlo samples")
    g.add_argument("--z-crit", type=float, default=5.0, help="z above which symmetry is violated")
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--json", dest="json_out", metavar="PATH", nargs="?", const="-", help="write the JSON report (stdout if no PATH)")
    g.add_argument("--csv", dest="csv_out", metavar="PATH", help="write a CSV table")
    g.add_argument("--strip-timings", action="store_true", help="omit wall-clock timings from the JSON report")
    return p


def _system_args(p: argparse.ArgumentParser, default_n: int | None = 2) -> None:
    p.add_argument("--system", required=True, choices=sorted(ALGORITHMS))
    p.add_argument("--n", type=int, default=default_n)
    p.add_argument("--dual", action="store_true", help="use the dual algorithm")
    p.add_argument("--unrestricted", action="store_true", help="selmer on the whole simplex (not full)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="mcf-lab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"mcf-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", parents=[common], help="registered algorithms")

    p = sub.add_parser("expand", parents=[common], help="digits of an orbit")
    p.add_argument("system", choices=sorted(ALGORITHMS))
    p.add_argument("x", help="comma-separated coordinates, e.g. 0.6,0.3")
    p.add_argument("--n", type=int, help="dimension (default: number of coordinates)")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--float", dest="use_float", action="store_true", help="floating-point orbit instead of exact decimals")
    p.add_argument("--dual", action="store_true")
    p.add_argument("--unrestricted", action="store_true")
    p.add_argument("--show-point", action="store_true", help="also print the final orbit point")

    for name, helptext in (("measure", "cylinder measure"), ("symmetry", "cylinder vs reversed cylinder")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _system_args(p)
        p.add_argument("--digits", required=True, help='comma-separated, e.g. "1,2", "(12),(123)", "1:1,2:1"')
        p.add_argument("--method", default="auto", choices=["auto", "change-of-variables", "direct-polytope"])

    p = sub.add_parser("dual-check", parents=[common], help="verify the known intertwiner")
    _system_args(p)
    p.add_argument("--probe", type=int, default=50, help="largest digit probed for unbounded alphabets")
    p.add_argument("--digits", help="explicit digits to probe")
    p.add_argument("--cell-samples", type=int, default=10_000)
    p.add_argument("--cell-bound", type=int, default=10, help="cell mapping on the first K+1 probed digits")

    p = sub.add_parser("dual-search", parents=[common], help="brute-force intertwiner search")
    _system_args(p)
    p.add_argument("--bound", type=int, default=1, help="entry bound")
    p.add_argument("--digits", help="digits to probe (default: the claimed set, or the first few)")
    p.add_argument("--all-digits", action="store_true", help="probe the whole (finite) alphabet")
    p.add_argument("--cell-samples", type=int, default=2_000)

    p = sub.add_parser("telephone", parents=[common], help="involution counts")
    p.add_argument("--max", type=int, default=6)

    p = sub.add_parser("figure", parents=[common], help="SVG of a planar partition")
    _system_args(p)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--bound", type=int, default=2, help="largest digit drawn for unbounded alphabets")
    p.add_argument("--frame", type=float, default=4.0, help="clip infinite dual axes at this value")
    p.add_argument("--size", type=int, default=480)
    p.add_argument("--svg-out", default="partition.svg")
    return parser


def _system(args) -> FibredSystem:
    n = 1 if args.system == "gauss" else args.n
    s = registry(args.system, n, restricted=not args.unrestricted)
    return dualize(s) if args.dual else s


def _parse_digits(system: FibredSystem, text: str) -> list:
    text = text.strip()
    if not text:
        return []
    if system.digit_kind == "perm":
        tokens = [t.strip() for t in text.replace("),", ")|").split("|")]
    else:
        tokens = [t.strip() for t in text.split(",")]
    return [system.parse_digit(t) for t in tokens]


def _inputs(system: FibredSystem, digits) -> dict:
    return {"system": system.name, "n": system.n, "digits": [system.format_digit(d) for d in digits]}


def cmd_list(args, report: ReportDocument) -> None:
    rows = []
    for name in ALGORITHMS:
        dims = [1] if name == "gauss" else list(range(2, 7))
        s = registry(name, dims[0])
        known = []
        for n in dims:
            try:
                known_intertwiner(name, n)
                known.append(n)
            except NoKnownIntertwiner:
                pass
        row = {
            "name": name,
            "n_range": [dims[0], dims[-1] if name == "gauss" else 9],
            "digit_kind": s.digit_kind,
            "alphabet": "finite" if s.finite_alphabet else "unbounded",
            "is_full": s.is_full,
            "intertwiner": bool(known),
            "domain": s.domain.describe()["kind"],
            "dual_domain": s.dual_domain.describe()["name"],
            "notes": s.notes,
        }
        rows.append(row)
        report.add(Record("catalogue", {"system": name}, [row], None))
    print(f"{'name':<10} {'n':<6} {'digits':<6} {'alphabet':<10} {'full':<6} {'phi':<4} dual domain")
    for r in rows:
        lo, hi = r["n_range"]
        print(
            f"{r['name']:<10} {f'{lo}..{hi}' if lo != hi else str(lo):<6} {r['digit_kind']:<6} {r['alphabet']:<10} "
            f"{str(r['is_full']).lower():<6} {'yes' if r['intertwiner'] else 'no':<4} {r['dual_domain']}"
        )


def cmd_expand(args, report: ReportDocument) -> int:
    coords = [t for t in args.x.replace(" ", "").strip("()").split(",") if t]
    try:
        x = tuple(float(t) if args.use_float else Fraction(t) for t in coords)
    except ValueError:
        raise OutOfDomain(f"cannot parse point {args.x!r}") from None
    n = args.n or len(x)
    if args.system == "gauss":
        n = 1
    if len(x) != n:
        raise OutOfDomain(f"expected {n} coordinates, got {len(x)}")
    s = registry(args.system, n, restricted=not args.unrestricted)
    s = dualize(s) if args.dual else s
    if args.steps > 0:
        s.digit_of(x)  # raises on a bad starting point
    exp = s.expand(x, args.steps)
    digits = [s.format_digit(d) for d in exp.digits]
    point = [str(v) for v in exp.point]
    report.add(
        Record(
            "expand",
            {"system": s.name, "n": n, "x": list(coords), "steps": args.steps},
            [{"digits": digits, "point": point, "complete": exp.complete}],
            None,
            exp.reason,
        )
    )
    if digits:
        print(" ".join(digits))
    if args.show_point:
        print("point: " + ", ".join(point))
    if not exp.complete:
        print(f"stopped after {len(digits)} digits: {exp.reason}", file=sys.stderr)
        return 3
    return 0


def _note(system: FibredSystem, digits) -> str:
    key = (system.name, system.n, tuple(system.format_digit(d) for d in digits))
    return RECONSTRUCTED.get(key, "")


def cmd_measure(args, report: ReportDocument) -> None:
    s = _system(args)
    digits = _parse_digits(s, args.digits)
    est = cylinder_measure(s, digits, int(args.samples), args.seed, args.method, args.workers)
    report.add(Record("cylinder-measure", _inputs(s, digits), [est.to_dict()], None, _note(s, digits)))
    print(f"{s.name} [{', '.join(est.digits)}]  {est.value:.10g} +- {est.stderr:.3g}  ({est.method}, {est.samples} samples)")


def cmd_symmetry(args, report: ReportDocument) -> None:
    s = _system(args)
    digits = _parse_digits(s, args.digits)
    v = symmetry_test(s, digits, int(args.samples), args.seed, args.method, args.z_crit, args.workers)
    note = _note(s, digits)
    if v.warning:
        note = (note + "; " if note else "") + "3 < z <= z_crit: consistent, but flagged"
    report.add(Record("symmetry", _inputs(s, digits), [v.forward.to_dict(), v.reversed.to_dict()], v.verdict, note))
    print(f"forward  [{', '.join(v.forward.digits)}]  {v.forward.value:.10g} +- {v.forward.stderr:.3g}")
    print(f"reversed [{', '.join(v.reversed.digits)}]  {v.reversed.value:.10g} +- {v.reversed.stderr:.3g}")
    print(f"z = {v.z:.3f}  verdict: {v.verdict}{' (warning)' if v.warning else ''}")
    if note:
        print(f"note: {note}")


def cmd_dual_check(args, report: ReportDocument) -> None:
    s = _system(args)
    probe = _parse_digits(s, args.digits) if args.digits else None
    tw = known_intertwiner(s.name, s.n)
    if probe is None and tw.digits == "all" and not s.finite_alphabet:
        probe = s.alphabet(args.probe)
    r = dual_check(s, tw, probe, args.cell_samples, args.cell_bound, args.seed)
    report.add(Record("dual-check", {"system": s.name, "n": s.n}, [r.to_dict()], r.verdict))
    print(r.to_markdown(), end="")


def cmd_dual_search(args, report: ReportDocument) -> None:
    s = _system(args)
    if args.all_digits:
        probe = list(all_permutations(s.n + 1)) if s.digit_kind == "perm" else s.alphabet(5)
    elif args.digits:
        probe = _parse_digits(s, args.digits)
    else:
        probe = None
    found = search_intertwiner(s, args.bound, probe, args.cell_samples, args.workers, args.seed)
    report.add(
        Record(
            "dual-search",
            {"system": s.name, "n": s.n, "bound": args.bound},
            [c.to_dict() for c in found],
            "found" if found else "none",
        )
    )
    if not found:
        print(f"no symmetric intertwiner with entries in [-{args.bound}, {args.bound}]")
    for c in found:
        print(f"{c.matrix.tolist()}  commutes on {c.digits_passed}/{c.digits_probed}  cells {100 * c.cell_fraction:.2f}%")


def cmd_telephone(args, report: ReportDocument) -> None:
    counts = [len(involutions(m)) for m in range(1, args.max + 1)]
    crit = {m: involution_criterion_check(m) for m in range(2, min(args.max, 6) + 1)}
    report.add(
        Record(
            "telephone",
            {"max": args.max},
            [{"counts": counts, "criterion": {str(k): v for k, v in crit.items()}}],
            "pass" if all(crit.values()) else "fail",
        )
    )
    print(",".join(map(str, counts)))


def cmd_figure(args, report: ReportDocument) -> None:
    s = _system(args)
    fig = partition(s, args.depth, args.bound, args.frame)
    svg = fig.svg(args.size)
    Path(args.svg_out).write_text(svg, encoding="utf-8")
    labels = [c.label for c in fig.cells]
    report.add(
        Record(
            "figure",
            {"system": s.name, "n": s.n, "depth": args.depth, "bound": args.bound},
            [{"cells": len(labels), "labels": labels, "tiling_error": fig.tiling_error()}],
            None,
            f"tail beyond {args.bound}" if fig.tail else "",
        )
    )
    print(f"{len(labels)} cells: {' '.join(labels)}" + (f"  (+ tail {fig.tail_label})" if fig.tail else ""))
    print(f"wrote {args.svg_out}")


COMMANDS = {
    "list": cmd_list,
    "expand": cmd_expand,
    "measure": cmd_measure,
    "symmetry": cmd_symmetry,
    "dual-check": cmd_dual_check,
    "dual-search": cmd_dual_search,
    "telephone": cmd_telephone,
    "figure": cmd_figure,
}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    report = ReportDocument(["mcf-lab", *argv], args.seed)
    # with the report on stdout, the human-readable table goes to stderr
    human = sys.stderr if args.json_out == "-" else sys.stdout
    try:
        with report.timed(args.command), contextlib.redirect_stdout(human):
            code = COMMANDS[args.command](args, report) or 0
    except McfError as exc:
        print(f"mcf-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"mcf-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json_out:
        text = report.to_json(args.strip_timings)
        if args.json_out == "-":
            sys.stdout.write(text)
        else:
            Path(args.json_out).write_text(text, encoding="utf-8")
    if args.csv_out:
        Path(args.csv_out).write_text(report.to_csv(), encoding="utf-8", newline="")
    return code


if __name__ == "__main__":
    sys.exit(main())
