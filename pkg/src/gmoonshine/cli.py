"""Command-line front end: expand, group, verify, tables check."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .exact import CycError
from .modgroup import (
    GroupError,
    check_relations,
    cusp_orbits,
    gamma_p_image,
    generate,
    genus,
    identify,
)
from .moonshine.cases import matrix_expr
from .moonshine.characters import TableError, load_char_table
from .moonshine.classes import CASE_IDS, CaseError, reduce_generators
from .moonshine.expectations import ExpectationError, data_dir, load_expectations
from .moonshine.verify import report_json, verify_case
from .qseries import SeriesError, build_eta_quotient, parse_spec, render_series, series_lines

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _emit(lines: list[str]) -> None:
    sys.stdout.write("".join(line + "\n" for line in lines))


def cmd_expand(args) -> int:
    try:
        s = build_eta_quotient(parse_spec(args.spec), args.trunc)
    except SeriesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        print(json.dumps({"spec": args.spec, "trunc": args.trunc, "lines": series_lines(s)}, indent=2))
    elif args.format == "lines":
        _emit(series_lines(s))
    else:
        print(render_series(s))
    return EXIT_OK


def _split_gens(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def cmd_group(args) -> int:
    p = args.p
    try:
        names = _split_gens(args.gens) if args.gens else []
        if names == [f"Gamma{p}-image"] or not names:
            G = gamma_p_image(p)
            elts = {}
        else:
            mats = {n: matrix_expr(n) for n in names}
            elts = dict(zip(names, reduce_generators(list(mats.values()), p)))
            G = generate(list(elts.values()), p)
        lines = []
        if args.action == "order":
            lines.append(f"ORDER {G.order}")
        elif args.action == "identify":
            name, census = identify(G)
            lines.append(f"IDENTIFY {name} order={G.order} census={_census(census)}")
        elif args.action == "genus":
            g = genus(G)
            lines.append(f"GENUS {g.genus} index={g.index} e2={g.e2} e3={g.e3} cusps={g.cusps}")
        elif args.action == "cusp-orbits":
            orbits = cusp_orbits(G)
            lines.append(f"ORBITS {len(orbits)}")
            lines += [f"ORBIT {i} size={len(o)} {' '.join(map(repr, o))}" for i, o in enumerate(orbits)]
        elif args.action == "relations":
            if not args.relations:
                print("error: --action relations needs --relations", file=sys.stderr)
                return EXIT_ERROR
            alias = {f"g{i + 1}": x for i, x in enumerate(elts.values())}
            res = check_relations({**elts, **alias}, [w.strip() for w in args.relations.split(",")])
            lines += [f"RELATION {w} {'PASS' if ok else 'FAIL'}" for w, ok in res]
            _out(args, lines)
            return EXIT_OK if all(ok for _, ok in res) else EXIT_FAIL
    except (GroupError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _out(args, lines)
    return EXIT_OK


def _census(c: dict) -> str:
    return ",".join(f"{k}:{v}" for k, v in c.items())


def _out(args, lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps({"lines": lines}, indent=2))
    else:
        _emit(lines)


def cmd_verify(args) -> int:
    if not args.all and not args.case:
        print("error: give --case ID or --all", file=sys.stderr)
        return EXIT_ERROR
    cases = list(CASE_IDS) if args.all else [args.case]
    tables = Path(args.tables) if args.tables else data_dir() / "tables"
    try:
        exp = load_expectations(args.expectations)
        reports = [verify_case(c, tables, exp, args.num_tol) for c in cases]
    except (CaseError, ExpectationError, TableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        print(report_json(reports))
    else:
        for r in reports:
            _emit([f"CASE {r.case_id}"] + r.lines())
    return EXIT_FAIL if any(r.failed for r in reports) else EXIT_OK


def cmd_tables(args) -> int:
    tables = Path(args.tables) if args.tables else data_dir() / "tables"
    files = sorted(tables.glob("*.tbl"))
    if not files:
        print(f"error: no table files in {tables}", file=sys.stderr)
        return EXIT_ERROR
    lines, bad = [], False
    for f in files:
        try:
            t = load_char_table(f)
            lines.append(
                f"CHECK table_{t.group_name} PASS expected=valid "
                f"computed=classes={len(t.classes)},irreducibles={len(t.irreducibles)},order={t.group_order}"
            )
        except (TableError, CycError) as exc:
            bad = True
            lines.append(f"CHECK table_{f.stem} FAIL expected=valid computed={str(exc).replace(' ', '_')}")
    _out(args, lines)
    return EXIT_FAIL if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gmoonshine", description="Exact checks for irrational generalised moonshine data.")
    ap.add_argument("--json", action="store_true", help="emit JSON instead of text lines")
    sub = ap.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", help="expand an eta-quotient expression")
    e.add_argument("spec")
    e.add_argument("--trunc", type=int, default=6)
    e.add_argument("--format", choices=["pretty", "lines"], default="pretty")
    e.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    e.set_defaults(func=cmd_expand)

    g = sub.add_parser("group", help="subgroup of PSL(2,p) generated by matrices")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--gens", default="", help="comma-separated names or [[a,b],[c,d]] literals")
    g.add_argument("--action", choices=["order", "identify", "genus", "cusp-orbits", "relations"], required=True)
    g.add_argument("--relations", default="", help="comma-separated words; generators are g1, g2, ... or their names")
    g.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    g.set_defaults(func=cmd_group)

    v = sub.add_parser("verify", help="run the per-case checks")
    v.add_argument("--case", choices=CASE_IDS)
    v.add_argument("--all", action="store_true")
    v.add_argument("--tables", default=None)
    v.add_argument("--expectations", default=None)
    v.add_argument("--num-tol", type=float, default=1e-6)
    v.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tables", help="character-table utilities")
    t.add_argument("action", choices=["check"])
    t.add_argument("--tables", default=None)
    t.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    t.set_defaults(func=cmd_tables)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
