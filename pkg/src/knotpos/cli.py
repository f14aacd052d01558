"""Command-line front end.

    knotpos braid profile "B4: 2 2 2 1 3 2 1 3"
    knotpos braid sub "B4: 2 2 2 1 3 2 1 3" --keep 1
    knotpos braid embed "B2: -1"
    knotpos braid keylemma "B4: 2 2 2 1 3 2 1 3" --partition "0|1"
    knotpos diagram profile "PD[X[1,3,2,4], X[3,1,4,2]]; components: [[1,2],[3,4]]"
    knotpos diagram seifert "B2: 1 1 1"
    knotpos nu bounds "B2: 1 1"
    knotpos obstruct qp-conc|qp|positive|braid-positive|alt-pure ...
    knotpos table [--catalog FILE] [--format csv]

Link arguments are braid text (``B<n>: ...``) or PD text, given inline,
with ``--file``, or as ``--entry NAME`` from the catalog. Exit codes: 0 ok,
2 parse or schema error, 3 precondition error, 4 inconsistent formulas.
Errors print one line ``error[<Kind>]: <message>`` on stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .braid import (
    BraidWord,
    braid_profile,
    embed_quasipositive,
    factor_product,
    key_lemma_identity,
    parse_braid,
    sub_braid,
)
from .catalog import CATALOG_ENV, analyze_entry, default_catalog_path, load_catalog, render_table
from .diagram import LinkDiagram, diagram_profile, parse_pd, seifert_analysis
from .errors import (
    ConsistencyError,
    InputError,
    KnotposError,
    MissingInput,
    PreconditionError,
)
from .invariants import nu_bounds
from .linking import ComponentPartition, LinkingMatrix, all_partitions
from .obstruct import (
    LinkData,
    ObstructionReport,
    check_concordance_qp,
    check_positive,
    check_positive_braid,
    check_qp,
    classify_alt_pure,
)

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_CONSISTENCY = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # one diagnostic line; the usage text is behind --help
        print(f"error[Usage]: {self.prog}: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


# ---------------------------------------------------------------- inputs

def _read_text(args) -> str:
    given = [x for x in (args.text, args.file, getattr(args, "entry", None)) if x is not None]
    if len(given) != 1:
        raise InputError("give exactly one input: inline text, --file or --entry")
    if args.file is not None:
        try:
            return Path(args.file).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror}") from exc
    return args.text


def _is_braid(text: str) -> bool:
    return text.lstrip().upper().startswith("B")


def _braid(args) -> BraidWord:
    text = _read_text(args)
    if not _is_braid(text):
        raise InputError("expected braid text 'B<n>: j1 j2 ...'")
    return parse_braid(text)


def _load(args) -> tuple[Path, list]:
    path = Path(args.catalog) if args.catalog else default_catalog_path()
    try:
        return path, load_catalog(path)
    except OSError as exc:
        raise InputError(f"cannot read catalog {path}: {exc.strerror}") from exc


def _entry(args):
    path, entries = _load(args)
    for e in entries:
        if e.name == args.entry:
            return e
    raise InputError(f"no entry named {args.entry!r} in {path}")


def _linkdata(args) -> LinkData:
    """LinkData from inline/file input or a catalog entry, plus flag overrides."""
    if getattr(args, "entry", None) is not None:
        if args.text is not None or args.file is not None:
            raise InputError("give exactly one input: inline text, --file or --entry")
        data = _entry(args).to_linkdata()
    else:
        text = _read_text(args)
        if _is_braid(text):
            data = LinkData.from_braid(parse_braid(text))
        else:
            data = LinkData.from_diagram(parse_pd(text))
    if getattr(args, "mirror", False):
        data = data.mirror()
    over: dict[str, Any] = {}
    for key in ("u", "wsp", "ssp", "chi4", "slc_bound"):
        if getattr(args, key, None) is not None:
            over[key] = getattr(args, key)
    if getattr(args, "u_components", None):
        over["u_components"] = tuple(_int_list(args.u_components))
    if getattr(args, "linking", None):
        try:
            over["linking"] = LinkingMatrix(tuple(map(tuple, json.loads(args.linking))))
        except (ValueError, TypeError) as exc:
            raise InputError(f"bad --linking matrix: {exc}") from exc
    if getattr(args, "not_split", False):
        over["completely_split"] = False
    if getattr(args, "components_positive_braid", False):
        over["components_positive_braid"] = True
    return replace(data, **over) if over else data


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise InputError(f"expected integers separated by commas, got {text!r}") from exc


def _diagram(args) -> LinkDiagram:
    data = _linkdata(args)
    if data.diagram is None:
        raise MissingInput("this input has no diagram")
    return data.diagram


# --------------------------------------------------------------- outputs

def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out += _flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return out
    return [(prefix, obj)]


def _value(v: Any) -> str:
    if isinstance(v, str):
        return v
    return json.dumps(v, ensure_ascii=False, separators=(",", ":"))


def _emit(record: dict, fmt: str) -> None:
    rows = _flatten(record)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("key", "value"))
        w.writerows((k, _value(v)) for k, v in rows)
        sys.stdout.write(buf.getvalue())
    else:
        width = max((len(k) for k, _ in rows), default=0)
        for k, v in rows:
            print(f"{k.ljust(width)}  {_value(v)}")


def _emit_report(rep: ObstructionReport, fmt: str) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("test", "verdict", "condition", "lhs", "op", "rhs", "holds"))
        for c in rep.conditions:
            w.writerow((rep.test_id, rep.verdict.value, c.name, sum(c.lhs), c.op, sum(c.rhs), json.dumps(c.holds)))
        if not rep.conditions:
            w.writerow((rep.test_id, rep.verdict.value, "", "", "", "", ""))
        sys.stdout.write(buf.getvalue())
    else:
        print(rep.to_text())


# -------------------------------------------------------------- commands

def cmd_braid_profile(args):
    _emit(braid_profile(_braid(args)).as_dict(), args.format)


def cmd_braid_sub(args):
    b = _braid(args)
    keep = _int_list(args.keep)
    _emit({"input": str(b), "keep": keep, "sub_braid": str(sub_braid(b, keep))}, args.format)


def cmd_braid_embed(args):
    e = embed_quasipositive(_braid(args))
    rec = {
        "input": str(e.input),
        "output": str(e.output),
        "insertions": [{"letter": r, "word": list(w)} for r, w in e.insertion_records],
        "factors": [f.witness for f in e.decomposition],
        "product_matches_output": list(factor_product(e.decomposition)) == list(e.output.letters),
        "added_linking": e.added_linking,
    }
    _emit(rec, args.format)


def cmd_braid_keylemma(args):
    b = _braid(args)
    if args.partition:
        parts = [ComponentPartition.parse(args.partition, b.num_components)]
    else:
        parts = list(all_partitions(b.num_components, min_blocks=2))
    rows = []
    for P in parts:
        r = key_lemma_identity(b, P)
        rows.append({"partition": str(P), "sl": r.self_linking, "block_sl": list(r.block_self_linking),
                     "lhs": r.lhs, "rhs": r.rhs, "holds": r.holds})
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else ["partition"], lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: _value(v) for k, v in row.items()})
        sys.stdout.write(buf.getvalue())
    else:
        for row in rows:
            print(json.dumps(row, sort_keys=True))


def cmd_diagram_profile(args):
    _emit(diagram_profile(_diagram(args)).as_dict(), args.format)


def cmd_diagram_seifert(args):
    r = seifert_analysis(_diagram(args))
    _emit(
        {
            "vertices": r.num_vertices,
            "edges": r.num_edges,
            "reduced_edges": r.num_reduced_edges,
            "homogeneous": r.is_homogeneous,
            "reduced_is_tree": r.reduced_is_tree,
            "fibred_if_positive": r.fibred_positive_verdict,
        },
        args.format,
    )


def cmd_nu_bounds(args):
    nu = nu_bounds(_diagram(args), strict=not args.lenient)
    _emit(nu.as_dict(), args.format)


def _partitions_arg(args, ell: int):
    if not args.partition:
        return "all"
    return [ComponentPartition.parse(p, ell) for p in args.partition]


def cmd_obstruct_qp_conc(args):
    data = _linkdata(args)
    _emit_report(check_concordance_qp(data, _partitions_arg(args, data.num_components)), args.format)


def cmd_obstruct_qp(args):
    data = _linkdata(args)
    _emit_report(check_qp(data, ComponentPartition.parse(args.partition, data.num_components)), args.format)


def cmd_obstruct_positive(args):
    _emit_report(check_positive(_linkdata(args)), args.format)


def cmd_obstruct_braid_positive(args):
    _emit_report(check_positive_braid(_linkdata(args)), args.format)


def cmd_obstruct_alt_pure(args):
    v = classify_alt_pure(_braid(args))
    if args.format == "csv":
        _emit({"verdict": v.verdict, "pieces": [list(p) for p in v.pieces],
               "factors": list(v.factors), "reason": v.reason}, "csv")
    else:
        print(v.verdict)
        print(v.to_text())


def cmd_table(args):
    _, entries = _load(args)
    if args.verbose < 1:
        # every homogeneous multi-component row logs the upper-bound mismatch
        logging.getLogger("knotpos").setLevel(logging.ERROR)
    sys.stdout.write(render_table([analyze_entry(e) for e in entries], args.format))


# ---------------------------------------------------------------- parser

def _add_input(p: argparse.ArgumentParser, entry: bool = False) -> None:
    p.add_argument("text", nargs="?", help="inline braid or PD text")
    p.add_argument("--file", help="read the braid or PD text from a file")
    if entry:
        p.add_argument("--entry", help="use a named catalog entry")
        p.add_argument("--catalog", help=f"catalog file (default ${CATALOG_ENV} or the bundled table)")
        p.add_argument("--mirror", action="store_true", help="use the mirror image")
    p.add_argument("--format", choices=("text", "csv"), default="text")


def _add_scalars(p: argparse.ArgumentParser) -> None:
    p.add_argument("--u", type=int, help="unlinking number")
    p.add_argument("--u-components", dest="u_components", help="unknotting numbers of the components, e.g. 0,1")
    p.add_argument("--wsp", type=int, help="splitting number")
    p.add_argument("--ssp", type=int, help="strong splitting number")
    p.add_argument("--linking", help="linking matrix as JSON, overrides the computed one")
    p.add_argument("--not-split", dest="not_split", action="store_true",
                   help="assert the link is not completely split")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="knotpos", description="Braid and link invariants and positivity obstructions.")
    ap.add_argument("--version", action="version", version=f"knotpos {__version__}")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    ap.add_argument("-q", "--quiet", action="store_true")
    top = ap.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = top.add_parser("braid", help="braid words").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("profile", help="writhe, self-linking, permutation and components")
    _add_input(p)
    p.set_defaults(func=cmd_braid_profile)
    p = g.add_parser("sub", help="sub-braid on chosen closure components")
    _add_input(p)
    p.add_argument("--keep", required=True, help="0-based component indices, e.g. 0,2")
    p.set_defaults(func=cmd_braid_sub)
    p = g.add_parser("embed", help="add a strand making the braid quasi-positive")
    _add_input(p)
    p.set_defaults(func=cmd_braid_embed)
    p = g.add_parser("keylemma", help="self-linking additivity over a component partition")
    _add_input(p)
    p.add_argument("--partition", help='blocks like "0,1|2"; default: every partition with two or more blocks')
    p.set_defaults(func=cmd_braid_keylemma)

    g = top.add_parser("diagram", help="link diagrams").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("profile", help="crossing, Seifert and linking statistics")
    _add_input(p, entry=True)
    p.set_defaults(func=cmd_diagram_profile)
    p = g.add_parser("seifert", help="Seifert graph: homogeneity and the fibredness test")
    _add_input(p, entry=True)
    p.set_defaults(func=cmd_diagram_seifert)

    g = top.add_parser("nu", help="slice-torus bounds").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("bounds", help="bounds on 2*nu from a diagram")
    _add_input(p, entry=True)
    p.add_argument("--lenient", action="store_true",
                   help="report inconsistent upper formulas instead of failing")
    p.set_defaults(func=cmd_nu_bounds)

    g = top.add_parser("obstruct", help="obstruction tests").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("qp-conc", help="concordance to a quasi-positive link")
    _add_input(p, entry=True)
    p.add_argument("--partition", action="append", help="restrict to this partition (repeatable)")
    p.add_argument("--chi4", type=int, help="four-ball Euler characteristic")
    p.add_argument("--slc-bound", dest="slc_bound", type=int, help="upper bound on sl_c")
    p.add_argument("--u-components", dest="u_components", help="unknotting numbers of the components")
    p.set_defaults(func=cmd_obstruct_qp_conc)
    p = g.add_parser("qp", help="quasi-positivity via sl_max on a partition")
    _add_input(p, entry=True)
    p.add_argument("--partition", required=True, help='blocks like "0|1"')
    p.set_defaults(func=cmd_obstruct_qp)
    p = g.add_parser("positive", help="lk = wsp = ssp = u - sum u(K_i)")
    _add_input(p, entry=True)
    _add_scalars(p)
    p.set_defaults(func=cmd_obstruct_positive)
    p = g.add_parser("braid-positive", help="positive-braid tests on a positive diagram")
    _add_input(p, entry=True)
    p.add_argument("--u", type=int, help="unlinking number")
    p.add_argument("--components-positive-braid", dest="components_positive_braid", action="store_true",
                   help="components are positive-braid knots")
    p.set_defaults(func=cmd_obstruct_braid_positive)
    p = g.add_parser("alt-pure", help="classify an alternating pure braid")
    _add_input(p)
    p.set_defaults(func=cmd_obstruct_alt_pure)

    p = top.add_parser("table", help="positivity table for a catalog")
    p.add_argument("--catalog", help=f"catalog file (default ${CATALOG_ENV} or the bundled table)")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_table)
    return ap


def _exit_code(exc: KnotposError) -> int:
    if isinstance(exc, InputError):
        return EXIT_INPUT
    if isinstance(exc, PreconditionError):
        return EXIT_PRECONDITION
    if isinstance(exc, ConsistencyError):
        return EXIT_CONSISTENCY
    return 1


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, --version and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    level = logging.ERROR if args.quiet else (logging.INFO if args.verbose else logging.WARNING)
    # a fresh handler per call, bound to whatever sys.stderr is right now
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log = logging.getLogger("knotpos")
    old_level, old_propagate = log.level, log.propagate
    log.addHandler(handler)
    log.setLevel(level)
    log.propagate = False
    try:
        args.func(args)
    except KnotposError as exc:
        msg = " ".join(str(exc).split())
        print(f"error[{type(exc).__name__}]: {msg}", file=sys.stderr)
        return _exit_code(exc)
    finally:
        log.removeHandler(handler)
        log.setLevel(old_level)
        log.propagate = old_propagate
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
