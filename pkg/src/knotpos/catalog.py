"""Link catalogs, built-in example families, batch analysis and table output.

Catalog files are JSON Lines, one entry per line, schema ``"v1"``:

``schema``       "v1" (required)
``name``         unique string (required)
``components``   declared component count (optional, checked)
``braid``        braid text ``B<n>: j1 ...`` (one of braid, pd, stats required)
``pd``           PD text with a ``components:`` clause
``orientation``  orientation variant label, e.g. ``"{1}"``
``scalars``      object: signature, chi4, u, u_components, wsp, ssp,
                 linking_matrix, slmax (``{"0,1": [lo, hi]}``), nu2
``flags``        object: positive_expected, braid_positive_expected,
                 completely_split, fibred, twist_knot, twist_summands,
                 hopf_factor, components_positive_braid
``stats``        positive-diagram statistics: x, o, ell,
                 component_x_sum, component_o_sum
``expected``     reference table marks (P, P_note, 1.6, BP, BP_note, 1.9)
``provenance``   object mapping field names to source notes

Unknown keys, at the top level or inside the objects, are preserved.
"""
from __future__ import annotations

import csv
import io
import json
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .braid import BraidWord, braid_closure, parse_braid
from .diagram import (
    LinkDiagram,
    mirror,
    parse_pd,
    seifert_analysis,
    strand_diagram,
)
from .errors import BadParameter, InputError, SchemaError, DuplicateName, UnknownExample
from .invariants import NuInterval, PositiveDiagramStats
from .linking import LinkingMatrix
from .obstruct import (
    LinkData,
    ObstructionReport,
    Verdict,
    check_concordance_qp,
    check_positive,
    check_positive_braid,
)

SCHEMA = "v1"
CATALOG_ENV = "KNOTPOS_CATALOG"
_KNOWN = ("schema", "name", "components", "braid", "pd", "orientation", "scalars", "flags",
          "stats", "expected", "provenance")
_INT_SCALARS = ("signature", "chi4", "u", "wsp", "ssp", "nu2")
_BOOL_FLAGS = ("positive_expected", "braid_positive_expected", "completely_split", "fibred",
               "hopf_factor", "components_positive_braid")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    braid: BraidWord | None = None
    pd: str | None = None
    orientation: str | None = None
    components: int | None = None
    scalars: Mapping[str, Any] = field(default_factory=dict)
    flags: Mapping[str, Any] = field(default_factory=dict)
    stats: Mapping[str, int] | None = None
    expected: Mapping[str, str] = field(default_factory=dict)
    provenance: Mapping[str, str] = field(default_factory=dict)
    extra: Mapping[str, Any] = field(default_factory=dict)

    @classmethod
    def from_record(cls, rec: Mapping[str, Any], line: int | None = None) -> "CatalogEntry":
        if not isinstance(rec, Mapping):
            raise SchemaError("record must be a JSON object", line)
        if rec.get("schema") != SCHEMA:
            raise SchemaError(f"unsupported schema {rec.get('schema')!r} (expected {SCHEMA!r})", line)
        name = rec.get("name")
        if not isinstance(name, str) or not name:
            raise SchemaError("name must be a nonempty string", line)
        if rec.get("braid") is None and rec.get("pd") is None and rec.get("stats") is None:
            raise SchemaError(f"{name}: needs a braid, a pd or stats", line)
        for key in ("scalars", "flags", "expected", "provenance"):
            if key in rec and not isinstance(rec[key], Mapping):
                raise SchemaError(f"{name}: {key} must be an object", line)
        scalars = dict(rec.get("scalars", {}))
        flags = dict(rec.get("flags", {}))
        for k in _INT_SCALARS:
            if k in scalars and scalars[k] is not None and not _is_int(scalars[k]):
                raise SchemaError(f"{name}: scalar {k} must be an integer", line)
        for k in _BOOL_FLAGS:
            if k in flags and flags[k] is not None and not isinstance(flags[k], bool):
                raise SchemaError(f"{name}: flag {k} must be true, false or null", line)
        try:
            braid = parse_braid(rec["braid"]) if rec.get("braid") is not None else None
            D = parse_pd(rec["pd"]) if rec.get("pd") is not None else None
        except InputError as exc:
            raise SchemaError(f"{name}: {exc}", line) from exc
        counts = {}
        if rec.get("components") is not None:
            if not _is_int(rec["components"]) or rec["components"] < 1:
                raise SchemaError(f"{name}: components must be a positive integer", line)
            counts["components"] = rec["components"]
        if braid is not None:
            counts["braid"] = braid.num_components
        if D is not None:
            counts["pd"] = D.num_components
        if scalars.get("linking_matrix") is not None:
            try:
                counts["linking_matrix"] = LinkingMatrix(tuple(map(tuple, scalars["linking_matrix"]))).size
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"{name}: bad linking_matrix ({exc})", line) from exc
        for key in ("u_components", "twist_knot", "twist_summands"):
            src = scalars if key == "u_components" else flags
            if src.get(key) is not None:
                if not isinstance(src[key], list):
                    raise SchemaError(f"{name}: {key} must be a list", line)
                counts[key] = len(src[key])
        stats = rec.get("stats")
        if stats is not None:
            try:
                counts["stats"] = _stats(stats).ell
            except (KeyError, TypeError, InputError, ValueError) as exc:
                raise SchemaError(f"{name}: bad stats ({exc})", line) from exc
        if len(set(counts.values())) > 1:
            raise SchemaError(f"{name}: inconsistent component counts {counts}", line)
        return cls(
            name=name,
            braid=braid,
            pd=rec.get("pd"),
            orientation=rec.get("orientation"),
            components=rec.get("components"),
            scalars=scalars,
            flags=flags,
            stats=dict(stats) if stats is not None else None,
            expected=dict(rec.get("expected", {})),
            provenance=dict(rec.get("provenance", {})),
            extra={k: v for k, v in rec.items() if k not in _KNOWN},
        )

    def to_record(self) -> dict:
        rec: dict[str, Any] = {"schema": SCHEMA, "name": self.name}
        if self.components is not None:
            rec["components"] = self.components
        if self.orientation is not None:
            rec["orientation"] = self.orientation
        if self.braid is not None:
            rec["braid"] = str(self.braid)
        if self.pd is not None:
            rec["pd"] = self.pd
        for key in ("scalars", "flags", "stats", "expected", "provenance"):
            val = getattr(self, key)
            if val:
                rec[key] = dict(val)
        rec.update(self.extra)
        return rec

    def to_json(self) -> str:
        return json.dumps(self.to_record(), ensure_ascii=False, separators=(", ", ": "))

    @property
    def diagram(self) -> LinkDiagram | None:
        if self.pd is not None:
            return parse_pd(self.pd)
        if self.braid is not None:
            return braid_closure(self.braid)
        return None

    def to_linkdata(self) -> LinkData:
        """LinkData for analysis.

        The PD is authoritative when present; the catalog linking matrix is
        not used because its mirror convention need not match the PD. A
        braid is attached only when it is the sole geometric input.
        """
        s, f = self.scalars, self.flags
        D = self.diagram
        nu = None
        if s.get("nu2") is not None:
            nu = NuInterval.exact_value(s["nu2"], "catalog")
        slmax = {}
        for key, (lo, hi) in (s.get("slmax") or {}).items():
            slmax[frozenset(int(t) for t in key.split(","))] = (lo, hi)
        linking = None
        if D is None and s.get("linking_matrix") is not None:
            linking = LinkingMatrix(tuple(map(tuple, s["linking_matrix"])))
        return LinkData(
            name=self.name,
            diagram=D,
            braid=self.braid if self.pd is None else None,
            linking=linking,
            nu=nu,
            chi4=s.get("chi4"),
            signature=s.get("signature"),
            u=s.get("u"),
            u_components=_tuple_or_none(s.get("u_components")),
            wsp=s.get("wsp"),
            ssp=s.get("ssp"),
            slmax=slmax,
            completely_split=f.get("completely_split"),
            positive=f.get("positive_expected"),
            twist_knot=_tuple_or_none(f.get("twist_knot")),
            twist_summands=_tuple_or_none(f.get("twist_summands")),
            hopf_factor=f.get("hopf_factor"),
            components_positive_braid=f.get("components_positive_braid"),
            stats=_stats(self.stats) if self.stats is not None else None,
            provenance=dict(self.provenance),
        )


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _tuple_or_none(v):
    return tuple(v) if v is not None else None


def _stats(d: Mapping[str, int]) -> PositiveDiagramStats:
    return PositiveDiagramStats(
        int(d["x"]), int(d["o"]), int(d["ell"]), int(d["component_x_sum"]), int(d["component_o_sum"])
    )


# --------------------------------------------------------------- file IO

def loads_catalog(text: str) -> list[CatalogEntry]:
    entries: list[CatalogEntry] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON ({exc.msg})", lineno) from exc
        entry = CatalogEntry.from_record(rec, lineno)
        if entry.name in seen:
            raise DuplicateName(f"name {entry.name!r} already used on line {seen[entry.name]}", lineno)
        seen[entry.name] = lineno
        entries.append(entry)
    return entries


def load_catalog(path: str | os.PathLike) -> list[CatalogEntry]:
    return loads_catalog(Path(path).read_text(encoding="utf-8"))


def dumps_catalog(entries: Iterable[CatalogEntry]) -> str:
    return "".join(e.to_json() + "\n" for e in entries)


def dump_catalog(entries: Iterable[CatalogEntry], path: str | os.PathLike) -> None:
    Path(path).write_text(dumps_catalog(entries), encoding="utf-8")


def bundled_catalog_path() -> Path:
    return Path(str(resources.files("knotpos") / "data" / "table1.jsonl"))


def bundled_examples_path() -> Path:
    """Small worked-example catalog: Hopf and torus links, twist knots, sums,
    and a statistics-only positive diagram."""
    return Path(str(resources.files("knotpos") / "data" / "examples.jsonl"))


def default_catalog_path() -> Path:
    env = os.environ.get(CATALOG_ENV)
    return Path(env) if env else bundled_catalog_path()


# ------------------------------------------------------- built-in examples

def whitehead_family(k: int, twists: str = "down", clasp: str = "up") -> LinkDiagram:
    """Plat diagram with two twist boxes of k full twists and one clasp.

    Positions 1-2 carry the first component and 3-4 the second. Each box
    has 2k crossings between positions 2 and 3; between the boxes the
    second component crosses itself once. The strands through the first
    box run parallel and those through the second antiparallel, so the
    linking number vanishes. ``twists`` and ``clasp`` choose which strand
    passes over ("down" or "up").
    """
    events = [(2, twists)] * (2 * k) + [(3, clasp)] + [(2, twists)] * (2 * k)
    joins = [(("L", 1), ("L", 2)), (("L", 3), ("L", 4)), (("R", 1), ("R", 2)), (("R", 3), ("R", 4))]
    return strand_diagram(4, events, joins, [("L", 1), ("L", 4)])


BUILTIN_NAMES = ("Dk", "fig3", "borromean", "torus2n", "hopf")


def builtin_example(name: str, k: int | None = None) -> BraidWord | LinkDiagram:
    """The example families: ``Dk`` (k >= 1), ``torus2n`` (n >= 1) and the
    fixed ``fig3``, ``borromean`` and ``hopf`` braids."""
    if name == "Dk":
        if not _is_int(k) or k < 1:
            raise BadParameter(f"Dk needs an integer k >= 1, got {k!r}")
        return whitehead_family(k)
    if name == "torus2n":
        if not _is_int(k) or k < 1:
            raise BadParameter(f"torus2n needs an integer n >= 1, got {k!r}")
        return BraidWord(2, (1,) * (2 * k))
    fixed = {
        "fig3": BraidWord(4, (2, 2, 2, 1, 3, 2, 1, 3)),
        "borromean": BraidWord(3, (1, -2, 1, -2, 1, -2)),
        "hopf": BraidWord(2, (1, 1)),
    }
    if name in fixed:
        if k is not None:
            raise BadParameter(f"{name} takes no parameter")
        return fixed[name]
    raise UnknownExample(f"unknown example {name!r}; choose from {', '.join(BUILTIN_NAMES)}")


# --------------------------------------------------------------- analysis

@dataclass(frozen=True)
class EntryAnalysis:
    entry: CatalogEntry
    reports: Mapping[str, ObstructionReport]
    marks: Mapping[str, str]
    notes: Mapping[str, str]


def _positive_version(D: LinkDiagram | None) -> LinkDiagram | None:
    if D is None or not D.crossings:
        return D
    signs = {x.sign for x in D.crossings}
    if signs == {1}:
        return D
    if signs == {-1}:
        return mirror(D)
    return None


def _component_sign_obstruction(data: LinkData) -> bool:
    """Positive links have nonnegative linking numbers and components with
    nu >= 0. True when every mirror version passing the first test fails
    the second."""
    candidates = []
    for version in (data, data.mirror()):
        lk = version.linking_matrix()
        if lk is not None and all(v >= 0 for _, _, v in lk.pairs()):
            candidates.append(version)

    def negative_component(version: LinkData) -> bool:
        for i in range(version.num_components):
            nu = version.nu_of([i])
            if nu is not None and nu.exact and nu.value2 < 0:
                return True
        return False

    return bool(candidates) and all(negative_component(v) for v in candidates)


def analyze_entry(e: CatalogEntry) -> EntryAnalysis:
    data = e.to_linkdata()
    reports: dict[str, ObstructionReport] = {}
    notes: dict[str, str] = {}
    has_lk = data.linking_matrix() is not None
    if has_lk:
        reports["positive"] = check_positive(data)
        reports["positive[mirror]"] = check_positive(data.mirror())
    D = data.diagram
    posD = _positive_version(D)
    if data.stats is not None:
        reports["positive_braid"] = check_positive_braid(data)
    elif posD is not None:
        pdata = data if posD is D else data.mirror()
        reports["positive_braid"] = check_positive_braid(pdata)
        notes["fibred"] = seifert_analysis(posD).fibred_positive_verdict
    if D is not None and D.num_components <= 10:
        reports["concordance_qp"] = check_concordance_qp(data)

    f = e.flags
    p_exp, bp_exp = f.get("positive_expected"), f.get("braid_positive_expected")
    marks: dict[str, str] = {}
    if p_exp is None:
        marks["P"] = "?"
    elif p_exp:
        marks["P"] = "✓"
    else:
        note = ""
        if has_lk and _component_sign_obstruction(data):
            note = "c"
        elif e.expected.get("P_note") == "σ":
            note = "σ"
        marks["P"] = "✗" + (f"^{note}" if note else "")
    fired = lambda key: key in reports and reports[key].verdict is Verdict.VIOLATED  # noqa: E731
    if p_exp or not has_lk:
        marks["1.6"] = "—"
    else:
        marks["1.6"] = "✓" if fired("positive") and fired("positive[mirror]") else "✗"
    if bp_exp or not p_exp or "positive_braid" not in reports:
        marks["1.9"] = "—"
    else:
        marks["1.9"] = "✓" if fired("positive_braid") else "✗"
    if bp_exp is None:
        marks["BP"] = "?"
    elif bp_exp:
        marks["BP"] = "✓"
    else:
        # the note names the fallback obstruction, so only when 1.9 did not fire
        f_note = notes.get("fibred") == "NOT_FIBRED" and marks["1.9"] != "✓"
        marks["BP"] = "✗" + ("^f" if f_note else "")
    return EntryAnalysis(e, reports, marks, notes)


def expected_marks(e: CatalogEntry) -> dict[str, str]:
    """Reference marks rendered in the same vocabulary as analyze_entry."""
    x = e.expected
    if not x:
        return {}
    p = x["P"] + (f"^{x['P_note']}" if x.get("P_note") else "")
    bp = x["BP"] + (f"^{x['BP_note']}" if x.get("BP_note") else "")
    return {"P": p, "1.6": x["1.6"] or "—", "BP": bp, "1.9": x["1.9"] or "—"}


# -------------------------------------------------------------- rendering

COLUMNS = ("Name", "P", "1.6", "BP", "1.9")


def table_sort_key(name: str):
    """Crossing number, alternating before non-alternating, index, then
    orientation labels compared from the last one."""
    m = re.fullmatch(r"L(\d+)([an])(\d+)\{([\d,]*)\}", name)
    if not m:
        return (1, name)
    cr, kind, idx, orient = m.groups()
    labels = tuple(int(t) for t in orient.split(",") if t)
    return (0, int(cr), kind, int(idx), tuple(reversed(labels)), name)


def render_table(analyses: Sequence[EntryAnalysis], fmt: str = "text") -> str:
    rows = [
        (a.entry.name, a.marks["P"], a.marks["1.6"], a.marks["BP"], a.marks["1.9"])
        for a in sorted(analyses, key=lambda a: table_sort_key(a.entry.name))
    ]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        w.writerows(rows)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown table format {fmt!r}")
    widths = [max(len(r[i]) for r in rows + [COLUMNS]) for i in range(len(COLUMNS))]
    fmt_row = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()  # noqa: E731
    lines = [fmt_row(COLUMNS), "  ".join("-" * w for w in widths)]
    lines += [fmt_row(r) for r in rows]
    return "\n".join(lines) + "\n"
