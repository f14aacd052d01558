"""Oriented link diagrams in PD notation.

Crossings follow the KnotTheory / LinkInfo convention: ``X[a,b,c,d]``
lists the four incident arcs counterclockwise starting from the incoming
under-arc, so the under strand runs ``a -> c``. The over strand runs
``d -> b`` on a positive crossing and ``b -> d`` on a negative one.

Component indices are 0-based throughout the API.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from . import _kernels
from .errors import (
    ArcDegreeError,
    EmptySelection,
    MalformedPD,
    OddMixedCount,
    OrientationInconsistent,
    UnknownComponent,
)
from .linking import LinkingMatrix


@dataclass(frozen=True, order=True)
class Crossing:
    a: int
    b: int
    c: int
    d: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise OrientationInconsistent(f"crossing sign must be +1 or -1, got {self.sign}")

    @property
    def pd(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def under_in(self) -> int:
        return self.a

    @property
    def under_out(self) -> int:
        return self.c

    @property
    def over_in(self) -> int:
        return self.d if self.sign > 0 else self.b

    @property
    def over_out(self) -> int:
        return self.b if self.sign > 0 else self.d

    def __str__(self) -> str:
        return f"X[{self.a},{self.b},{self.c},{self.d}]"


@dataclass(frozen=True)
class LinkDiagram:
    """An oriented diagram: crossings plus the arc cycle of each component.

    A component listed with a single arc that meets no crossing is a
    crossingless circle. Crossings are stored sorted, so equality does not
    depend on the order they were listed in.
    """

    crossings: tuple[Crossing, ...]
    components: tuple[tuple[int, ...], ...]
    _arc_comp: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(sorted(self.crossings)))
        object.__setattr__(self, "components", tuple(tuple(c) for c in self.components))
        object.__setattr__(self, "_arc_comp", _validate(self.crossings, self.components))

    @property
    def num_components(self) -> int:
        return len(self.components)

    @property
    def num_crossings(self) -> int:
        return len(self.crossings)

    @property
    def writhe(self) -> int:
        return sum(x.sign for x in self.crossings)

    @property
    def arcs(self) -> tuple[int, ...]:
        return tuple(sorted(self._arc_comp))

    def component_of(self, arc: int) -> int:
        return self._arc_comp[arc]

    def to_text(self) -> str:
        """Deterministic PD text; parse_pd(D.to_text()) == D."""
        xs = self.crossings
        body = ", ".join(str(x) for x in xs)
        comps = ",".join("[" + ",".join(str(a) for a in c) + "]" for c in self.components)
        signs = ",".join(str(x.sign) for x in xs)
        return f"PD[{body}]\ncomponents: [{comps}]\nsigns: [{signs}]"

    def __str__(self) -> str:
        return self.to_text()


def _validate(crossings: Sequence[Crossing], components: Sequence[Sequence[int]]) -> dict:
    arc_comp: dict[int, int] = {}
    for ci, comp in enumerate(components):
        if not comp:
            raise MalformedPD(f"component {ci} has no arcs")
        for a in comp:
            if a in arc_comp:
                raise MalformedPD(f"arc {a} listed in more than one component position")
            arc_comp[a] = ci
    uses: dict[int, int] = {}
    heads: dict[int, int] = {}
    tails: dict[int, int] = {}
    for x in crossings:
        for a in x.pd:
            uses[a] = uses.get(a, 0) + 1
        for a in (x.under_in, x.over_in):
            heads[a] = heads.get(a, 0) + 1
        for a in (x.under_out, x.over_out):
            tails[a] = tails.get(a, 0) + 1
    for a, k in uses.items():
        if k != 2:
            raise ArcDegreeError(f"arc {a} appears {k} times; every arc must appear exactly twice")
        if a not in arc_comp:
            raise MalformedPD(f"arc {a} is not listed in any component")
    for ci, comp in enumerate(components):
        free = [a for a in comp if a not in uses]
        if free and len(comp) != 1:
            raise ArcDegreeError(f"arc {free[0]} of component {ci} meets no crossing")
    for a in uses:
        if heads.get(a, 0) != 1 or tails.get(a, 0) != 1:
            raise OrientationInconsistent(f"arc {a} does not have exactly one head and one tail")
    # successor along each strand must match the listed cycle order
    succ: dict[int, int] = {}
    for x in crossings:
        succ[x.under_in] = x.under_out
        succ[x.over_in] = x.over_out
    for ci, comp in enumerate(components):
        if len(comp) == 1 and comp[0] not in uses:
            continue
        for k, a in enumerate(comp):
            nxt = comp[(k + 1) % len(comp)]
            if succ.get(a) != nxt:
                raise OrientationInconsistent(
                    f"component {ci}: arc {a} is followed by {nxt} in the components clause "
                    f"but the crossings send it to {succ.get(a)}"
                )
    return arc_comp


# ---------------------------------------------------------------- parsing

_INT_LIST = re.compile(r"-?\d+")
_X_TERM = re.compile(r"X\s*\[([^\]]*)\]")


def _int_lists(text: str, what: str) -> list[list[int]]:
    """Read ``[[1,2],[3]]`` or ``{{1,2},{3}}``."""
    try:
        val = json.loads(text.strip().replace("{", "[").replace("}", "]"))
    except json.JSONDecodeError as exc:
        raise MalformedPD(f"cannot read {what} list {text.strip()[:40]!r}") from exc
    if not isinstance(val, list) or not all(
        isinstance(row, list) and all(isinstance(v, int) for v in row) for row in val
    ):
        raise MalformedPD(f"{what} must be a list of integer lists")
    return val


def parse_pd(text: str) -> LinkDiagram:
    """Parse PD text with a ``components:`` clause and optional ``signs:``.

    Accepted crossing syntaxes are ``PD[X[1,4,2,3], ...]`` and the
    LinkInfo vector form ``{{1,4,2,3}, ...}``. Clauses are separated by
    newlines or semicolons.
    """
    clauses = [c.strip() for c in re.split(r"[;\n]", text) if c.strip()]
    if not clauses:
        raise MalformedPD("empty PD text")
    pd_clause = None
    comps_clause = None
    signs_clause = None
    for c in clauses:
        low = c.lower()
        if low.startswith("components"):
            comps_clause = c.split(":", 1)[1] if ":" in c else ""
        elif low.startswith("signs"):
            signs_clause = c.split(":", 1)[1] if ":" in c else ""
        elif pd_clause is None:
            pd_clause = c
        else:
            raise MalformedPD(f"unexpected clause {c[:40]!r}")
    if pd_clause is None:
        raise MalformedPD("no crossing list")
    if comps_clause is None:
        raise MalformedPD("missing components: clause (orientation is not guessed)")

    body = pd_clause.strip()
    if body.upper().startswith("PD") or "X" in body:
        if not (body.startswith("PD[") and body.endswith("]")):
            raise MalformedPD(f"cannot read crossing list {body[:40]!r}")
        inner = body[3:-1]
        if _X_TERM.sub("", inner).replace(",", "").strip():
            raise MalformedPD(f"unexpected text in crossing list {body[:40]!r}")
        quads = _int_lists("[" + ",".join("[" + t + "]" for t in _X_TERM.findall(inner)) + "]", "crossing")
    else:
        quads = _int_lists(body, "crossing")
    for q in quads:
        if len(q) != 4:
            raise MalformedPD(f"crossing needs four arcs: {q}")
    quads = [tuple(q) for q in quads]

    components = _int_lists(comps_clause, "components")
    signs = None
    if signs_clause is not None:
        signs = [int(v) for v in _INT_LIST.findall(signs_clause)]
        if len(signs) != len(quads):
            raise MalformedPD(f"{len(signs)} sign annotations for {len(quads)} crossings")
    return diagram_from_pd(quads, components, signs)


def diagram_from_pd(
    quads: Sequence[Sequence[int]],
    components: Sequence[Sequence[int]],
    signs: Sequence[int] | None = None,
) -> LinkDiagram:
    """Build a diagram from PD quadruples, deriving each crossing's sign.

    The over strand's direction is read from the component cycles. A
    crossing whose over strand could run either way is resolved by the
    one-head-per-arc rule and, failing that, by ``signs``.
    """
    uses: dict[int, int] = {}
    for q in quads:
        for a in q:
            uses[a] = uses.get(a, 0) + 1
    for a, k in uses.items():
        if k != 2:
            raise ArcDegreeError(f"arc {a} appears {k} times; every arc must appear exactly twice")
    succ: dict[int, int] = {}
    for ci, comp in enumerate(components):
        for k, a in enumerate(comp):
            if a in succ:
                raise MalformedPD(f"arc {a} listed twice in components")
            succ[a] = comp[(k + 1) % len(comp)]
    for a in uses:
        if a not in succ:
            raise MalformedPD(f"arc {a} is not listed in any component")

    heads = {a: 0 for a in succ}
    for a, b, c, d in quads:
        if succ[a] != c:
            raise OrientationInconsistent(f"under strand {a}->{c} of X[{a},{b},{c},{d}] disagrees with components")
        heads[a] += 1
    options: list[list[int]] = []
    for a, b, c, d in quads:
        opts = []
        if succ[d] == b:
            opts.append(1)  # over runs d -> b
        if succ[b] == d:
            opts.append(-1)
        if not opts:
            raise OrientationInconsistent(f"over strand of X[{a},{b},{c},{d}] disagrees with components")
        options.append(opts)

    chosen: list[int | None] = [o[0] if len(o) == 1 else None for o in options]
    for (a, b, c, d), s in zip(quads, chosen):
        if s is not None:
            heads[d if s > 0 else b] += 1
    changed = True
    while changed:
        changed = False
        for t, ((a, b, c, d), s) in enumerate(zip(quads, chosen)):
            if s is not None:
                continue
            viable = [v for v in options[t] if heads[d if v > 0 else b] == 0]
            if len(viable) == 1:
                chosen[t] = viable[0]
                heads[d if viable[0] > 0 else b] += 1
                changed = True
            elif not viable:
                raise OrientationInconsistent(f"no orientation fits X[{a},{b},{c},{d}]")
    for t, s in enumerate(chosen):
        if s is None:
            if signs is None:
                raise OrientationInconsistent(
                    f"crossing X{list(quads[t])} is orientation-ambiguous; supply signs:"
                )
            if signs[t] not in options[t]:
                raise OrientationInconsistent(f"sign annotation {signs[t]} impossible at X{list(quads[t])}")
            chosen[t] = signs[t]
            s = signs[t]
            a, b, c, d = quads[t]
            heads[d if s > 0 else b] += 1
        elif signs is not None and signs[t] != s:
            raise OrientationInconsistent(
                f"sign annotation {signs[t]} at X{list(quads[t])} contradicts orientation (sign {s})"
            )
    xs = tuple(Crossing(*map(int, q), int(s)) for q, s in zip(quads, chosen))
    return LinkDiagram(xs, tuple(tuple(int(a) for a in c) for c in components))


def components_from_labels(quads: Sequence[Sequence[int]]) -> list[list[int]]:
    """Arc cycles for LinkInfo-style labelling.

    LinkInfo numbers arcs consecutively along the orientation inside each
    component, wrapping at the end. Components are the connected pieces of
    the graph joining a-c and b-d at every crossing.
    """
    g = nx.Graph()
    for a, b, c, d in quads:
        g.add_edge(a, c)
        g.add_edge(b, d)
    comps = sorted((sorted(c) for c in nx.connected_components(g)), key=min)
    for c in comps:
        if c != list(range(c[0], c[0] + len(c))):
            raise MalformedPD(f"component arcs {c} are not consecutive labels")
    return comps


# ---------------------------------------------------------- construction

_CORNER_XY = {"NE": (1, 1), "NW": (-1, 1), "SW": (-1, -1), "SE": (1, -1)}
_CCW = ("NE", "NW", "SW", "SE")
_OPPOSITE = {"NW": "SE", "SE": "NW", "SW": "NE", "NE": "SW"}


def strand_diagram(
    width: int,
    events: Sequence[tuple[int, str]],
    joins: Sequence[tuple[tuple[str, int], tuple[str, int]]],
    seeds: Sequence[tuple[str, int]],
) -> LinkDiagram:
    """Diagram from a horizontal strand picture.

    Positions ``1..width`` are read top to bottom. Each event ``(i, over)``
    is a crossing between positions i and i+1; ``over`` is ``"down"`` when
    the strand descending from i to i+1 passes over, ``"up"`` otherwise.
    ``joins`` pair boundary points ``("L", p)`` / ``("R", p)`` outside the
    picture. Each seed is a boundary point at which a component enters the
    picture; it fixes that component's orientation.
    """
    # segments: seg_left[s] / seg_right[s] say what each end touches
    cur = list(range(width))
    seg_left: list[tuple] = [("B", "L", p + 1) for p in range(width)]
    seg_right: list[tuple | None] = [None] * width
    for t, (i, over) in enumerate(events):
        if not 1 <= i < width or over not in ("down", "up"):
            raise ValueError(f"bad event {(i, over)!r}")
        top, bot = cur[i - 1], cur[i]
        seg_right[top] = ("X", t, "NW")
        seg_right[bot] = ("X", t, "SW")
        for p, corner in ((i - 1, "NE"), (i, "SE")):
            seg_left.append(("X", t, corner))
            seg_right.append(None)
            cur[p] = len(seg_left) - 1
    for p in range(width):
        seg_right[cur[p]] = ("B", "R", p + 1)
    at_boundary = {}
    for s in range(len(seg_left)):
        if seg_left[s][0] == "B":
            at_boundary[seg_left[s][1:]] = (s, "left")
        if seg_right[s][0] == "B":
            at_boundary[seg_right[s][1:]] = (s, "right")
    at_corner = {}
    for s in range(len(seg_left)):
        if seg_left[s][0] == "X":
            at_corner[seg_left[s][1:]] = (s, "left")
        if seg_right[s][0] == "X":
            at_corner[seg_right[s][1:]] = (s, "right")
    partner = {}
    for u, v in joins:
        partner[tuple(u)] = tuple(v)
        partner[tuple(v)] = tuple(u)
    if set(partner) != set(at_boundary):
        raise ValueError("joins must pair every boundary point exactly once")

    seg_comp = [-1] * len(seg_left)
    passes: dict[int, list] = {t: [] for t in range(len(events))}
    components: list[list[int]] = []
    label = 1
    for seed in seeds:
        s, side = at_boundary[tuple(seed)]
        if seg_comp[s] >= 0:
            continue
        ci = len(components)
        # walk once to count crossings on this component
        walk = []
        seg, entered = s, side
        while True:
            seg_comp[seg] = ci
            exit_end = seg_right[seg] if entered == "left" else seg_left[seg]
            if exit_end[0] == "X":
                t, corner = exit_end[1], exit_end[2]
                out_corner = _OPPOSITE[corner]
                walk.append((t, corner, out_corner))
                seg, entered = at_corner[(t, out_corner)]
            else:
                seg, entered = at_boundary[partner[exit_end[1:]]]
            if (seg, entered) == (s, side):
                break
            if seg_comp[seg] >= 0 and seg_comp[seg] != ci:
                raise ValueError("strand picture walk entered another component")
        n = len(walk)
        base = label
        for k, (t, cin, cout) in enumerate(walk):
            passes[t].append((cin, cout, base + (k - 1) % n if n else base, base + k))
        components.append(list(range(base, base + max(n, 1))))
        label = base + max(n, 1)
    if min(seg_comp, default=0) < 0:
        raise ValueError("seeds do not orient every component")

    quads, signs = [], []
    for t, (i, over) in enumerate(events):
        strands = passes[t]
        # strand through NW/SE descends; over == "down" means it is on top
        desc = next(p for p in strands if {p[0], p[1]} == {"NW", "SE"})
        asc = next(p for p in strands if {p[0], p[1]} == {"SW", "NE"})
        ov, un = (desc, asc) if over == "down" else (asc, desc)
        corner_label = {}
        for cin, cout, lin, lout in strands:
            corner_label[cin] = lin
            corner_label[cout] = lout
        start = _CCW.index(un[0])
        quads.append(tuple(corner_label[_CCW[(start + k) % 4]] for k in range(4)))
        (ox0, oy0), (ox1, oy1) = _CORNER_XY[ov[0]], _CORNER_XY[ov[1]]
        (ux0, uy0), (ux1, uy1) = _CORNER_XY[un[0]], _CORNER_XY[un[1]]
        cross = (ox1 - ox0) * (uy1 - uy0) - (oy1 - oy0) * (ux1 - ux0)
        signs.append(1 if cross > 0 else -1)
    xs = tuple(Crossing(*q, s) for q, s in zip(quads, signs))
    return LinkDiagram(xs, tuple(tuple(c) for c in components))


def unlink_diagram(n: int) -> LinkDiagram:
    """Crossingless diagram of the n-component unlink."""
    return LinkDiagram((), tuple((k + 1,) for k in range(n)))


def split_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    """Disjoint union, relabelling the arcs of ``d2``."""
    shift = max(d1.arcs, default=0)
    xs = d1.crossings + tuple(
        Crossing(x.a + shift, x.b + shift, x.c + shift, x.d + shift, x.sign) for x in d2.crossings
    )
    comps = d1.components + tuple(tuple(a + shift for a in c) for c in d2.components)
    return LinkDiagram(xs, comps)


def relabel(D: LinkDiagram) -> LinkDiagram:
    """Renumber arcs 1..N along the components in order."""
    mapping = {}
    for comp in D.components:
        for a in comp:
            mapping[a] = len(mapping) + 1
    xs = tuple(
        Crossing(mapping[x.a], mapping[x.b], mapping[x.c], mapping[x.d], x.sign) for x in D.crossings
    )
    return LinkDiagram(xs, tuple(tuple(mapping[a] for a in c) for c in D.components))


# ---------------------------------------------------------------- profile

@dataclass(frozen=True)
class DiagramProfile:
    ell: int
    x: int
    w: int
    o: int
    s_plus: int
    s_minus: int
    ell_s: int
    mixed: dict  # (p, q) with p < q -> (positive count, negative count)
    self_crossings: tuple[tuple[int, int], ...]  # per component (positive, negative)
    linking_matrix: LinkingMatrix
    is_positive: bool
    is_alternating: bool
    is_simply_linked: bool
    is_connected: bool

    def as_dict(self) -> dict:
        return {
            "ell": self.ell,
            "x": self.x,
            "w": self.w,
            "o": self.o,
            "s_plus": self.s_plus,
            "s_minus": self.s_minus,
            "ell_s": self.ell_s,
            "mixed": {f"{p},{q}": list(v) for (p, q), v in sorted(self.mixed.items())},
            "linking_matrix": self.linking_matrix.to_lists(),
            "is_positive": self.is_positive,
            "is_alternating": self.is_alternating,
            "is_simply_linked": self.is_simply_linked,
            "is_connected": self.is_connected,
        }


class _Arrays:
    """Integer-indexed view of a diagram used by the kernels."""

    def __init__(self, D: LinkDiagram):
        arcs = D.arcs
        index = {a: k for k, a in enumerate(arcs)}
        self.n_arcs = len(arcs)
        xs = D.crossings
        self.sign = np.array([x.sign for x in xs], dtype=np.int64)
        self.under_in = np.array([index[x.under_in] for x in xs], dtype=np.int64)
        self.under_out = np.array([index[x.under_out] for x in xs], dtype=np.int64)
        self.over_in = np.array([index[x.over_in] for x in xs], dtype=np.int64)
        self.over_out = np.array([index[x.over_out] for x in xs], dtype=np.int64)
        self.comp = np.array([D.component_of(a) for a in arcs], dtype=np.int64)
        succ = np.arange(self.n_arcs, dtype=np.int64)
        succ[self.under_in] = self.over_out
        succ[self.over_in] = self.under_out
        self.smoothing_succ = succ


def seifert_circles(D: LinkDiagram) -> tuple[np.ndarray, int]:
    """Circle label per arc (in sorted arc order) and the circle count."""
    arr = _Arrays(D)
    return _kernels.active().cycle_labels(arr.smoothing_succ)


def diagram_profile(D: LinkDiagram) -> DiagramProfile:
    k = _kernels.active()
    arr = _Arrays(D)
    circ, o = k.cycle_labels(arr.smoothing_succ)
    cu = circ[arr.under_in]
    cv = circ[arr.over_in]
    pos = arr.sign > 0
    # flattening a crossing merges its two circles; smoothing keeps them apart
    s_plus = int(k.count_classes(o, cu[pos], cv[pos]))
    s_minus = int(k.count_classes(o, cu[~pos], cv[~pos]))
    ell_s = int(k.count_classes(o, cu, cv))
    ell = D.num_components
    counts = k.pair_counts(arr.comp[arr.under_in], arr.comp[arr.over_in], arr.sign, ell)
    lk = np.zeros((ell, ell), dtype=np.int64)
    mixed = {}
    simply = True
    for p, q in combinations(range(ell), 2):
        npos, nneg = int(counts[p, q, 0]), int(counts[p, q, 1])
        mixed[(p, q)] = (npos, nneg)
        if (npos - nneg) % 2:
            raise OddMixedCount(f"components {p},{q} have an odd signed mixed count")
        lk[p, q] = lk[q, p] = (npos - nneg) // 2
        if npos and nneg:
            simply = False
    selfc = tuple((int(counts[p, p, 0]), int(counts[p, p, 1])) for p in range(ell))
    return DiagramProfile(
        ell=ell,
        x=D.num_crossings,
        w=D.writhe,
        o=int(o),
        s_plus=s_plus,
        s_minus=s_minus,
        ell_s=ell_s,
        mixed=mixed,
        self_crossings=selfc,
        linking_matrix=LinkingMatrix.from_array(lk),
        is_positive=bool(np.all(arr.sign > 0)),
        is_alternating=is_alternating(D),
        is_simply_linked=simply,
        is_connected=ell_s == 1,
    )


def is_alternating(D: LinkDiagram) -> bool:
    """Every arc leaves its tail crossing in the opposite role to its head."""
    head_role: dict[int, str] = {}
    tail_role: dict[int, str] = {}
    for x in D.crossings:
        head_role[x.under_in] = "under"
        tail_role[x.under_out] = "under"
        head_role[x.over_in] = "over"
        tail_role[x.over_out] = "over"
    return all(head_role[a] != tail_role[a] for a in head_role)


# ----------------------------------------------------------- surgery/ops

def delete_components(D: LinkDiagram, keep: Iterable[int]) -> LinkDiagram:
    """Sub-diagram on the components ``keep``; arcs are renumbered from 1."""
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise EmptySelection("keep must name at least one component")
    for i in keep:
        if not 0 <= i < D.num_components:
            raise UnknownComponent(f"component {i} out of range 0..{D.num_components - 1}")
    kept = set(keep)
    parent = {a: a for a in D.arcs}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    survivors = []
    for x in D.crossings:
        cu = D.component_of(x.under_in)
        co = D.component_of(x.over_in)
        if cu in kept and co in kept:
            survivors.append(x)
            continue
        if cu in kept:
            parent[find(x.under_in)] = find(x.under_out)
        if co in kept:
            parent[find(x.over_in)] = find(x.over_out)
    comps = []
    for i in keep:
        cyc = []
        for a in D.components[i]:
            r = find(a)
            if not cyc or cyc[-1] != r:
                cyc.append(r)
        while len(cyc) > 1 and cyc[0] == cyc[-1]:
            cyc.pop()
        comps.append(tuple(cyc))
    xs = tuple(
        Crossing(find(x.a), find(x.b), find(x.c), find(x.d), x.sign) for x in survivors
    )
    return relabel(LinkDiagram(xs, tuple(comps)))


def transform_diagram(
    D: LinkDiagram, mirror: bool = False, reverse: Iterable[int] = ()
) -> LinkDiagram:
    """Mirror the diagram and/or reverse the orientation of some components."""
    rev = set(int(i) for i in reverse)
    for i in rev:
        if not 0 <= i < D.num_components:
            raise UnknownComponent(f"component {i} out of range 0..{D.num_components - 1}")
    xs = []
    for x in D.crossings:
        a, b, c, d, s = x.a, x.b, x.c, x.d, x.sign
        ru = D.component_of(x.under_in) in rev
        ro = D.component_of(x.over_in) in rev
        if ru:
            a, b, c, d = c, d, a, b
        if ru != ro:
            s = -s
        if mirror:
            # the old over strand becomes the under strand
            if s > 0:
                a, b, c, d = d, a, b, c
            else:
                a, b, c, d = b, c, d, a
            s = -s
        xs.append(Crossing(a, b, c, d, s))
    comps = tuple(
        (c[0],) + tuple(reversed(c[1:])) if i in rev else c for i, c in enumerate(D.components)
    )
    return LinkDiagram(tuple(xs), comps)


def mirror(D: LinkDiagram) -> LinkDiagram:
    return transform_diagram(D, mirror=True)


# ---------------------------------------------------------- Seifert graph

@dataclass(frozen=True)
class SeifertGraph:
    num_vertices: int
    edges: tuple[tuple[int, int, int], ...]  # (circle, circle, sign), one per crossing

    @cached_property
    def reduced(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.num_vertices))
        g.add_edges_from((min(u, v), max(u, v)) for u, v, _ in self.edges)
        return g

    def blocks(self) -> list[set[tuple[int, int]]]:
        """Edge sets (reduced edges) of the 2-connected blocks."""
        return [
            {(min(u, v), max(u, v)) for u, v in blk}
            for blk in nx.biconnected_component_edges(self.reduced)
        ]

    def is_homogeneous(self) -> bool:
        edge_signs: dict[tuple[int, int], set[int]] = {}
        for u, v, s in self.edges:
            edge_signs.setdefault((min(u, v), max(u, v)), set()).add(s)
        for blk in self.blocks():
            signs = set()
            for e in blk:
                signs |= edge_signs[e]
            if len(signs) > 1:
                return False
        return True

    def reduced_is_tree(self) -> bool:
        return nx.is_tree(self.reduced)


def seifert_graph(D: LinkDiagram) -> SeifertGraph:
    arr = _Arrays(D)
    circ, o = _kernels.active().cycle_labels(arr.smoothing_succ)
    edges = tuple(
        (int(circ[u]), int(circ[v]), int(s)) for u, v, s in zip(arr.under_in, arr.over_in, arr.sign)
    )
    for u, v, _ in edges:
        if u == v:
            raise AssertionError("a crossing joined a Seifert circle to itself")
    return SeifertGraph(int(o), edges)


@dataclass(frozen=True)
class SeifertReport:
    is_homogeneous: bool
    reduced_is_tree: bool
    fibred_positive_verdict: str  # FIBRED, NOT_FIBRED or NOT_APPLICABLE
    num_vertices: int
    num_edges: int
    num_reduced_edges: int


def seifert_analysis(D: LinkDiagram) -> SeifertReport:
    g = seifert_graph(D)
    tree = g.reduced_is_tree()
    if all(x.sign > 0 for x in D.crossings):
        verdict = "FIBRED" if tree else "NOT_FIBRED"
    else:
        verdict = "NOT_APPLICABLE"
    return SeifertReport(
        is_homogeneous=g.is_homogeneous(),
        reduced_is_tree=tree,
        fibred_positive_verdict=verdict,
        num_vertices=g.num_vertices,
        num_edges=len(g.edges),
        num_reduced_edges=g.reduced.number_of_edges(),
    )
