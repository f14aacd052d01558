"""Obstruction tests with three-valued verdicts and arithmetic certificates.

Every decisive verdict is backed by a list of :class:`Condition` records.
A condition stores integer terms for each side and a relation; the
property under test requires the relation to hold, so a failing condition
certifies VIOLATED. :func:`recheck` re-derives verdicts from the stored
integers alone.
"""
from __future__ import annotations

import json
import operator
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Iterable, Mapping

from .braid import BraidWord, braid_closure, braid_linking_matrix, braid_profile, sub_braid
from .diagram import LinkDiagram, delete_components, diagram_profile, mirror
from .errors import (
    MissingInput,
    NotAlternating,
    NotPositive,
    NotPositiveDiagram,
    NotPure,
    PreconditionError,
)
from .invariants import (
    NuInterval,
    PositiveDiagramStats,
    nu_bounds,
    positive_unlinking,
    slc_pure,
)
from .linking import ComponentPartition, LinkingMatrix, all_partitions

MAX_ENUMERATED_COMPONENTS = 10


class Verdict(str, Enum):
    SATISFIED = "SATISFIED"
    VIOLATED = "VIOLATED"
    INCONCLUSIVE = "INCONCLUSIVE"


_OPS = {
    "==": operator.eq,
    "<=": operator.le,
    ">=": operator.ge,
    "<": operator.lt,
    ">": operator.gt,
}


@dataclass(frozen=True)
class Condition:
    name: str
    lhs: tuple[int, ...]
    op: str
    rhs: tuple[int, ...]
    note: str = ""

    @property
    def holds(self) -> bool:
        return _OPS[self.op](sum(self.lhs), sum(self.rhs))

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": list(self.lhs),
            "op": self.op,
            "rhs": list(self.rhs),
            "holds": self.holds,
            "note": self.note,
        }


def _cond(name: str, lhs: Iterable[int], op: str, rhs: Iterable[int], note: str = "") -> Condition:
    return Condition(name, tuple(int(v) for v in lhs), op, tuple(int(v) for v in rhs), note)


@dataclass(frozen=True)
class ObstructionReport:
    test_id: str
    verdict: Verdict
    conclusion: str
    conditions: tuple[Condition, ...] = ()
    missing: tuple[str, ...] = ()
    certificate: Mapping[str, Any] = field(default_factory=dict)
    inputs_provenance: Mapping[str, str] = field(default_factory=dict)
    subject: str = ""

    def to_record(self) -> dict:
        return {
            "test": self.test_id,
            "subject": self.subject,
            "verdict": self.verdict.value,
            "conclusion": self.conclusion,
            "conditions": [c.as_dict() for c in self.conditions],
            "missing": list(self.missing),
            "certificate": dict(self.certificate),
            "provenance": dict(self.inputs_provenance),
        }

    def to_text(self) -> str:
        """One deterministic JSON record."""
        return json.dumps(self.to_record(), sort_keys=True, ensure_ascii=False)


def recheck(report: ObstructionReport | Mapping[str, Any]) -> bool:
    """Re-derive a verdict from stored integers; True when it matches."""
    rec = report.to_record() if isinstance(report, ObstructionReport) else dict(report)
    failed = False
    for c in rec["conditions"]:
        holds = _OPS[c["op"]](sum(c["lhs"]), sum(c["rhs"]))
        if holds != c["holds"]:
            return False
        failed |= not holds
    verdict = rec["verdict"]
    if verdict == "VIOLATED":
        return failed
    if verdict == "SATISFIED":
        return not failed and not rec["missing"] and bool(rec["conditions"])
    return not failed


def _finish(
    test_id: str,
    conditions: list[Condition],
    missing: list[str],
    fired: str,
    quiet: str = "no obstruction found",
    satisfied_ok: bool = True,
    **extra,
) -> ObstructionReport:
    if any(not c.holds for c in conditions):
        verdict, text = Verdict.VIOLATED, fired
    elif satisfied_ok and not missing and conditions:
        verdict, text = Verdict.SATISFIED, quiet
    else:
        verdict, text = Verdict.INCONCLUSIVE, quiet if not missing else "insufficient data: " + ", ".join(missing)
    return ObstructionReport(
        test_id,
        verdict,
        text,
        tuple(conditions),
        tuple(dict.fromkeys(missing)),
        **extra,
    )


# -------------------------------------------------------------- LinkData

def _block(b: Iterable[int]) -> frozenset[int]:
    return frozenset(int(i) for i in b)


@dataclass(frozen=True)
class LinkData:
    """Everything known about one oriented link.

    Catalog scalars are optional. ``sub_nu`` and ``slmax`` are keyed by
    frozensets of 0-based component indices; ``slmax`` values are
    ``(lower, upper)`` with None for an unknown side.
    """

    name: str = ""
    diagram: LinkDiagram | None = None
    braid: BraidWord | None = None
    linking: LinkingMatrix | None = None
    nu: NuInterval | None = None
    sub_nu: Mapping[frozenset, NuInterval] = field(default_factory=dict)
    chi4: int | None = None
    signature: int | None = None
    u: int | None = None
    u_components: tuple[int | None, ...] | None = None
    wsp: int | None = None
    ssp: int | None = None
    slmax: Mapping[frozenset, tuple[int | None, int | None]] = field(default_factory=dict)
    slc_bound: int | None = None
    completely_split: bool | None = None
    positive: bool | None = None
    twist_knot: tuple[bool | None, ...] | None = None
    twist_summands: tuple[int | None, ...] | None = None
    hopf_factor: bool | None = None
    components_positive_braid: bool | None = None
    stats: PositiveDiagramStats | None = None
    provenance: Mapping[str, str] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @classmethod
    def from_braid(cls, b: BraidWord, **kw) -> "LinkData":
        return cls(braid=b, diagram=kw.pop("diagram", None) or braid_closure(b), **kw)

    @classmethod
    def from_diagram(cls, D: LinkDiagram, **kw) -> "LinkData":
        return cls(diagram=D, **kw)

    @property
    def num_components(self) -> int:
        if self.diagram is not None:
            return self.diagram.num_components
        if self.braid is not None:
            return self.braid.num_components
        if self.linking is not None:
            return self.linking.size
        if self.stats is not None:
            return self.stats.ell
        raise MissingInput("component count unknown: no diagram, braid, linking matrix or stats")

    def source(self, key: str, default: str) -> str:
        return self.provenance.get(key, default)

    def linking_matrix(self) -> LinkingMatrix | None:
        if self.linking is not None:
            return self.linking
        if self.diagram is not None:
            return diagram_profile(self.diagram).linking_matrix
        if self.braid is not None:
            return braid_linking_matrix(self.braid)
        return None

    def linking_source(self) -> str:
        if self.linking is not None:
            return self.source("linking", "catalog")
        return "computed:diagram" if self.diagram is not None else "computed:braid"

    def sub_diagram(self, block: Iterable[int]) -> LinkDiagram | None:
        block = _block(block)
        if self.diagram is not None:
            if block == frozenset(range(self.num_components)):
                return self.diagram
            return delete_components(self.diagram, block)
        if self.braid is not None:
            return braid_closure(sub_braid(self.braid, block))
        return None

    def nu_of(self, block: Iterable[int] | None = None) -> NuInterval | None:
        """Interval for 2nu of a sub-link; catalog values take precedence."""
        full = frozenset(range(self.num_components))
        block = full if block is None else _block(block)
        if block == full and self.nu is not None:
            return self.nu
        if block in self.sub_nu:
            return self.sub_nu[block]
        if block in self._cache:
            return self._cache[block]
        D = self.sub_diagram(block)
        val = nu_bounds(D, strict=False) if D is not None else None
        self._cache[block] = val
        return val

    def component_unknotting(self, i: int) -> tuple[int | None, str]:
        if self.u_components is not None and self.u_components[i] is not None:
            return self.u_components[i], self.source("u_components", "catalog")
        if self.twist_knot is not None and self.twist_knot[i]:
            return 1, "twist knot (catalog flag)"
        if self.twist_summands is not None and self.twist_summands[i] == 2:
            return 2, "sum of two twist knots: subadditivity and primality"
        return None, ""

    def mirror(self) -> "LinkData":
        """Data for the mirror image; values that do not transform are dropped."""
        return replace(
            self,
            name=self.name + "*" if self.name else "",
            diagram=mirror(self.diagram) if self.diagram is not None else None,
            braid=BraidWord(self.braid.strands, tuple(-j for j in self.braid.letters)) if self.braid else None,
            linking=self.linking.negated() if self.linking is not None else None,
            nu=None,
            sub_nu={},
            signature=-self.signature if self.signature is not None else None,
            slmax={},
            slc_bound=None,
            positive=None,
            stats=None,
        )


def _partitions(ell: int, partitions) -> list[ComponentPartition]:
    if partitions == "all" or partitions is None:
        if ell > MAX_ENUMERATED_COMPONENTS:
            raise PreconditionError(
                f"{ell} components exceeds the enumeration cap of {MAX_ENUMERATED_COMPONENTS}; "
                "pass explicit partitions"
            )
        return list(all_partitions(ell, min_blocks=2))
    return [
        p if isinstance(p, ComponentPartition) else ComponentPartition.of(p, ell) for p in partitions
    ]


# ----------------------------------------------------- concordance to QP

def check_concordance_qp(data: LinkData, partitions="all") -> ObstructionReport:
    """Necessary conditions for concordance to a quasi-positive link.

    For each partition, 2nu(L) - sum 2nu(L_i) <= 2 sum lk(L_i, L_j); when
    chi4 is known, 2nu - l = -chi4; and 2nu - l may not exceed an upper
    bound for sl_c.
    """
    ell = data.num_components
    lk = data.linking_matrix()
    nuL = data.nu_of()
    if lk is None or nuL is None:
        raise MissingInput("need a linking matrix and bounds on nu(L)")
    conds: list[Condition] = []
    missing: list[str] = []
    for P in _partitions(ell, partitions):
        blocks = [data.nu_of(b) for b in P.blocks]
        cross = P.cross_linking(lk)
        ups = [b.certified_upper2 if b is not None else None for b in blocks]
        if any(u is None for u in ups):
            missing.append(f"certified upper bound on nu for a block of {P}")
            continue
        conds.append(
            _cond(f"partition_bound[{P}]", [nuL.lower2] + [-u for u in ups], "<=", [2 * cross],
                  "2nu(L) - sum 2nu(L_i) <= 2 lk between blocks")
        )
        if not (nuL.exact and all(b.exact for b in blocks)):
            missing.append(f"exact nu for partition {P}")
    if data.chi4 is None:
        missing.append("chi4")
    elif nuL.exact:
        conds.append(_cond("chi4_sharpness", [nuL.value2, -ell], "==", [-data.chi4], "2nu - l = -chi4"))
    else:
        missing.append("exact nu(L)")
    slc, slc_src = _slc_upper_bound(data, lk, ell)
    if slc is not None:
        conds.append(_cond("slc_sharpness", [nuL.lower2, -ell], "<=", [slc], f"2nu - l <= sl_c bound ({slc_src})"))
    return _finish(
        "concordance_qp",
        conds,
        missing,
        "not concordant to any quasi-positive link",
        subject=data.name,
        certificate={"ell": ell, "nu2": nuL.as_dict(), "linking": lk.to_lists(), "slc_upper": slc},
        inputs_provenance={
            "linking": data.linking_source(),
            "nu": ",".join(nuL.provenance),
            "chi4": data.source("chi4", "catalog") if data.chi4 is not None else "absent",
            "slc": slc_src or "absent",
        },
    )


def _slc_upper_bound(data: LinkData, lk: LinkingMatrix, ell: int) -> tuple[int | None, str]:
    cands = []
    if data.slc_bound is not None:
        cands.append((data.slc_bound, data.source("slc_bound", "catalog")))
    if data.braid is not None and braid_profile(data.braid).is_pure:
        cands.append((slc_pure(data.braid).value, "pure braid: 2lk - l"))
    if data.u_components is not None and all(u == 0 for u in data.u_components):
        cands.append((2 * lk.total - ell, "unknotted components: 2lk - l"))
    if not cands:
        return None, ""
    return min(cands)


# ----------------------------------------------------------- QP (sl_max)

def check_qp(data: LinkData, partition) -> ObstructionReport:
    """If nu(L) - sum nu(L_i) = sum lk, a quasi-positive L has sl_max(L_i) = 2nu(L_i) - l_i."""
    ell = data.num_components
    P = partition if isinstance(partition, ComponentPartition) else ComponentPartition.of(partition, ell)
    lk = data.linking_matrix()
    nuL = data.nu_of()
    if lk is None or nuL is None:
        raise MissingInput("need a linking matrix and nu(L)")
    blocks = [data.nu_of(b) for b in P.blocks]
    prov = {"linking": data.linking_source(), "nu": ",".join(nuL.provenance)}
    if not nuL.exact or any(b is None or not b.exact for b in blocks):
        return _finish("quasipositive", [], ["exact nu for L and every block"], "", subject=data.name,
                       inputs_provenance=prov)
    cross = P.cross_linking(lk)
    hyp = _cond("hypothesis", [nuL.value2] + [-b.value2 for b in blocks], "==", [2 * cross],
                "nu(L) - sum nu(L_i) = sum lk (doubled)")
    cert = {"partition": str(P), "hypothesis": hyp.as_dict()}
    if not hyp.holds:
        return ObstructionReport(
            "quasipositive", Verdict.INCONCLUSIVE, "hypothesis not met for this partition",
            (), ("partition meeting the hypothesis",), cert, prov, data.name,
        )
    conds = [hyp]
    missing = []
    for blk, nu in zip(P.blocks, blocks):
        target = nu.value2 - len(blk)
        lo, hi = data.slmax.get(blk, (None, None))
        if data.braid is not None:
            sb = sub_braid(data.braid, blk)
            lo = sb.self_linking if lo is None else max(lo, sb.self_linking)
        tag = ",".join(map(str, sorted(blk)))
        if hi is not None:
            conds.append(_cond(f"slmax_upper[{tag}]", [target], "<=", [hi], "2nu - l <= sl_max upper bound"))
        if lo is not None:
            conds.append(_cond(f"slmax_lower[{tag}]", [lo], "<=", [target], "braid sl <= 2nu - l"))
        if lo is None or lo != target:
            missing.append(f"sl_max of block {tag} attaining 2nu - l")
    return _finish("quasipositive", conds, missing, "not quasi-positive", subject=data.name,
                   certificate=cert, inputs_provenance=prov)


# -------------------------------------------------------------- positive

def check_positive(data: LinkData) -> ObstructionReport:
    """Positive links satisfy lk = wsp = ssp = u - sum u(K_i)."""
    lk = data.linking_matrix()
    if lk is None:
        raise MissingInput("need a linking matrix")
    total = lk.total
    conds = [_cond(f"lk_nonnegative[{i},{j}]", [v], ">=", [0]) for i, j, v in lk.pairs()]
    missing = []
    scalar_checks = 0
    if data.completely_split is False:
        conds.append(_cond("nonsplit_linking", [total], ">=", [1], "not completely split needs lk > 0"))
    elif data.completely_split is None and total == 0 and lk.size > 1:
        missing.append("completely_split")
    for key in ("wsp", "ssp"):
        val = getattr(data, key)
        if val is None:
            missing.append(key)
        else:
            conds.append(_cond(f"{key}_equals_lk", [val], "==", [total]))
            scalar_checks += 1
    if data.wsp is not None and data.ssp is not None:
        conds.append(_cond("wsp_equals_ssp", [data.wsp], "==", [data.ssp]))
    comp_u = [data.component_unknotting(i) for i in range(lk.size)]
    if data.u is None:
        missing.append("u")
    elif any(u is None for u, _ in comp_u):
        missing.append("u of every component")
    else:
        conds.append(
            _cond("unlinking_excess", [data.u] + [-u for u, _ in comp_u], "==", [total],
                  "u - sum u(K_i) = lk")
        )
        scalar_checks += 1
    return _finish(
        "positive",
        conds,
        [] if scalar_checks else missing,
        "not positive",
        satisfied_ok=scalar_checks > 0,
        subject=data.name,
        certificate={"linking": lk.to_lists(), "lk_total": total, "unsupplied": missing},
        inputs_provenance={
            "linking": data.linking_source(),
            **{k: data.source(k, "catalog") for k in ("u", "wsp", "ssp", "completely_split")
               if getattr(data, k) is not None},
            "u_components": ",".join(src for _, src in comp_u if src) or "absent",
        },
    )


# ---------------------------------------------------------- positive braid

def positive_stats(data: LinkData) -> PositiveDiagramStats:
    if data.stats is not None:
        return data.stats
    if data.diagram is None:
        raise MissingInput("need a positive diagram or its statistics")
    return PositiveDiagramStats.from_diagram(data.diagram)


def check_positive_braid(data: LinkData) -> ObstructionReport:
    """Positive-braid tests on a positive diagram: Seifert circles add up over
    components, nu(L) - sum nu(K_i) = lk, and u = nu."""
    if data.stats is None and data.diagram is not None and any(x.sign < 0 for x in data.diagram.crossings):
        raise NotPositiveDiagram(f"{data.name or 'diagram'} is not a positive diagram")
    st = positive_stats(data)
    conds = [
        _cond("seifert_additivity", [st.o], "==", [st.component_o_sum], "o(D) = sum o(D_i)"),
        _cond("nu_excess", [st.nu2, -st.component_nu2_sum], "==", [2 * st.lk],
              "2nu(L) - sum 2nu(K_i) = 2 lk"),
    ]
    cert: dict[str, Any] = {
        "x": st.x, "o": st.o, "ell": st.ell, "component_x_sum": st.component_x_sum,
        "component_o_sum": st.component_o_sum, "lk": st.lk, "nu2": st.nu2,
    }
    prov = {"diagram": "catalog statistics" if data.stats is not None else "computed:diagram"}
    u, usrc = data.u, data.source("u", "catalog")
    if data.components_positive_braid:
        u_pc = positive_unlinking(st, "per_component")
        cert["u_per_component"] = u_pc
        if u is None:
            u, usrc = u_pc, "positive diagram with positive-braid components"
    if u is not None:
        conds.append(_cond("u_equals_nu", [2 * u], "==", [st.nu2], "2u = 2nu"))
        prov["u"] = usrc
    return _finish("positive_braid", conds, [], "not a positive-braid link",
                   subject=data.name, certificate=cert, inputs_provenance=prov)


# ----------------------------------------------- alternating pure braids

@dataclass(frozen=True)
class AltPureVerdict:
    verdict: str  # QP_CONCORDANT or NOT_QP_CONCORDANT
    pieces: tuple[tuple[int, ...], ...]
    factors: tuple[str, ...]
    reason: str

    def to_text(self) -> str:
        return json.dumps(
            {"verdict": self.verdict, "pieces": [list(p) for p in self.pieces],
             "factors": list(self.factors), "reason": self.reason},
            sort_keys=True,
        )


def classify_alt_pure(b: BraidWord) -> AltPureVerdict:
    prof = braid_profile(b)
    if not prof.is_pure:
        raise NotPure(f"{b} is not a pure braid")
    if not prof.is_alternating:
        raise NotAlternating(f"{b} is not alternating")
    present = {abs(j) for j in b.letters}
    pieces: list[list[int]] = [[1]]
    for s in range(2, b.strands + 1):
        if s - 1 in present:
            pieces[-1].append(s)
        else:
            pieces.append([s])
    factors = []
    bad = []
    for piece in pieces:
        if len(piece) == 1:
            factors.append("unknot")
            continue
        letters = [j for j in b.letters if piece[0] <= abs(j) < piece[-1]]
        if len(piece) > 2:
            factors.append(f"{len(piece)}-strand piece")
            bad.append(f"piece {piece} has more than two strands")
        elif letters[0] < 0:
            factors.append(f"T(2,{-len(letters)})")
            bad.append(f"piece {piece} is a negative torus link")
        else:
            factors.append(f"T(2,{len(letters)})")
    if bad:
        return AltPureVerdict("NOT_QP_CONCORDANT", tuple(map(tuple, pieces)), tuple(factors), "; ".join(bad))
    return AltPureVerdict("QP_CONCORDANT", tuple(map(tuple, pieces)), tuple(factors),
                          "split union of positive (2,2m) torus links and unknots")


# ------------------------------------------- small unlinking numbers

@dataclass(frozen=True)
class UnlinkingClass:
    label: str
    u: int | None
    lk: int
    component_u: tuple[int | None, ...]
    reason: str


def classify_small_unlinking(data: LinkData, diagram: LinkDiagram | None = None) -> UnlinkingClass:
    """Family of a positive link with unlinking number at most two."""
    if data.positive is False:
        raise NotPositive(f"{data.name or 'link'} is flagged as not positive")
    if diagram is not None:
        data = replace(data, diagram=diagram)
    if data.positive is None and not (data.diagram is not None and all(x.sign > 0 for x in data.diagram.crossings)):
        raise NotPositive("positivity must be asserted by a flag or a positive diagram")
    lk = data.linking_matrix()
    if lk is None:
        raise MissingInput("need a linking matrix")
    ell = lk.size
    comp = [data.component_unknotting(i)[0] for i in range(ell)]
    total = lk.total

    def result(label, reason, u=None):
        return UnlinkingClass(label, u, total, tuple(comp), reason)

    if any(v < 0 for _, _, v in lk.pairs()):
        return result("CONTRADICTION", "negative linking number in a positive link")
    if any(c is None for c in comp):
        return result("INSUFFICIENT_DATA", "unknotting number of some component unknown", data.u)
    u = total + sum(comp)
    if data.u is not None and data.u != u:
        return result("CONTRADICTION", f"supplied u={data.u} but lk + sum u(K_i) = {u}", data.u)
    knotted = [i for i, c in enumerate(comp) if c > 0]
    linked = [(i, j) for i, j, v in lk.pairs() if v > 0]
    if data.twist_knot is not None:
        for i in knotted:
            if comp[i] == 1 and data.twist_knot[i] is False:
                return result("CONTRADICTION", f"component {i} has u=1 but is flagged not a twist knot", u)
    if u == 0:
        return result("UNLINK", "u = 0", u)
    if u == 1:
        if total == 1:
            return result("HOPF_SPLIT_UNLINK", f"Hopf pair {linked[0]} plus unknots", u)
        return result("TWIST_KNOT_SPLIT_UNLINK", f"component {knotted[0]} is a twist knot", u)
    if u == 2:
        if total == 2:
            return result("FAMILY_A", "lk = 2 and unknotted components", u)
        if total == 1:
            (p, q), k = linked[0], knotted[0]
            summed = k in (p, q)
            if data.hopf_factor is not None and data.hopf_factor != summed:
                return result("CONTRADICTION", "hopf_factor flag disagrees with the linking pattern", u)
            if summed:
                return result("FAMILY_B", f"twist knot {k} summed with the Hopf pair {(p, q)}", u)
            return result("FAMILY_C", f"Hopf pair {(p, q)} split from twist knot {k}", u)
        if len(knotted) == 2:
            return result("FAMILY_D", f"two twist knots {knotted}", u)
        return result("FAMILY_E", f"component {knotted[0]} has unknotting number 2", u)
    return result("NOT_CLASSIFIED", f"u = {u} >= 3 is outside the classification", u)
