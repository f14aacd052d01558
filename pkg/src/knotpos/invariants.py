"""Doubled slice-torus bounds, Bennequin chains and unlinking formulas.

Twice the invariant, 2*nu, is carried as an integer so every bound stays
integral.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .braid import BraidWord, braid_linking_matrix, braid_profile
from .diagram import LinkDiagram, delete_components, diagram_profile, seifert_analysis
from .errors import (
    ChainViolation,
    FormulaInconsistency,
    NotPositiveDiagram,
    NotPure,
    ParityError,
)
from .linking import ComponentPartition, LinkingMatrix

__all__ = [
    "ComponentPartition",
    "LinkingMatrix",
    "NuInterval",
    "nu_bounds",
    "nu_lower_from_braid",
    "bennequin_chain",
    "ChainReport",
    "slc_pure",
    "slc_upper",
    "PositiveDiagramStats",
    "positive_unlinking",
]

log = logging.getLogger("knotpos")


@dataclass(frozen=True)
class NuInterval:
    """Integer bounds on 2*nu.

    ``upper2`` is None when no upper bound is known. ``formula_upper2``
    keeps the raw diagram upper-bound formula even when exactness
    overrides it, and ``inconsistent`` marks a raw upper value below the
    lower one. ``upper_certified`` says whether ``upper2`` may be used to
    certify an obstruction; see :func:`nu_bounds`.
    """

    lower2: int
    upper2: int | None = None
    exact: bool = False
    provenance: tuple[str, ...] = ()
    formula_upper2: int | None = None
    inconsistent: bool = False
    upper_certified: bool = False

    def __post_init__(self):
        if self.exact:
            if self.upper2 is None:
                object.__setattr__(self, "upper2", self.lower2)
            if self.upper2 != self.lower2:
                raise ValueError("an exact interval needs lower2 == upper2")
            object.__setattr__(self, "upper_certified", True)

    @classmethod
    def exact_value(cls, value2: int, source: str) -> "NuInterval":
        return cls(int(value2), int(value2), True, (source,))

    @property
    def value2(self) -> int | None:
        return self.lower2 if self.exact else None

    @property
    def certified_upper2(self) -> int | None:
        return self.upper2 if self.upper_certified else None

    def meet(self, other: "NuInterval") -> "NuInterval":
        """Intersect two certified intervals for the same link."""
        lo = max(self.lower2, other.lower2)
        ups = [u for u in (self.certified_upper2, other.certified_upper2) if u is not None]
        hi = min(ups) if ups else None
        if hi is not None and hi < lo:
            raise ChainViolation(f"disjoint bounds on 2nu: [{self.lower2}, ..] and [{other.lower2}, ..]")
        exact = hi is not None and hi == lo
        return NuInterval(
            lo,
            hi,
            exact,
            self.provenance + other.provenance,
            upper_certified=hi is not None,
        )

    def as_dict(self) -> dict:
        return {
            "lower2": self.lower2,
            "upper2": self.upper2,
            "exact": self.exact,
            "formula_upper2": self.formula_upper2,
            "inconsistent": self.inconsistent,
            "upper_certified": self.upper_certified,
            "provenance": list(self.provenance),
        }


def nu_bounds(D: LinkDiagram, strict: bool = True) -> NuInterval:
    """Diagram bounds on 2*nu.

    lower2 = w - o + 2 s_plus + l - 2 l_s and the raw upper value
    w + o - 2 s_minus - l + 2 l_s. On a homogeneous diagram the lower value
    is exact. Otherwise the raw upper value is reported, but it is only
    marked certified for knot diagrams: for several components it can sit
    below the true value (the positive Hopf closure gives 0 against an
    exact 2). With ``strict`` a non-homogeneous diagram whose raw upper
    value is below the lower one raises FormulaInconsistency; otherwise
    the interval comes back with ``inconsistent`` set and no upper bound.
    """
    p = diagram_profile(D)
    lower2 = p.w - p.o + 2 * p.s_plus + p.ell - 2 * p.ell_s
    raw_upper = p.w + p.o - 2 * p.s_minus - p.ell + 2 * p.ell_s
    homogeneous = seifert_analysis(D).is_homogeneous
    bad = raw_upper < lower2
    if homogeneous:
        if bad:
            log.warning(
                "diagram upper-bound formula gives 2nu <= %d below the exact value %d "
                "(l=%d, l_s=%d); exact value kept",
                raw_upper, lower2, p.ell, p.ell_s,
            )
        return NuInterval(
            lower2,
            lower2,
            True,
            ("diagram:homogeneous",),
            formula_upper2=raw_upper,
            inconsistent=bad,
        )
    if bad:
        msg = (
            f"non-homogeneous diagram: upper formula {raw_upper} < lower formula {lower2} "
            f"(l={p.ell}, l_s={p.ell_s})"
        )
        if strict:
            raise FormulaInconsistency(msg)
        log.warning(msg)
        return NuInterval(lower2, None, False, ("diagram:lower",), raw_upper, True, False)
    return NuInterval(
        lower2,
        raw_upper,
        False,
        ("diagram:lower", "diagram:upper"),
        formula_upper2=raw_upper,
        upper_certified=p.ell == 1,
    )


def nu_lower_from_braid(b: BraidWord) -> NuInterval:
    """Lower bound from self-linking: 2nu - l >= sl(b), i.e. lower2 = sl + l."""
    ell = b.num_components
    return NuInterval(b.self_linking + ell, None, False, (f"braid:sl={b.self_linking}",))


@dataclass(frozen=True)
class ChainLink:
    name: str
    left: int
    right_low: int
    right_high: int | None
    slack_low: int
    holds: bool | None  # None when undecided by interval data


@dataclass(frozen=True)
class ChainReport:
    self_linking: int
    ell: int
    links: tuple[ChainLink, ...]

    @property
    def consistent(self) -> bool:
        return all(lk.holds is not False for lk in self.links)


def bennequin_chain(b: BraidWord, nu: NuInterval, chi4: int | None = None) -> ChainReport:
    """Check sl(b) <= 2nu - l <= -chi4 against an interval for the closure.

    ``chi4`` is the four-dimensional Euler characteristic itself; the chain
    uses its negative.
    """
    ell = b.num_components
    sl = b.self_linking
    lo = nu.lower2 - ell
    hi = nu.certified_upper2 - ell if nu.certified_upper2 is not None else None
    links = []
    holds = True if lo >= sl else (False if hi is not None and hi < sl else None)
    links.append(ChainLink("sl <= 2nu-l", sl, lo, hi, lo - sl, holds))
    if chi4 is not None:
        neg = -int(chi4)
        if hi is not None and hi <= neg:
            h2 = True
        elif lo > neg:
            h2 = False
        else:
            h2 = None
        links.append(ChainLink("2nu-l <= -chi4", lo, neg, neg, neg - (hi if hi is not None else lo), h2))
    report = ChainReport(sl, ell, tuple(links))
    if not report.consistent:
        bad = next(lk for lk in links if lk.holds is False)
        raise ChainViolation(f"chain link '{bad.name}' fails: {bad}")
    return report


@dataclass(frozen=True)
class SlcCertificate:
    value: int
    self_linking: int
    total_lk: int
    ell: int


def slc_pure(b: BraidWord) -> SlcCertificate:
    """sl_c of the closure of a pure braid: 2 lk - l, which equals sl(b)."""
    prof = braid_profile(b)
    if not prof.is_pure:
        raise NotPure(f"{b} is not pure (permutation {prof.permutation.images})")
    lk = braid_linking_matrix(b).total
    value = 2 * lk - b.strands
    if value != b.self_linking:
        raise AssertionError(f"pure braid {b}: 2lk - l = {value} but sl = {b.self_linking}")
    return SlcCertificate(value, b.self_linking, lk, b.strands)


def slc_upper(parts: Sequence[tuple[int, int]], lk_between: int) -> int:
    """Upper bound on sl_c of a union from per-part bounds ``(bound, l_i)``.

    Unknotted parts contribute -1 each.
    """
    return sum(int(bound) for bound, _ in parts) + 2 * int(lk_between)


@dataclass(frozen=True)
class PositiveDiagramStats:
    """Counts of a positive diagram and of its one-component sub-diagrams.

    Sums over components are enough for every formula here, so published
    statistics without a full diagram can be used directly.
    """

    x: int
    o: int
    ell: int
    component_x_sum: int
    component_o_sum: int
    lk: int = field(init=False)

    def __post_init__(self):
        mixed = self.x - self.component_x_sum
        if mixed < 0 or mixed % 2:
            raise ParityError(f"mixed crossing count {mixed} must be even and nonnegative")
        object.__setattr__(self, "lk", mixed // 2)

    @classmethod
    def from_diagram(cls, D: LinkDiagram) -> "PositiveDiagramStats":
        if any(xc.sign < 0 for xc in D.crossings):
            raise NotPositiveDiagram("diagram has negative crossings")
        p = diagram_profile(D)
        xs = os_ = 0
        for i in range(D.num_components):
            q = diagram_profile(delete_components(D, [i]))
            xs += q.x
            os_ += q.o
        return cls(p.x, p.o, p.ell, xs, os_)

    @property
    def nu2(self) -> int:
        return self.x - self.o + self.ell

    @property
    def component_nu2_sum(self) -> int:
        return self.component_x_sum - self.component_o_sum + self.ell


def positive_unlinking(source: LinkDiagram | PositiveDiagramStats, mode: str = "whole") -> int:
    """Unlinking number from a positive diagram.

    ``whole``: (x - o + l)/2. ``per_component``: (x - sum o(D_i) + l)/2,
    for positive links whose components are positive-braid knots.
    """
    stats = source if isinstance(source, PositiveDiagramStats) else PositiveDiagramStats.from_diagram(source)
    if mode == "whole":
        num = stats.x - stats.o + stats.ell
    elif mode == "per_component":
        num = stats.x - stats.component_o_sum + stats.ell
    else:
        raise ValueError(f"mode must be 'whole' or 'per_component', got {mode!r}")
    if num % 2:
        raise ParityError(f"numerator {num} is odd")
    return num // 2
