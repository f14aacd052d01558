"""Braid words: parsing, permutations, self-linking, sub-braids, embedding.

A letter ``+i`` is the Artin generator sigma_i and ``-i`` its inverse.
Letters act left to right as transpositions of strand positions, so the
strand starting at position p ends at ``permutation.images[p-1]``.
Closure components are the cycles of that permutation, indexed from 0 in
order of their smallest strand.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from . import _kernels
from .diagram import LinkDiagram, strand_diagram
from .errors import (
    EmptySelection,
    GeneratorOutOfRange,
    MalformedBraid,
    OddMixedCount,
    UnknownComponent,
)
from .linking import ComponentPartition, LinkingMatrix


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if isinstance(self.strands, bool) or int(self.strands) != self.strands or self.strands < 1:
            raise MalformedBraid(f"strand count must be a positive integer, got {self.strands!r}")
        letters = tuple(int(j) for j in self.letters)
        for j in letters:
            if j == 0 or abs(j) > self.strands - 1:
                raise GeneratorOutOfRange(
                    f"letter {j} is not a generator of B{self.strands} (need 1 <= |j| <= {self.strands - 1})"
                )
        object.__setattr__(self, "strands", int(self.strands))
        object.__setattr__(self, "letters", letters)

    def __str__(self) -> str:
        return f"B{self.strands}:" + "".join(f" {j}" for j in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def writhe(self) -> int:
        return sum(1 if j > 0 else -1 for j in self.letters)

    @property
    def self_linking(self) -> int:
        return self.writhe - self.strands

    def as_array(self) -> np.ndarray:
        return np.asarray(self.letters, dtype=np.int64)

    @cached_property
    def _tracked(self) -> tuple[np.ndarray, np.ndarray]:
        return _kernels.active().track(self.strands, self.as_array())

    @cached_property
    def permutation(self) -> "Permutation":
        final = self._tracked[1]
        return Permutation(tuple(int(p) + 1 for p in final))

    @cached_property
    def component_cycles(self) -> tuple[tuple[int, ...], ...]:
        return self.permutation.cycles()

    @property
    def num_components(self) -> int:
        return len(self.component_cycles)

    @cached_property
    def strand_component(self) -> np.ndarray:
        """0-based component index of each strand (by starting position)."""
        comp = np.empty(self.strands, dtype=np.int64)
        for ci, cyc in enumerate(self.component_cycles):
            for s in cyc:
                comp[s - 1] = ci
        return comp


_BRAID_RE = re.compile(r"^\s*B\s*(\d+)\s*:(.*)$")


def parse_braid(text: str) -> BraidWord:
    """Parse ``B<n>: j1 j2 ... jk``."""
    m = _BRAID_RE.match(text)
    if not m:
        raise MalformedBraid(f"expected 'B<n>: j1 j2 ...', got {text.strip()[:40]!r}")
    toks = m.group(2).split()
    for t in toks:
        if not re.fullmatch(r"[+-]?\d+", t):
            raise MalformedBraid(f"letter {t!r} is not a signed integer")
    return BraidWord(int(m.group(1)), tuple(int(t) for t in toks))


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @property
    def is_identity(self) -> bool:
        return all(p == k + 1 for k, p in enumerate(self.images))

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Orbits as sorted tuples, ordered by smallest element."""
        seen: set[int] = set()
        out = []
        for start in range(1, len(self.images) + 1):
            if start in seen:
                continue
            orbit = []
            x = start
            while x not in seen:
                seen.add(x)
                orbit.append(x)
                x = self.images[x - 1]
            out.append(tuple(sorted(orbit)))
        return tuple(out)


@dataclass(frozen=True)
class BraidProfile:
    strands: int
    length: int
    writhe: int
    self_linking: int
    permutation: Permutation
    component_cycles: tuple[tuple[int, ...], ...]
    is_positive: bool
    is_pure: bool
    is_alternating: bool
    is_nonsplit_alternating: bool

    def as_dict(self) -> dict:
        return {
            "strands": self.strands,
            "length": self.length,
            "writhe": self.writhe,
            "self_linking": self.self_linking,
            "permutation": list(self.permutation.images),
            "component_cycles": [list(c) for c in self.component_cycles],
            "is_positive": self.is_positive,
            "is_pure": self.is_pure,
            "is_alternating": self.is_alternating,
            "is_nonsplit_alternating": self.is_nonsplit_alternating,
        }


def generator_signs(b: BraidWord) -> dict[int, set[int]]:
    signs: dict[int, set[int]] = {}
    for j in b.letters:
        signs.setdefault(abs(j), set()).add(1 if j > 0 else -1)
    return signs


def braid_profile(b: BraidWord) -> BraidProfile:
    signs = generator_signs(b)
    every_generator = all(i in signs for i in range(1, b.strands))
    fixed_sign = all(len(s) == 1 for s in signs.values())
    neighbours_differ = fixed_sign and all(
        signs[i] != signs[i + 1] for i in signs if i + 1 in signs
    )
    alternating = fixed_sign and neighbours_differ
    perm = b.permutation
    return BraidProfile(
        strands=b.strands,
        length=len(b),
        writhe=b.writhe,
        self_linking=b.self_linking,
        permutation=perm,
        component_cycles=b.component_cycles,
        is_positive=all(j > 0 for j in b.letters),
        is_pure=perm.is_identity,
        is_alternating=alternating,
        is_nonsplit_alternating=alternating and every_generator,
    )


def _keep_mask(b: BraidWord, keep: Iterable[int]) -> np.ndarray:
    keep = set(int(i) for i in keep)
    if not keep:
        raise EmptySelection("keep must name at least one component")
    cycles = b.component_cycles
    for i in keep:
        if not 0 <= i < len(cycles):
            raise UnknownComponent(f"component {i} out of range 0..{len(cycles) - 1}")
    mask = np.zeros(b.strands, dtype=np.bool_)
    for i in keep:
        for s in cycles[i]:
            mask[s - 1] = True
    return mask


def sub_braid(b: BraidWord, keep: Iterable[int]) -> BraidWord:
    """Braid on the strands of the kept component cycles."""
    mask = _keep_mask(b, keep)
    out = _kernels.active().restrict(b.strands, b.as_array(), mask)
    return BraidWord(int(mask.sum()), tuple(int(j) for j in out if j != 0))


def mixed_counts(b: BraidWord) -> np.ndarray:
    """``counts[p, q, s]``: letters crossing components p and q, s=0 positive, 1 negative."""
    pairs = b._tracked[0]
    comp = b.strand_component
    return _kernels.active().pair_counts(
        comp[pairs[:, 0]], comp[pairs[:, 1]], np.sign(b.as_array()), b.num_components
    )


def braid_linking_matrix(b: BraidWord) -> LinkingMatrix:
    counts = mixed_counts(b)
    m = b.num_components
    lk = np.zeros((m, m), dtype=np.int64)
    for p in range(m):
        for q in range(p + 1, m):
            signed = int(counts[p, q, 0] - counts[p, q, 1])
            if signed % 2:
                raise OddMixedCount(f"components {p},{q}: signed mixed count {signed} is odd")
            lk[p, q] = lk[q, p] = signed // 2
    return LinkingMatrix.from_array(lk)


@dataclass(frozen=True)
class KeyLemmaRecord:
    partition: ComponentPartition
    self_linking: int
    block_self_linking: tuple[int, ...]
    lhs: int
    rhs: int
    holds: bool


def key_lemma_identity(b: BraidWord, partition: ComponentPartition | Iterable[Iterable[int]]) -> KeyLemmaRecord:
    """sl(b) minus the sub-braid self-linkings against twice the cross-block linking."""
    if not isinstance(partition, ComponentPartition):
        partition = ComponentPartition.of(partition, b.num_components)
    elif partition.size != b.num_components:
        partition = ComponentPartition(partition.blocks, b.num_components)
    block_sl = tuple(sub_braid(b, blk).self_linking for blk in partition.blocks)
    lhs = b.self_linking - sum(block_sl)
    rhs = 2 * partition.cross_linking(braid_linking_matrix(b))
    return KeyLemmaRecord(partition, b.self_linking, block_sl, lhs, rhs, lhs == rhs)


# ------------------------------------------------------------ embedding

@dataclass(frozen=True)
class Factor:
    """One factor of a quasi-positive factorisation.

    ``conjugator`` is empty for a bare positive generator. The factor's
    word is ``conjugator + (generator,) + inverse(conjugator)``.
    ``segment`` is the index of the input letter this factor belongs to.
    """

    generator: int
    conjugator: tuple[int, ...] = ()
    segment: int = 0

    @property
    def word(self) -> tuple[int, ...]:
        return self.conjugator + (self.generator,) + tuple(-j for j in reversed(self.conjugator))

    @property
    def witness(self) -> str:
        """Why the factor is a conjugate of a positive generator."""
        if not self.conjugator:
            return f"sigma_{self.generator}"
        c = " ".join(str(j) for j in self.conjugator)
        return f"({c}) sigma_{self.generator} ({c})^-1"


def free_reduce(word: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for j in word:
        if out and out[-1] == -j:
            out.pop()
        else:
            out.append(j)
    return tuple(out)


def factor_product(factors: Iterable[Factor]) -> tuple[int, ...]:
    """Product of factors, freely reduced within each input segment."""
    out: list[int] = []
    current: int | None = None
    seg: list[int] = []
    for f in factors:
        if f.segment != current:
            out.extend(free_reduce(seg))
            seg = []
            current = f.segment
        seg.extend(f.word)
    out.extend(free_reduce(seg))
    return tuple(out)


@dataclass(frozen=True)
class QuasipositiveEmbedding:
    input: BraidWord
    output: BraidWord
    insertion_records: tuple[tuple[int, tuple[int, ...]], ...]  # (input letter index, w_r)
    decomposition: tuple[Factor, ...]

    @property
    def added_linking(self) -> int:
        n = self.input.strands
        return sum(n - abs(self.input.letters[r]) + 1 for r, _ in self.insertion_records)


def insertion_word(n: int, i: int) -> tuple[int, ...]:
    """sigma_n ... sigma_i sigma_i ... sigma_n in B_{n+1}."""
    return tuple(range(n, i - 1, -1)) + tuple(range(i, n + 1))


def embed_quasipositive(b: BraidWord) -> QuasipositiveEmbedding:
    """Add one strand so that every negative letter becomes part of a quasi-positive factor."""
    n = b.strands
    out: list[int] = []
    records = []
    factors: list[Factor] = []
    for r, j in enumerate(b.letters):
        if j > 0:
            out.append(j)
            factors.append(Factor(j, (), r))
            continue
        i = -j
        w = insertion_word(n, i)
        out.append(j)
        out.extend(w)
        records.append((r, w))
        # sigma_i^-1 w = prod_{g=n..i+1} (sigma_i^-1 sigma_g sigma_i) * sigma_i sigma_{i+1} ... sigma_n
        for g in range(n, i, -1):
            factors.append(Factor(g, (j,), r))
        for g in range(i, n + 1):
            factors.append(Factor(g, (), r))
    return QuasipositiveEmbedding(b, BraidWord(n + 1, tuple(out)), tuple(records), tuple(factors))


# -------------------------------------------------------------- closure

def braid_closure(b: BraidWord) -> LinkDiagram:
    """Standard closure diagram, arcs numbered along each component."""
    n = b.strands
    events = [(abs(j), "down" if j > 0 else "up") for j in b.letters]
    joins = [(("R", p), ("L", p)) for p in range(1, n + 1)]
    seeds = [("L", cyc[0]) for cyc in b.component_cycles]
    return strand_diagram(n, events, joins, seeds)
