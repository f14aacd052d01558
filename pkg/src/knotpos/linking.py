"""Linking matrices and component partitions."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidPartition


@dataclass(frozen=True)
class LinkingMatrix:
    """Symmetric integer matrix of pairwise linking numbers, zero diagonal."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("linking matrix must be square")
            if row[i] != 0:
                raise ValueError("linking matrix must have zero diagonal")
            for j in range(i):
                if rows[j][i] != row[j]:
                    raise ValueError("linking matrix must be symmetric")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_array(cls, arr) -> "LinkingMatrix":
        return cls(tuple(tuple(int(v) for v in row) for row in np.asarray(arr)))

    @classmethod
    def zeros(cls, size: int) -> "LinkingMatrix":
        return cls(tuple((0,) * size for _ in range(size)))

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.size, self.size)

    def pairs(self) -> Iterator[tuple[int, int, int]]:
        for i, j in combinations(range(self.size), 2):
            yield i, j, self.entries[i][j]

    @property
    def total(self) -> int:
        return sum(v for _, _, v in self.pairs())

    @property
    def absolute(self) -> int:
        return sum(abs(v) for _, _, v in self.pairs())

    def between(self, block_a: Iterable[int], block_b: Iterable[int]) -> int:
        block_b = tuple(block_b)
        return sum(self.entries[i][j] for i in block_a for j in block_b)

    def restrict(self, keep: Sequence[int]) -> "LinkingMatrix":
        keep = sorted(keep)
        return LinkingMatrix(tuple(tuple(self.entries[i][j] for j in keep) for i in keep))

    def negated(self) -> "LinkingMatrix":
        return LinkingMatrix(tuple(tuple(-v for v in row) for row in self.entries))

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class ComponentPartition:
    """Disjoint nonempty blocks of 0-based component indices covering range(size)."""

    blocks: tuple[frozenset[int], ...]
    size: int

    def __post_init__(self):
        blocks = tuple(frozenset(int(i) for i in b) for b in self.blocks)
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise InvalidPartition("partition blocks must be nonempty")
            if seen & b:
                raise InvalidPartition("partition blocks overlap")
            seen |= b
        if seen != set(range(self.size)):
            raise InvalidPartition(
                f"blocks {sorted(map(sorted, blocks))} do not cover components 0..{self.size - 1}"
            )
        blocks = tuple(sorted(blocks, key=min))
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]], size: int | None = None) -> "ComponentPartition":
        blocks = [frozenset(b) for b in blocks]
        if size is None:
            size = sum(len(b) for b in blocks)
        return cls(tuple(blocks), size)

    @classmethod
    def parse(cls, text: str, size: int | None = None) -> "ComponentPartition":
        """Parse ``"0,1|2"`` style text."""
        try:
            blocks = [[int(t) for t in part.split(",") if t.strip()] for part in text.split("|")]
        except ValueError as exc:
            raise InvalidPartition(f"cannot parse partition {text!r}") from exc
        return cls.of(blocks, size)

    def __len__(self) -> int:
        return len(self.blocks)

    def cross_linking(self, lk: LinkingMatrix) -> int:
        """Sum of lk(L_p, L_q) over unordered pairs of distinct blocks."""
        return sum(lk.between(a, b) for a, b in combinations(self.blocks, 2))

    def __str__(self) -> str:
        return "|".join(",".join(str(i) for i in sorted(b)) for b in self.blocks)


def set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """All set partitions of ``items`` (restricted growth order)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1 :]


def all_partitions(size: int, min_blocks: int = 1) -> Iterator[ComponentPartition]:
    for blocks in set_partitions(range(size)):
        if len(blocks) >= min_blocks:
            yield ComponentPartition.of(blocks, size)
