"""Set partitions of column indices, column contraction and repetition patterns.

A partition describes which coordinates of a solution coincide; contracting
the matrix along it sums the columns of each block.  Blocks are always
ordered by their minima, so contraction is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterator

from .errors import ScaleCapError
from .matrix import IntMatrix, matrix_rank
from .systems import LinearSystem, is_irredundant

MAX_PARTITION_COLUMNS = 12  # Bell(12) is ~4.2 million


@dataclass(frozen=True)
class ColumnPartition:
    """Partition of {1, ..., m}; blocks sorted internally and by minima."""

    blocks: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_blocks(blocks) -> "ColumnPartition":
        normal = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        return ColumnPartition(normal)

    def __post_init__(self):
        seen: set[int] = set()
        minima = []
        for block in self.blocks:
            if not block:
                raise ValueError("blocks must be nonempty")
            if list(block) != sorted(set(block)):
                raise ValueError("each block must be strictly increasing")
            if seen & set(block):
                raise ValueError("blocks must be disjoint")
            seen.update(block)
            minima.append(block[0])
        if minima != sorted(minima):
            raise ValueError("blocks must be ordered by their minima")
        if seen and (min(seen) < 1 or seen != set(range(1, max(seen) + 1))):
            raise ValueError("blocks must cover {1, ..., m} exactly")

    @property
    def size(self) -> int:
        return len(self.blocks)

    @property
    def ground(self) -> int:
        return sum(len(b) for b in self.blocks)

    def mobius_to_finest(self) -> int:
        """Partition-lattice Möbius coefficient against the all-singleton
        partition: the product of (-1)^(|B|-1) (|B|-1)! over blocks."""
        out = 1
        for block in self.blocks:
            k = len(block) - 1
            out *= (-1) ** k * factorial(k)
        return out


def partitions_of(m: int, max_cols: int = MAX_PARTITION_COLUMNS) -> Iterator[ColumnPartition]:
    """All set partitions of {1, ..., m}, in restricted-growth-string order.

    The first is the single block, the last is all singletons; the count is
    the m-th Bell number.
    """
    if m < 1:
        raise ValueError("need at least one column")
    if m > max_cols:
        raise ScaleCapError(f"enumerating partitions of {m} columns exceeds the cap {max_cols}")
    code = [0] * m

    def emit() -> ColumnPartition:
        nblocks = max(code) + 1
        blocks: list[list[int]] = [[] for _ in range(nblocks)]
        for i, c in enumerate(code):
            blocks[c].append(i + 1)
        return ColumnPartition(tuple(tuple(b) for b in blocks))

    def rec(i: int, top: int) -> Iterator[ColumnPartition]:
        if i == m:
            yield emit()
            return
        for v in range(top + 2):
            code[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(1, 0) if m > 1 else iter([emit()])


def contract(system: LinearSystem, partition: ColumnPartition) -> LinearSystem:
    """Sum the columns of each block; the result has one column per block."""
    if partition.ground != system.cols:
        raise ValueError("partition does not cover the system's columns")
    entries = tuple(
        tuple(sum(row[j - 1] for j in block) for block in partition.blocks)
        for row in system.matrix.entries
    )
    return LinearSystem(IntMatrix(entries=entries, cols=partition.size))


def pattern_of(x) -> ColumnPartition:
    """Partition of positions grouping equal entries of x."""
    if len(x) < 1:
        raise ValueError("need at least one entry")
    groups: dict = {}
    for i, v in enumerate(x):
        groups.setdefault(v, []).append(i + 1)
    return ColumnPartition.from_blocks(groups.values())


def preserves_rank(system: LinearSystem, partition: ColumnPartition) -> bool:
    """Whether contracting along the partition keeps the full rank."""
    return matrix_rank(contract(system, partition).matrix) == system.rank


def is_nontrivial(system: LinearSystem, x) -> bool:
    """Whether the solution's repetition pattern preserves the rank.

    Raises ValueError when x does not solve the system.
    """
    if len(x) != system.cols:
        raise ValueError("solution length must equal the column count")
    if any(v != 0 for v in system.matrix.apply(x)):
        raise ValueError(f"{tuple(x)} is not a solution of the system")
    return preserves_rank(system, pattern_of(x))


def expand_by_pattern(y, partition: ColumnPartition) -> tuple[int, ...]:
    """Lift block values y (one per block) back to a full-length vector."""
    if len(y) != partition.size:
        raise ValueError("need one value per block")
    out = [0] * partition.ground
    for value, block in zip(y, partition.blocks):
        for j in block:
            out[j - 1] = value
    return tuple(out)


def realized_patterns(
    system: LinearSystem, max_cols: int = MAX_PARTITION_COLUMNS
) -> tuple[ColumnPartition, ...]:
    """Repetition patterns realized by non-trivial integer solutions.

    A partition qualifies exactly when the contracted system keeps the rank
    and is irredundant (has a solution with distinct block values); each
    accepted pattern is double-checked by lifting such a witness back to a
    non-trivial solution with that exact pattern.
    """
    out = []
    for partition in partitions_of(system.cols, max_cols=max_cols):
        contracted = contract(system, partition)
        if contracted.rank != system.rank:
            continue
        verdict = is_irredundant(contracted)
        if not verdict:
            continue
        witness = expand_by_pattern(verdict.witness, partition)
        if pattern_of(witness) != partition or not is_nontrivial(system, witness):
            raise RuntimeError("pattern witness failed its own pattern")
        out.append(partition)
    return tuple(out)
