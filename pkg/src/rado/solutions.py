"""Enumerate and count solutions of a system inside finite ground sets.

Enumeration puts the system in reduced row echelon form and iterates over
assignments of the free columns, so the cost is |T|^(m - rank) rather than
|T|^m.  Counting additionally has a meet-in-the-middle path and reduces the
proper/non-trivial classes to plain counts of contracted systems via Möbius
inversion on the partition lattice; both paths agree with enumeration.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, lcm

import numpy as np

from .errors import BudgetExhaustedError, ScaleCapError
from .matrix import IntMatrix, _rref
from .partitions import (
    MAX_PARTITION_COLUMNS,
    contract,
    partitions_of,
    pattern_of,
    preserves_rank,
)
from .systems import LinearSystem

MAX_COUNT_CELLS = 20_000_000


class SolutionClass(enum.Enum):
    ALL = "all"
    NONTRIVIAL = "nontrivial"
    PROPER = "proper"


def ground_set(elements) -> tuple[int, ...]:
    """Normalize to a strictly increasing tuple of positive integers."""
    out = tuple(sorted(elements))
    if len(set(out)) != len(out):
        raise ValueError("ground set elements must be distinct")
    for v in out:
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"ground set elements must be positive integers, got {v!r}")
    return out


def interval(n: int) -> tuple[int, ...]:
    """The ground set {1, ..., n}."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return tuple(range(1, n + 1))


def support(x) -> frozenset:
    """The set of distinct entries of a vector."""
    return frozenset(x)


def _check_rhs(system: LinearSystem, rhs) -> tuple[int, ...]:
    if rhs is None:
        return (0,) * system.rows
    rhs = tuple(rhs)
    if len(rhs) != system.rows:
        raise ValueError("right-hand side length must equal the row count")
    return rhs


@dataclass(frozen=True)
class _SolvedForm:
    """RREF of [A | b]: bound columns as integer expressions in the free ones.

    exprs[i] = (pivot column, positive denominator D, constant C, coefficients
    N per free column); the bound entry equals (C - sum N*t) / D.
    """

    consistent: bool
    free: tuple[int, ...]
    exprs: tuple[tuple[int, int, int, tuple[int, ...]], ...]


def _solved_form(matrix: IntMatrix, rhs) -> _SolvedForm:
    m = matrix.cols
    rows = [
        [Fraction(x) for x in row] + [Fraction(b)]
        for row, b in zip(matrix.entries, rhs)
    ]
    if not rows:
        return _SolvedForm(True, tuple(range(m)), ())
    pivots, rows = _rref(rows)
    if m in pivots:
        return _SolvedForm(False, (), ())
    free = tuple(c for c in range(m) if c not in pivots)
    exprs = []
    for i, p in enumerate(pivots):
        coeffs = [rows[i][f] for f in free]
        const = rows[i][m]
        den = lcm(const.denominator, *(c.denominator for c in coeffs)) if coeffs else const.denominator
        exprs.append(
            (p, den, int(const * den), tuple(int(c * den) for c in coeffs))
        )
    return _SolvedForm(True, free, tuple(exprs))


def _iter_box(matrix: IntMatrix, T: tuple[int, ...], rhs, max_steps=None):
    """All x in T^m with A·x = rhs, lexicographic in the free assignments."""
    sf = _solved_form(matrix, rhs)
    if not sf.consistent or not T:
        return
    members = set(T)
    m = matrix.cols
    steps = 0
    for assign in product(T, repeat=len(sf.free)):
        if max_steps is not None:
            steps += 1
            if steps > max_steps:
                raise BudgetExhaustedError("enumeration budget exhausted")
        x = [0] * m
        ok = True
        for p, den, const, coeffs in sf.exprs:
            num = const
            for c, t in zip(coeffs, assign):
                num -= c * t
            value, rem = divmod(num, den)
            if rem != 0 or value not in members:
                ok = False
                break
            x[p] = value
        if ok:
            for f, t in zip(sf.free, assign):
                x[f] = t
            yield tuple(x)


def enumerate_solutions(
    system: LinearSystem,
    elements,
    solution_class: SolutionClass = SolutionClass.ALL,
    rhs=None,
    max_steps: int | None = None,
):
    """Stream the solutions of the selected class with all entries in the
    ground set, each exactly once, in a deterministic order."""
    T = ground_set(elements)
    rhs = _check_rhs(system, rhs)
    m = system.cols
    pattern_ok: dict = {}
    for x in _iter_box(system.matrix, T, rhs, max_steps=max_steps):
        if solution_class is SolutionClass.PROPER:
            if len(set(x)) != m:
                continue
        elif solution_class is SolutionClass.NONTRIVIAL:
            pat = pattern_of(x)
            ok = pattern_ok.get(pat)
            if ok is None:
                ok = preserves_rank(system, pat)
                pattern_ok[pat] = ok
            if not ok:
                continue
        yield x


def contains_solution(
    system: LinearSystem,
    elements,
    solution_class: SolutionClass = SolutionClass.ALL,
    rhs=None,
    max_steps: int | None = None,
) -> bool:
    """Whether any solution of the class lies entirely in the ground set."""
    stream = enumerate_solutions(system, elements, solution_class, rhs, max_steps)
    return next(stream, None) is not None


def _int64_safe(matrix: IntMatrix, T, rhs) -> bool:
    big = max(abs(T[0]), abs(T[-1]))
    bounds = [
        sum(abs(a) for a in matrix.row(i)) * big + abs(rhs[i])
        for i in range(matrix.rows)
    ]
    prod = 1
    for b in bounds:
        prod *= 2 * b + 1
    return prod < 2**62


def _mitm_count_numpy(matrix: IntMatrix, T, rhs) -> int:
    m, r = matrix.cols, matrix.rows
    k_left = (m + 1) // 2
    arr = np.asarray(T, dtype=np.int64)

    def side_values(cols):
        vals = np.zeros((1, r), dtype=np.int64)
        for j in cols:
            col = np.asarray([matrix.entries[i][j] for i in range(r)], dtype=np.int64)
            vals = (vals[:, None, :] + arr[None, :, None] * col[None, None, :]).reshape(-1, r)
        return vals

    left = side_values(range(k_left))
    right = side_values(range(k_left, m))
    big = int(np.abs(arr).max())
    bound = np.asarray(
        [sum(abs(matrix.entries[i][j]) for j in range(k_left)) * big for i in range(r)],
        dtype=np.int64,
    )
    target = np.asarray(rhs, dtype=np.int64)[None, :] - right
    inside = ((target >= -bound) & (target <= bound)).all(axis=1)
    target = target[inside]
    if target.size == 0:
        return 0
    strides = np.ones(r, dtype=np.int64)
    for i in range(1, r):
        strides[i] = strides[i - 1] * (2 * bound[i - 1] + 1)
    key_left = ((left + bound) * strides).sum(axis=1)
    key_target = ((target + bound) * strides).sum(axis=1)
    uniq_l, cnt_l = np.unique(key_left, return_counts=True)
    uniq_t, cnt_t = np.unique(key_target, return_counts=True)
    idx = np.searchsorted(uniq_l, uniq_t)
    idx_clipped = np.minimum(idx, len(uniq_l) - 1)
    hit = (idx < len(uniq_l)) & (uniq_l[idx_clipped] == uniq_t)
    return int((cnt_l[idx_clipped[hit]].astype(object) * cnt_t[hit].astype(object)).sum())


def _mitm_count_python(matrix: IntMatrix, T, rhs) -> int:
    m, r = matrix.cols, matrix.rows
    k_left = (m + 1) // 2

    def side(cols):
        table: Counter = Counter()
        for assign in product(T, repeat=len(cols)):
            key = tuple(
                sum(matrix.entries[i][j] * t for j, t in zip(cols, assign))
                for i in range(r)
            )
            table[key] += 1
        return table

    left = side(tuple(range(k_left)))
    right = side(tuple(range(k_left, m)))
    total = 0
    for key, cnt in right.items():
        need = tuple(b - v for b, v in zip(rhs, key))
        total += left.get(need, 0) * cnt
    return total


def _count_all(matrix: IntMatrix, T, rhs, max_cells: int) -> int:
    """|{x in T^m : A·x = rhs}| without materializing the solutions."""
    m = matrix.cols
    if not T:
        return 0
    if matrix.rows == 0 or all(all(a == 0 for a in row) for row in matrix.entries):
        return len(T) ** m if all(b == 0 for b in rhs) else 0
    sf = _solved_form(matrix, rhs)
    if not sf.consistent:
        return 0
    cost_enum = len(T) ** len(sf.free)
    cost_mitm = len(T) ** ((m + 1) // 2)
    if min(cost_enum, cost_mitm) > max_cells:
        raise ScaleCapError(
            f"counting over |T|={len(T)}, m={m} needs {min(cost_enum, cost_mitm)} cells, "
            f"cap is {max_cells}"
        )
    if cost_enum < cost_mitm:
        return sum(1 for _ in _iter_box(matrix, T, rhs))
    if _int64_safe(matrix, T, rhs):
        return _mitm_count_numpy(matrix, T, rhs)
    return _mitm_count_python(matrix, T, rhs)


def count_solutions(
    system: LinearSystem,
    elements,
    solution_class: SolutionClass = SolutionClass.ALL,
    rhs=None,
    max_cells: int = MAX_COUNT_CELLS,
    max_cols: int = MAX_PARTITION_COLUMNS,
) -> int:
    """Exact cardinality of the selected solution class inside the ground set.

    Plain counts use meet-in-the-middle or echelon enumeration, whichever is
    cheaper.  Proper counts follow by Möbius inversion over repetition
    patterns (solutions constant on the blocks of p are exactly the
    solutions of the contracted system), and non-trivial counts sum the
    proper counts of the rank-preserving contractions.
    """
    T = ground_set(elements)
    rhs = _check_rhs(system, rhs)
    if not T:
        return 0
    if solution_class is SolutionClass.ALL:
        return _count_all(system.matrix, T, rhs, max_cells)
    if solution_class is SolutionClass.PROPER:
        total = 0
        for part in partitions_of(system.cols, max_cols=max_cols):
            sub = contract(system, part)
            total += part.mobius_to_finest() * _count_all(sub.matrix, T, rhs, max_cells)
        return total
    total = 0
    for part in partitions_of(system.cols, max_cols=max_cols):
        sub = contract(system, part)
        if sub.rank == system.rank:
            total += count_solutions(sub, T, SolutionClass.PROPER, rhs, max_cells, max_cols)
    return total


@dataclass(frozen=True)
class DegreeProfile:
    """Maximum number of ordered proper solutions covering an ell-set."""

    ell: int
    max_degree: int
    attaining: tuple[int, ...] | None


def max_ell_degree(
    system: LinearSystem, n: int, ell: int, max_work: int = 10_000_000
) -> DegreeProfile:
    """Exact maximum, over ell-element subsets L of [n], of the number of
    ordered proper solutions whose entries cover L."""
    m = system.cols
    if not 1 <= ell <= m:
        raise ValueError("ell must be between 1 and the number of columns")
    estimate = n ** (m - system.rank) * comb(m, ell)
    if estimate > max_work:
        raise ScaleCapError(f"degree scan needs ~{estimate} steps, cap is {max_work}")
    counts: dict[tuple[int, ...], int] = {}
    for x in enumerate_solutions(system, interval(n), SolutionClass.PROPER):
        for key in combinations(sorted(set(x)), ell):
            counts[key] = counts.get(key, 0) + 1
    if not counts:
        return DegreeProfile(ell=ell, max_degree=0, attaining=None)
    best_key, best = max(
        counts.items(), key=lambda kv: (kv[1], tuple(-v for v in kv[0]))
    )
    return DegreeProfile(ell=ell, max_degree=best, attaining=best_key)


def patterns_realized_in(
    system: LinearSystem, elements, max_cols: int = MAX_PARTITION_COLUMNS
):
    """Repetition patterns of the non-trivial solutions inside a ground set.

    Companion to `realized_patterns`, which characterizes the patterns over
    all of Z; restricting to a ground set can lose patterns whose witnesses
    need entries outside it (zero, negatives, or just larger numbers).
    """
    seen = {
        pattern_of(x)
        for x in enumerate_solutions(system, elements, SolutionClass.NONTRIVIAL)
    }
    return tuple(p for p in partitions_of(system.cols, max_cols=max_cols) if p in seen)
