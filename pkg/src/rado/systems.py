"""Classification of integer linear homogeneous systems.

Column indices are 1-based in every public interface (witnesses, reports,
column sets), matching the usual convention for systems over {1, ..., m};
only the raw matrix layer underneath is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import lcm

from .errors import IllDefinedDensityError, ScaleCapError
from .matrix import (
    IntMatrix,
    _canonical_integer_vector,
    kernel_basis,
    matrix_rank,
    row_dependencies,
    rowspace_contains,
)

MAX_COLUMNS_DEFAULT = 22


@dataclass(frozen=True)
class LinearSystem:
    """An r x m integer matrix with at least one column and a cached rank."""

    matrix: IntMatrix
    name: str | None = None
    rank: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.matrix.cols < 1:
            raise ValueError("a linear system needs at least one column")
        object.__setattr__(self, "rank", matrix_rank(self.matrix))

    @staticmethod
    def from_rows(rows, name: str | None = None) -> "LinearSystem":
        return LinearSystem(IntMatrix.from_rows(rows), name=name)

    @property
    def rows(self) -> int:
        return self.matrix.rows

    @property
    def cols(self) -> int:
        return self.matrix.cols

    def label(self) -> str:
        return self.name or f"{self.rows}x{self.cols} system"


@dataclass(frozen=True)
class Verdict:
    """Boolean answer plus an optional witness backing it up."""

    holds: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class DensityReport:
    """An exact density value together with the column set achieving it."""

    value: Fraction
    witness: tuple[int, ...]
    kind: str  # "max-1-density" | "max-density"


def _check_columns(system: LinearSystem, cols) -> tuple[int, ...]:
    out = tuple(sorted(set(cols)))
    if len(out) != len(tuple(cols)):
        raise ValueError("column indices must be distinct")
    for q in out:
        if not 1 <= q <= system.cols:
            raise ValueError(f"column index {q} out of range 1..{system.cols}")
    return out


@lru_cache(maxsize=None)
def _columns_rank(system: LinearSystem, mask: int) -> int:
    idx = [j for j in range(system.cols) if mask >> j & 1]
    return matrix_rank(system.matrix.column_submatrix(idx))


def rank_contribution(system: LinearSystem, cols) -> int:
    """rank(A) minus the rank of A restricted to the complementary columns.

    This measures how much of the rank the columns `cols` carry; it is 0
    for the empty set and for singletons of abundant systems.
    """
    q = _check_columns(system, cols)
    mask = 0
    for j in q:
        mask |= 1 << (j - 1)
    comp = ((1 << system.cols) - 1) ^ mask
    return system.rank - _columns_rank(system, comp)


def _density_scan(system, sizes, numerator, denominator, kind, max_cols):
    if system.cols > max_cols:
        raise ScaleCapError(
            f"{kind} scan over 2^{system.cols} column sets exceeds the cap {max_cols}"
        )
    best: DensityReport | None = None
    for size in sizes:
        for q in combinations(range(1, system.cols + 1), size):
            r_q = rank_contribution(system, q)
            den = denominator(size, r_q)
            if den <= 0:
                raise IllDefinedDensityError(kind, q)
            value = Fraction(numerator(size), den)
            if best is None or value > best.value:
                best = DensityReport(value=value, witness=q, kind=kind)
    if best is None:
        raise ValueError(f"{kind} needs at least one eligible column set")
    return best


def max_one_density(system: LinearSystem, max_cols: int = MAX_COLUMNS_DEFAULT) -> DensityReport:
    """Exact maximum of (|Q|-1)/(|Q|-r_Q-1) over column sets with |Q| >= 2.

    Well-defined exactly for abundant systems; otherwise raises
    IllDefinedDensityError naming an offending Q.  Ties go to the smallest,
    then lexicographically least, witness.
    """
    return _density_scan(
        system,
        sizes=range(2, system.cols + 1),
        numerator=lambda size: size - 1,
        denominator=lambda size, r_q: size - r_q - 1,
        kind="max-1-density",
        max_cols=max_cols,
    )


def max_density(system: LinearSystem, max_cols: int = MAX_COLUMNS_DEFAULT) -> DensityReport:
    """Exact maximum of |Q|/(|Q|-r_Q) over nonempty column sets."""
    return _density_scan(
        system,
        sizes=range(1, system.cols + 1),
        numerator=lambda size: size,
        denominator=lambda size, r_q: size - r_q,
        kind="max-density",
        max_cols=max_cols,
    )


def _generic_distinct_kernel_point(basis, m: int) -> tuple[int, ...] | None:
    """Integer kernel point with pairwise distinct entries, if one exists.

    Tries x(t) = sum t^k basis[k]; each failing pair rules out only finitely
    many t, so small t succeeds whenever the kernel avoids every hyperplane
    x_i = x_j.
    """
    if not basis:
        return (0,) * m if m == 1 else None
    for t in range(1, 4 * m * m + 4):
        x = [0] * m
        w = 1
        for vec in basis:
            for i in range(m):
                x[i] += w * vec[i]
            w *= t
        if len(set(x)) == m:
            return tuple(x)
    return None


def is_irredundant(system: LinearSystem) -> Verdict:
    """Whether the system has a solution with pairwise distinct entries.

    Equivalent to no difference e_i - e_j of standard basis vectors lying in
    the row space; the witness is an integer solution with distinct entries.
    """
    m = system.cols
    for i, j in combinations(range(m), 2):
        diff = [0] * m
        diff[i], diff[j] = 1, -1
        if rowspace_contains(system.matrix, diff):
            return Verdict(False, witness=None)
    witness = _generic_distinct_kernel_point(kernel_basis(system.matrix), m)
    if witness is None:
        raise RuntimeError("irredundant system without constructible witness")
    return Verdict(True, witness=witness)


def _fourier_motzkin_point(constraints, nvars) -> list[Fraction] | None:
    """A rational point satisfying coeffs·t >= bound for every constraint.

    Classic Fourier-Motzkin elimination, exact over the rationals; returns
    None when the polyhedron is empty.  Variables are eliminated from the
    last to the first and recovered by back-substitution.
    """
    current = [(tuple(Fraction(c) for c in cs), Fraction(b)) for cs, b in constraints]
    levels = []
    for k in range(nvars - 1, -1, -1):
        lowers, uppers = [], []
        nxt: dict = {}
        for cs, b in current:
            ck = cs[k]
            rest = cs[:k]
            if ck > 0:
                lowers.append((rest, b, ck))
            elif ck < 0:
                uppers.append((rest, b, ck))
            else:
                nxt[(rest, b)] = None
        for lcs, lb, lck in lowers:
            for ucs, ub, uck in uppers:
                cs2 = tuple(-uck * a + lck * c for a, c in zip(lcs, ucs))
                b2 = -uck * lb + lck * ub
                lead = next((abs(c) for c in cs2 if c != 0), None)
                if lead is None:
                    if b2 > 0:
                        return None
                    continue
                nxt[(tuple(c / lead for c in cs2), b2 / lead)] = None
        levels.append((lowers, uppers))
        current = list(nxt)
    for _, b in current:
        if b > 0:
            return None
    values: list[Fraction] = []
    for lowers, uppers in reversed(levels):
        lo = hi = None
        for cs, b, ck in lowers:
            v = (b - sum(c * values[j] for j, c in enumerate(cs))) / ck
            lo = v if lo is None or v > lo else lo
        for cs, b, ck in uppers:
            v = (b - sum(c * values[j] for j, c in enumerate(cs))) / ck
            hi = v if hi is None or v < hi else hi
        if lo is not None and hi is not None:
            if lo > hi:
                raise RuntimeError("elimination produced an empty interval")
            values.append((lo + hi) / 2)
        elif lo is not None:
            values.append(lo)
        elif hi is not None:
            values.append(hi)
        else:
            values.append(Fraction(0))
    return values


def is_positive(system: LinearSystem) -> Verdict:
    """Whether some solution has every entry in {1, 2, ...}.

    Exact rational feasibility of `entries >= 1` over the kernel
    parametrization, via Fourier-Motzkin; the witness is scaled to integers.
    """
    basis = kernel_basis(system.matrix)
    if not basis:
        return Verdict(False)
    constraints = [
        ([vec[i] for vec in basis], 1) for i in range(system.cols)
    ]
    point = _fourier_motzkin_point(constraints, len(basis))
    if point is None:
        return Verdict(False)
    x = [sum(t * vec[i] for t, vec in zip(point, basis)) for i in range(system.cols)]
    denom = lcm(*(Fraction(v).denominator for v in x))
    witness = tuple(int(v * denom) for v in x)
    return Verdict(True, witness=witness)


def is_abundant(system: LinearSystem) -> Verdict:
    """Whether deleting any two columns preserves the rank.

    Systems with fewer than two columns cannot lose two columns and are
    reported non-abundant with witness None.  A failing pair (1-based) is
    returned as witness otherwise.
    """
    m = system.cols
    if m < 2:
        return Verdict(False, witness=None)
    full = (1 << m) - 1
    for i, j in combinations(range(m), 2):
        mask = full ^ (1 << i) ^ (1 << j)
        if _columns_rank(system, mask) != system.rank:
            return Verdict(False, witness=(i + 1, j + 1))
    return Verdict(True)


def _reduce_against(basis, vec):
    """Reduce a Fraction vector against an echelonized basis; True if -> 0."""
    vec = list(vec)
    for bvec, pivot in basis:
        if vec[pivot] != 0:
            coeff = vec[pivot] / bvec[pivot]
            vec = [x - coeff * y for x, y in zip(vec, bvec)]
    return not any(vec), vec


def column_condition(system: LinearSystem, max_cols: int = MAX_COLUMNS_DEFAULT) -> Verdict:
    """Whether the columns admit a block decomposition: the first block sums
    to zero and each later block sum lies in the span of earlier columns.

    Decided by reachability over sets of placed columns (the span depends
    only on the set, not the order).  The witness is one valid block
    sequence of 1-based column sets.
    """
    m = system.cols
    if m > max_cols:
        raise ScaleCapError(f"column condition search needs 2^{m} states, cap is {max_cols}")
    cols = [tuple(Fraction(x) for x in system.matrix.column(j)) for j in range(m)]
    full = (1 << m) - 1
    parent: dict[int, tuple[int, int] | None] = {0: None}
    queue = [0]
    head = 0
    while head < len(queue):
        state = queue[head]
        head += 1
        if state == full:
            blocks = []
            cur = state
            while parent[cur] is not None:
                prev, sub = parent[cur]
                blocks.append(tuple(j + 1 for j in range(m) if sub >> j & 1))
                cur = prev
            return Verdict(True, witness=tuple(reversed(blocks)))
        basis = []
        for j in range(m):
            if state >> j & 1:
                zero, reduced = _reduce_against(basis, cols[j])
                if not zero:
                    pivot = next(k for k, x in enumerate(reduced) if x != 0)
                    basis.append((reduced, pivot))
        comp = full ^ state
        sub = comp
        while sub:
            total = [Fraction(0)] * system.rows
            for j in range(m):
                if sub >> j & 1:
                    total = [a + b for a, b in zip(total, cols[j])]
            zero, _ = _reduce_against(basis, total)
            if zero:
                nxt = state | sub
                if nxt not in parent:
                    parent[nxt] = (state, sub)
                    queue.append(nxt)
            sub = (sub - 1) & comp
    return Verdict(False)


def is_partition_regular(system: LinearSystem, max_cols: int = MAX_COLUMNS_DEFAULT) -> Verdict:
    """Irredundant and satisfying the column condition.

    Irredundance is part of the definition (regularity is about solutions
    with distinct entries); the block decomposition is the witness.
    """
    if not is_irredundant(system):
        return Verdict(False)
    cc = column_condition(system, max_cols=max_cols)
    return Verdict(cc.holds, witness=cc.witness)


def is_invariant(system: LinearSystem) -> bool:
    """Whether the all-ones vector solves the system (A·1 = 0)."""
    return all(v == 0 for v in system.matrix.apply((1,) * system.cols))


def is_density_regular(system: LinearSystem) -> Verdict:
    """Irredundant and invariant (A·1 = 0)."""
    if not is_invariant(system):
        return Verdict(False)
    return Verdict(bool(is_irredundant(system)))


def _row_basis(matrix: IntMatrix) -> IntMatrix:
    deps = {d.index for d in row_dependencies(matrix)}
    rows = [matrix.entries[i] for i in range(matrix.rows) if i not in deps]
    return IntMatrix.from_rows(rows, cols=matrix.cols)


def subsystem(system: LinearSystem, cols) -> LinearSystem:
    """The induced system on the given columns after eliminating the rest.

    Requires rank_contribution > 0.  The representative is canonical:
    dependent rows are chosen greedily in elimination order, each row is
    scaled to coprime integers with positive leading entry, and rows are
    sorted lexicographically.
    """
    q = _check_columns(system, cols)
    r_q = rank_contribution(system, q)
    if r_q <= 0:
        raise ValueError(f"columns {set(q)} carry no rank (r_Q = 0); no subsystem")
    base = _row_basis(system.matrix)
    comp = [j for j in range(system.cols) if (j + 1) not in q]
    keep = [j - 1 for j in q]
    deps = row_dependencies(base.column_submatrix(comp))
    rows = []
    for dep in deps:
        row = [dep.scale * base.entries[dep.index][j] for j in keep]
        for other, coeff in dep.coefficients.items():
            row = [x - coeff * base.entries[other][j] for x, j in zip(row, keep)]
        rows.append(_canonical_integer_vector(row))
    rows.sort()
    name = f"{system.name}[{','.join(map(str, q))}]" if system.name else None
    result = LinearSystem(IntMatrix.from_rows(rows, cols=len(q)), name=name)
    if result.rank != r_q:
        raise RuntimeError("subsystem construction lost rank")
    return result


def stacked_form(system: LinearSystem, cols) -> tuple[IntMatrix, tuple[int, ...]]:
    """Row-equivalent stacked matrix with the induced block in the corner.

    Returns (B, permutation) where permutation lists the original 1-based
    columns in B's column order (the chosen columns first).  B has the same
    solution set as the permuted system.
    """
    q = _check_columns(system, cols)
    if rank_contribution(system, q) <= 0:
        raise ValueError("no stacked form when the columns carry no rank")
    base = _row_basis(system.matrix)
    perm = [j - 1 for j in q] + [j for j in range(system.cols) if (j + 1) not in q]
    comp = perm[len(q):]
    deps = row_dependencies(base.column_submatrix(comp))
    dep_idx = {d.index for d in deps}
    rows = [tuple(base.entries[i][j] for j in perm) for i in range(base.rows) if i not in dep_idx]
    for dep in deps:
        row = [dep.scale * base.entries[dep.index][j] for j in perm]
        for other, coeff in dep.coefficients.items():
            row = [x - coeff * base.entries[other][j] for x, j in zip(row, perm)]
        rows.append(_canonical_integer_vector(row))
    return IntMatrix.from_rows(rows, cols=system.cols), tuple(j + 1 for j in perm)


@dataclass(frozen=True)
class ClassificationReport:
    """All classification flags for one system, with witnesses."""

    system: LinearSystem
    irredundant: bool
    positive: bool
    abundant: bool
    partition_regular: bool
    density_regular: bool
    invariant: bool
    m1: DensityReport | None
    m: DensityReport
    proper_solution: tuple[int, ...] | None
    positive_solution: tuple[int, ...] | None
    failing_pair: tuple[int, int] | None
    blocks: tuple[tuple[int, ...], ...] | None


def classify(system: LinearSystem, max_cols: int = MAX_COLUMNS_DEFAULT) -> ClassificationReport:
    """Aggregate classification; m1 is included exactly when abundant."""
    irr = is_irredundant(system)
    pos = is_positive(system)
    abundant = is_abundant(system)
    pr = is_partition_regular(system, max_cols=max_cols)
    invariant = is_invariant(system)
    dr = bool(irr) and invariant
    m1 = max_one_density(system, max_cols=max_cols) if abundant else None
    m = max_density(system, max_cols=max_cols)
    if dr and not pr.holds:
        raise RuntimeError("density regular system failed partition regularity")
    if pr.holds and system.cols >= 2 and not abundant.holds:
        raise RuntimeError("partition regular system failed abundance")
    return ClassificationReport(
        system=system,
        irredundant=bool(irr),
        positive=bool(pos),
        abundant=bool(abundant),
        partition_regular=bool(pr),
        density_regular=dr,
        invariant=invariant,
        m1=m1,
        m=m,
        proper_solution=irr.witness,
        positive_solution=pos.witness,
        failing_pair=abundant.witness,
        blocks=pr.witness,
    )
