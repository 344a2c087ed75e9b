"""Exact integer/rational matrix kernel.

Ranks are computed by fraction-free (Bareiss) elimination over the integers;
rationals enter only when extracting kernel vectors or dependency
coefficients.  No floating point anywhere.  The empty matrix (zero rows
and/or zero columns) is a first-class value with rank 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major storage."""

    entries: tuple[tuple[int, ...], ...]
    cols: int

    def __post_init__(self):
        if self.cols < 0:
            raise ValueError("column count must be non-negative")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("all rows must have exactly `cols` entries")
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise ValueError(f"matrix entries must be integers, got {x!r}")

    @staticmethod
    def from_rows(rows, cols: int | None = None) -> "IntMatrix":
        rows = [tuple(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return IntMatrix(entries=tuple(rows), cols=cols)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def column_submatrix(self, indices) -> "IntMatrix":
        """Matrix keeping only the given 0-based columns, in the given order."""
        idx = tuple(indices)
        for j in idx:
            if not 0 <= j < self.cols:
                raise ValueError(f"column index {j} out of range")
        return IntMatrix(
            entries=tuple(tuple(r[j] for j in idx) for r in self.entries),
            cols=len(idx),
        )

    def apply(self, x) -> tuple:
        """Matrix-vector product A·x, exact (entries may be Fractions)."""
        if len(x) != self.cols:
            raise ValueError("vector length must equal the column count")
        return tuple(sum(a * v for a, v in zip(row, x)) for row in self.entries)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(
            entries=tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
            cols=self.cols,
        )


@dataclass(frozen=True)
class RowDependency:
    """One dependent row expressed as a rational combination of kept rows.

    scale * row[index] == sum(coefficients[j] * row[j] for j), with all
    integers, scale > 0 and gcd(scale, *coefficients) == 1.
    """

    index: int
    scale: int
    coefficients: dict[int, int]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", dict(self.coefficients))


@lru_cache(maxsize=None)
def matrix_rank(matrix: IntMatrix) -> int:
    """Exact rank over the rationals via fraction-free elimination."""
    a = [list(r) for r in matrix.entries]
    nrows, ncols = matrix.rows, matrix.cols
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                # Bareiss: the division by the previous pivot is exact.
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
    return r


def _rref(rows: list[list[Fraction]]) -> tuple[list[int], list[list[Fraction]]]:
    """Reduced row echelon form in place; returns (pivot columns, rows)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / Fraction(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots, rows


def _canonical_integer_vector(vec) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, first nonzero positive."""
    fracs = [Fraction(x) for x in vec]
    denom = lcm(*(f.denominator for f in fracs)) if fracs else 1
    ints = [int(f * denom) for f in fracs]
    g = gcd(*ints) if any(ints) else 1
    if g == 0:
        g = 1
    ints = [x // g for x in ints]
    lead = next((x for x in ints if x != 0), 1)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def kernel_basis(matrix: IntMatrix) -> tuple[tuple[int, ...], ...]:
    """Basis of {x : A·x = 0} over Q, one vector per free column.

    Each vector is canonicalized to coprime integer entries with the first
    nonzero entry positive; the basis is ordered by free column index.
    """
    m = matrix.cols
    if m == 0:
        return ()
    rows = [[Fraction(x) for x in r] for r in matrix.entries]
    pivots, rows = _rref(rows)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * m
        vec[f] = Fraction(1)
        for i, p in enumerate(pivots):
            vec[p] = -rows[i][f]
        basis.append(_canonical_integer_vector(vec))
    return tuple(basis)


def rowspace_contains(matrix: IntMatrix, vector) -> bool:
    """Whether the vector lies in the Q-span of the matrix rows.

    Decided by solving yᵀ·A = v for y, i.e. eliminating on the transpose
    with v as the right-hand side and checking consistency.
    """
    if len(vector) != matrix.cols:
        raise ValueError("vector length must equal the column count")
    nrows = matrix.rows
    # One equation per column of A; unknowns are the row multipliers.
    eqs = [
        [Fraction(matrix.entries[i][j]) for i in range(nrows)] + [Fraction(vector[j])]
        for j in range(matrix.cols)
    ]
    if not eqs:
        return True
    pivots, _ = _rref(eqs)
    return nrows not in pivots


def row_dependencies(matrix: IntMatrix) -> tuple[RowDependency, ...]:
    """Greedy maximal set of rows expressible through the preceding kept rows.

    Rows are processed top to bottom; a row already in the span of the kept
    rows becomes dependent, with integer coefficients clearing denominators.
    Exactly rows - rank(matrix) dependencies are returned.
    """
    kept: list[tuple[list[Fraction], int, dict[int, Fraction]]] = []
    deps: list[RowDependency] = []
    for i, raw in enumerate(matrix.entries):
        vec = [Fraction(x) for x in raw]
        combo: dict[int, Fraction] = {}
        for bvec, bpivot, bcombo in kept:
            coeff = vec[bpivot] / bvec[bpivot]
            if coeff == 0:
                continue
            vec = [x - coeff * y for x, y in zip(vec, bvec)]
            for j, c in bcombo.items():
                combo[j] = combo.get(j, Fraction(0)) + coeff * c
        if any(vec):
            pivot = next(k for k, x in enumerate(vec) if x != 0)
            kept.append((vec, pivot, {**{j: -c for j, c in combo.items()}, i: Fraction(1)}))
        else:
            combo = {j: c for j, c in combo.items() if c != 0}
            scale = lcm(*(c.denominator for c in combo.values())) if combo else 1
            coeffs = {j: int(c * scale) for j, c in combo.items()}
            g = gcd(scale, *coeffs.values()) if coeffs else scale
            deps.append(
                RowDependency(
                    index=i,
                    scale=scale // g,
                    coefficients={j: v // g for j, v in coeffs.items()},
                )
            )
    return tuple(deps)
