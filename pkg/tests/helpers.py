"""Independent brute-force oracles used to cross-check the library.

Everything here is deliberately naive and self-contained: plain Fraction
Gaussian elimination, m-nested-loop solution enumeration, subset scans.
None of it calls back into the package's own algorithms.
"""

from fractions import Fraction
from itertools import combinations, product


def frac_rank(rows) -> int:
    """Rank by textbook Gaussian elimination over Fractions."""
    mat = [[Fraction(x) for x in row] for row in rows]
    ncols = len(mat[0]) if mat else 0
    rank = 0
    for c in range(ncols):
        pivot = None
        for i in range(rank, len(mat)):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][c]
        mat[rank] = [v * inv for v in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def pattern_blocks(x):
    """Blocks of equal entries (1-based positions), ordered by minima."""
    groups: dict = {}
    for i, v in enumerate(x):
        groups.setdefault(v, []).append(i + 1)
    return sorted((tuple(g) for g in groups.values()), key=lambda b: b[0])


def contract_rows(rows, blocks):
    return [[sum(row[j - 1] for j in block) for block in blocks] for row in rows]


def naive_solutions(rows, ground, cls="all", rhs=None):
    """All class solutions with entries in `ground`, by m nested loops."""
    m = len(rows[0])
    rhs = rhs if rhs is not None else [0] * len(rows)
    rank = frac_rank(rows)
    out = []
    for x in product(sorted(ground), repeat=m):
        if any(
            sum(a * v for a, v in zip(row, x)) != b for row, b in zip(rows, rhs)
        ):
            continue
        if cls == "proper" and len(set(x)) != m:
            continue
        if cls == "nontrivial" and frac_rank(contract_rows(rows, pattern_blocks(x))) != rank:
            continue
        out.append(x)
    return out


def bell_number(n: int) -> int:
    """Bell numbers via the Bell triangle; the last entry of row n is B(n)."""
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[-1]


def brute_max_density(rows, one_density: bool):
    """Naive evaluation of the density ratio over every column subset."""
    m = len(rows[0])
    rank = frac_rank(rows)
    best = None
    low = 2 if one_density else 1
    for size in range(low, m + 1):
        for q in combinations(range(m), size):
            comp = [j for j in range(m) if j not in q]
            sub = [[row[j] for j in comp] for row in rows]
            r_q = rank - frac_rank(sub)
            den = (size - r_q - 1) if one_density else (size - r_q)
            if den <= 0:
                return None  # ill-defined
            value = Fraction(size - 1, den) if one_density else Fraction(size, den)
            if best is None or value > best:
                best = value
    return best


def brute_solution_free_max(rows, ground, cls="proper"):
    """Exhaustive scan over all subsets for the largest solution-free one."""
    ground = sorted(ground)
    best = 0
    for size in range(len(ground), -1, -1):
        for subset in combinations(ground, size):
            if not naive_solutions(rows, subset, cls):
                return size
    return best


def random_system_rows(rng, max_rows=2, max_cols=4, lo=-3, hi=3, min_cols=1):
    r = rng.randint(1, max_rows)
    m = rng.randint(min_cols, max_cols)
    return [[rng.randint(lo, hi) for _ in range(m)] for _ in range(r)]
