"""Exact extremal numbers and supersaturation probes.

The core is an exact maximum solution-free-subset search on the hypergraph
whose edges are the (minimal) supports of solutions inside the ground set.
Suffix optima computed incrementally give strong pruning; a greedy
edge-disjoint packing certifies an upper bound whenever the node budget
runs out, so partial answers are never silently wrong.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb

from .errors import BudgetExhaustedError, ScaleCapError
from .solutions import SolutionClass, count_solutions, enumerate_solutions, ground_set, interval
from .systems import LinearSystem


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a maximum solution-free-subset search."""

    size: int
    witness: tuple[int, ...]
    exact: bool
    upper_bound: int
    target_reached: bool
    nodes: int


def _minimal_supports(system: LinearSystem, elements, solution_class) -> list[frozenset]:
    sups = {frozenset(x) for x in enumerate_solutions(system, elements, solution_class)}
    minimal: list[frozenset] = []
    for s in sorted(sups, key=lambda s: (len(s), sorted(s))):
        if not any(t <= s for t in minimal if len(t) < len(s)):
            minimal.append(s)
    return minimal


def _greedy_disjoint_packing(edge_masks: list[int]) -> int:
    used = 0
    packed = 0
    for mask in edge_masks:
        if mask & used == 0:
            used |= mask
            packed += 1
    return packed


class _OutOfNodes(Exception):
    pass


def max_free_subset(
    system: LinearSystem,
    elements,
    solution_class: SolutionClass = SolutionClass.PROPER,
    target: int | None = None,
    node_budget: int | None = None,
) -> SearchOutcome:
    """Largest subset of the ground set containing no solution of the class.

    Exact branch and bound: elements are ordered by descending solution
    degree, suffix optima are solved smallest-suffix first and reused as
    bounds (a suffix optimum grows by at most one per added element, and
    growth forces the new element into the subset).  With `target` set the
    search stops as soon as some free subset of that size is found.  With a
    `node_budget` the search may stop early, returning the best subset found
    plus a packing-certified upper bound and exact=False.
    """
    elements = ground_set(elements)
    n = len(elements)
    if target is not None and target <= 0:
        return SearchOutcome(0, (), False, n, True, 0)
    edges = _minimal_supports(system, elements, solution_class)
    degree: Counter = Counter()
    for e in edges:
        for v in e:
            degree[v] += 1
    order = sorted(elements, key=lambda v: (-degree[v], v))
    pos = {v: i for i, v in enumerate(order)}
    edge_masks = sorted({sum(1 << pos[v] for v in e) for e in edges})
    edges_at: list[list[int]] = [[] for _ in range(n)]
    for mask in edge_masks:
        m = mask
        while m:
            low = m & -m
            edges_at[low.bit_length() - 1].append(mask)
            m ^= low
    packing_bound = n - _greedy_disjoint_packing(edge_masks)

    best = [0] * (n + 1)      # best[i] = optimum within order[i:]
    witness = [0] * (n + 1)   # mask achieving best[i]
    nodes = 0

    def can_add(i: int, chosen: int) -> bool:
        grown = chosen | (1 << i)
        for mask in edges_at[i]:
            if mask & ~grown == 0:
                return False
        return True

    def reach(j: int, chosen: int, missing: int) -> int | None:
        """Grow `chosen` by `missing` elements from order[j:], or None."""
        nonlocal nodes
        if missing == 0:
            return chosen
        if j >= n or best[j] < missing or n - j < missing:
            return None
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise _OutOfNodes
        if can_add(j, chosen):
            got = reach(j + 1, chosen | (1 << j), missing - 1)
            if got is not None:
                return got
        return reach(j + 1, chosen, missing)

    def values(mask: int) -> tuple[int, ...]:
        return tuple(sorted(order[i] for i in range(n) if mask >> i & 1))

    exhausted = False
    last = n  # index of the smallest suffix whose optimum is complete
    try:
        for i in range(n - 1, -1, -1):
            got = reach(i + 1, 1 << i, best[i + 1]) if can_add(i, 0) else None
            if got is not None:
                best[i] = best[i + 1] + 1
                witness[i] = got
            else:
                best[i] = best[i + 1]
                witness[i] = witness[i + 1]
            last = i
            if target is not None and best[i] >= target:
                return SearchOutcome(
                    size=best[i],
                    witness=values(witness[i]),
                    exact=False,
                    upper_bound=packing_bound,
                    target_reached=True,
                    nodes=nodes,
                )
    except _OutOfNodes:
        exhausted = True

    exact = not exhausted and last == 0
    found = best[last]
    return SearchOutcome(
        size=found,
        witness=values(witness[last]),
        exact=exact,
        upper_bound=found if exact else packing_bound,
        target_reached=(target is not None and found >= target),
        nodes=nodes,
    )


@dataclass(frozen=True)
class ExtremalResult:
    """ex(n) and a witness; exact=False means value is only a lower bound."""

    n: int
    value: int
    witness: tuple[int, ...]
    exact: bool
    upper_bound: int


def extremal_number(
    system: LinearSystem, n: int, node_budget: int | None = None
) -> ExtremalResult:
    """Size of the largest subset of [n] without a proper solution."""
    if n < 1:
        raise ValueError("n must be at least 1")
    outcome = max_free_subset(
        system, interval(n), SolutionClass.PROPER, node_budget=node_budget
    )
    return ExtremalResult(
        n=n,
        value=outcome.size,
        witness=outcome.witness,
        exact=outcome.exact,
        upper_bound=outcome.upper_bound,
    )


@dataclass(frozen=True)
class PiPoint:
    n: int
    value: int
    ratio: Fraction
    exact: bool


def pi_sequence(system: LinearSystem, ns, node_budget: int | None = None) -> list[PiPoint]:
    """Finite-n extremal ratios ex(n)/n; no limit is claimed or implied."""
    ns = list(ns)
    if ns != sorted(ns):
        raise ValueError("n values must be ascending")
    out = []
    for n in ns:
        res = extremal_number(system, n, node_budget=node_budget)
        out.append(PiPoint(n=n, value=res.value, ratio=Fraction(res.value, n), exact=res.exact))
    return out


@dataclass(frozen=True)
class SupersaturationReport:
    """Minimum number of proper solutions forced into delta-dense subsets."""

    n: int
    delta: Fraction
    subset_size: int
    min_count: int
    total_count: int
    zeta: Fraction
    exact: bool
    witness: tuple[int, ...]


def supersaturation_min(
    system: LinearSystem,
    n: int,
    delta,
    mode: str = "exact",
    max_subsets: int = 200_000,
    samples: int = 1000,
    seed: int | None = None,
) -> SupersaturationReport:
    """Minimum proper-solution count over subsets of [n] of density delta.

    Exact mode scans all subsets of size ceil(delta*n) (guarded by
    max_subsets); sampled mode scans a seeded random selection and therefore
    only upper-bounds the true minimum (exact=False).
    """
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError("delta must be in (0, 1]")
    k = ceil(delta * n)
    total = count_solutions(system, interval(n), SolutionClass.PROPER)

    def count_in(subset) -> int:
        return sum(1 for _ in enumerate_solutions(system, subset, SolutionClass.PROPER))

    if mode == "exact":
        if comb(n, k) > max_subsets:
            raise ScaleCapError(
                f"exact mode needs C({n},{k}) = {comb(n, k)} subsets, cap is {max_subsets}"
            )
        from itertools import combinations

        candidates = (tuple(c) for c in combinations(range(1, n + 1), k))
        exact = True
    elif mode == "sampled":
        if seed is None:
            raise ValueError("sampled mode needs a seed")
        rng = random.Random(seed)
        candidates = (
            tuple(sorted(rng.sample(range(1, n + 1), k))) for _ in range(samples)
        )
        exact = False
    else:
        raise ValueError(f"unknown mode {mode!r}")

    min_count = None
    witness: tuple[int, ...] = ()
    for subset in candidates:
        c = count_in(subset)
        if min_count is None or c < min_count:
            min_count, witness = c, subset
            if c == 0 and mode == "sampled":
                break
    if min_count is None:
        raise RuntimeError("no candidate subsets")
    zeta = Fraction(min_count, total) if total else Fraction(0)
    return SupersaturationReport(
        n=n,
        delta=delta,
        subset_size=k,
        min_count=min_count,
        total_count=total,
        zeta=zeta,
        exact=exact,
        witness=witness,
    )
