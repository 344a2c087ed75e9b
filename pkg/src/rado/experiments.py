"""Seeded random-set experiments, exact moments and threshold sweeps.

Each trial draws its own counter-based random stream keyed by (seed, trial
index), so trials can be split across workers in any way without changing a
single bit of the output.  Deciders are exact searches; when a step budget
runs out the trial is recorded as indeterminate and excluded, never guessed.
"""

from __future__ import annotations

import csv
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExhaustedError, ScaleCapError
from .extremal import max_free_subset
from .partitions import contract, partitions_of
from .solutions import (
    SolutionClass,
    contains_solution,
    count_solutions,
    enumerate_solutions,
    ground_set,
    interval,
)
from .systems import LinearSystem, max_density, max_one_density

_MASK64 = (1 << 64) - 1

PROPERTIES = ("contains", "epsilon", "partition")


def sample_set(n: int, p, seed: int, trial_index: int) -> tuple[int, ...]:
    """Binomial random subset of [n]: element i kept iff the i-th draw of the
    (seed, trial_index) stream is below p.  Fully determined by its inputs."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if n < 0:
        raise ValueError("n must be non-negative")
    key = ((seed & _MASK64) << 64) | (trial_index & _MASK64)
    draws = np.random.Generator(np.random.Philox(key=key)).random(n)
    return tuple(i + 1 for i in range(n) if draws[i] < p)


def arrow_epsilon(
    system: LinearSystem,
    elements,
    epsilon,
    solution_class: SolutionClass = SolutionClass.PROPER,
    node_budget: int | None = None,
) -> bool:
    """Whether every subset of relative size >= epsilon contains a solution.

    Equivalent to the largest solution-free subset having fewer than
    epsilon*|T| elements; decided by the exact subset search with an early
    exit as soon as a large enough free subset is found.
    """
    elements = ground_set(elements)
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    threshold = math.ceil(epsilon * len(elements))
    outcome = max_free_subset(
        system, elements, solution_class, target=threshold, node_budget=node_budget
    )
    if outcome.target_reached:
        return False
    if outcome.exact:
        return True
    raise BudgetExhaustedError("subset search budget exhausted before deciding")


def find_avoiding_coloring(
    system: LinearSystem,
    elements,
    colors: int,
    solution_class: SolutionClass = SolutionClass.PROPER,
    node_budget: int | None = None,
) -> tuple[tuple[int, ...], ...] | None:
    """A coloring of the ground set with no monochromatic solution, or None.

    Backtracking with solution-driven pruning: assigning a color fails
    immediately when it completes a monochromatic solution support.  Color
    classes are interchangeable, so each element may only open one new color.
    """
    from .extremal import _minimal_supports

    elements = ground_set(elements)
    if colors < 1:
        raise ValueError("need at least one color")
    n = len(elements)
    edges = _minimal_supports(system, elements, solution_class)
    degree: Counter = Counter()
    for e in edges:
        for v in e:
            degree[v] += 1
    order = sorted(elements, key=lambda v: (-degree[v], v))
    pos = {v: i for i, v in enumerate(order)}
    edges_at: list[list[int]] = [[] for _ in range(n)]
    for e in edges:
        mask = sum(1 << pos[v] for v in e)
        for v in e:
            edges_at[pos[v]].append(mask)

    assignment = [-1] * n
    class_masks = [0] * colors
    nodes = 0

    def conflicts(i: int, color: int) -> bool:
        grown = class_masks[color] | (1 << i)
        for mask in edges_at[i]:
            if mask & ~grown == 0:
                return True
        return False

    def backtrack(i: int, used: int) -> bool:
        nonlocal nodes
        if i == n:
            return True
        for color in range(min(used + 1, colors)):
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                raise BudgetExhaustedError("coloring search budget exhausted")
            if conflicts(i, color):
                continue
            assignment[i] = color
            class_masks[color] |= 1 << i
            if backtrack(i + 1, max(used, color + 1)):
                return True
            class_masks[color] &= ~(1 << i)
            assignment[i] = -1
        return False

    if not backtrack(0, 0):
        return None
    blocks = [[] for _ in range(colors)]
    for i, color in enumerate(assignment):
        blocks[color].append(order[i])
    return tuple(tuple(sorted(b)) for b in blocks)


def arrow_s(
    system: LinearSystem,
    elements,
    colors: int,
    solution_class: SolutionClass = SolutionClass.PROPER,
    node_budget: int | None = None,
) -> bool:
    """Whether every coloring with the given number of colors produces a
    monochromatic solution of the class."""
    return (
        find_avoiding_coloring(system, elements, colors, solution_class, node_budget)
        is None
    )


def coloring_avoids(
    system: LinearSystem,
    blocks,
    solution_class: SolutionClass = SolutionClass.PROPER,
) -> bool:
    """Verify that no color class of the given partition contains a solution."""
    return not any(
        contains_solution(system, block, solution_class) for block in blocks if block
    )


@dataclass(frozen=True)
class TrialConfig:
    """Everything needed to reproduce one batch of trials bit for bit."""

    n: int
    p: float
    trials: int
    seed: int
    solution_class: SolutionClass = SolutionClass.PROPER
    epsilon: Fraction | None = None
    colors: int | None = None
    node_budget: int | None = None
    max_steps: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if not 0.0 <= float(self.p) <= 1.0:
            raise ValueError("p must lie in [0, 1]")


@dataclass(frozen=True)
class EstimateRow:
    """One success-probability estimate with its Wilson 95% interval."""

    property: str
    solution_class: str
    n: int
    C: Fraction | None
    p: float
    trials: int
    successes: int
    indeterminate: int
    estimate: Fraction | None
    ci_low: float
    ci_high: float
    seed: int


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return (0.0, 1.0)
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def _decide(system: LinearSystem, prop: str, config: TrialConfig, subset) -> bool:
    if prop == "contains":
        return contains_solution(
            system, subset, config.solution_class, max_steps=config.max_steps
        )
    if prop == "epsilon":
        if config.epsilon is None:
            raise ValueError("epsilon property needs config.epsilon")
        return arrow_epsilon(
            system, subset, config.epsilon, config.solution_class, config.node_budget
        )
    if prop == "partition":
        if config.colors is None:
            raise ValueError("partition property needs config.colors")
        return arrow_s(
            system, subset, config.colors, config.solution_class, config.node_budget
        )
    raise ValueError(f"unknown property {prop!r}; expected one of {PROPERTIES}")


def _run_trials(args) -> tuple[int, int]:
    system, prop, config, start, stop = args
    successes = indeterminate = 0
    for index in range(start, stop):
        subset = sample_set(config.n, config.p, config.seed, index)
        try:
            if _decide(system, prop, config, subset):
                successes += 1
        except BudgetExhaustedError:
            indeterminate += 1
    return successes, indeterminate


def default_workers() -> int:
    value = os.environ.get("RADO_WORKERS", "1")
    try:
        workers = int(value)
    except ValueError as exc:
        raise ValueError(f"RADO_WORKERS must be an integer, got {value!r}") from exc
    return max(1, workers)


def estimate_probability(
    system: LinearSystem,
    config: TrialConfig,
    prop: str,
    C: Fraction | None = None,
    workers: int | None = None,
) -> EstimateRow:
    """Success fraction of the property over independent seeded trials.

    Indeterminate trials (budget exhausted) are excluded from the estimate
    and reported separately.  The result does not depend on the worker count.
    """
    workers = default_workers() if workers is None else workers
    if workers <= 1 or config.trials < 2 * workers:
        chunks = [(system, prop, config, 0, config.trials)]
        results = [_run_trials(chunks[0])]
    else:
        step = -(-config.trials // workers)
        chunks = [
            (system, prop, config, start, min(start + step, config.trials))
            for start in range(0, config.trials, step)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_trials, chunks))
    successes = sum(r[0] for r in results)
    indeterminate = sum(r[1] for r in results)
    decided = config.trials - indeterminate
    estimate = Fraction(successes, decided) if decided else None
    low, high = wilson_interval(successes, decided)
    return EstimateRow(
        property=prop,
        solution_class=config.solution_class.value,
        n=config.n,
        C=C,
        p=float(config.p),
        trials=config.trials,
        successes=successes,
        indeterminate=indeterminate,
        estimate=estimate,
        ci_low=low,
        ci_high=high,
        seed=config.seed,
    )


@dataclass(frozen=True)
class MomentReport:
    """Exact first two moments of the proper-solution count in [n]_p."""

    n: int
    p: Fraction
    expectation: Fraction
    variance: Fraction


def expected_count_exact(
    system: LinearSystem, n: int, p, solution_class: SolutionClass = SolutionClass.PROPER
) -> Fraction:
    """Exact expected number of class solutions inside [n]_p.

    Sums p^(number of distinct entries) over the solutions; grouping by
    repetition pattern turns this into exact proper counts of contracted
    systems, so no solution list is materialized.
    """
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    box = interval(n)
    if solution_class is SolutionClass.PROPER:
        return count_solutions(system, box, SolutionClass.PROPER) * p**system.cols
    total = Fraction(0)
    for part in partitions_of(system.cols):
        sub = contract(system, part)
        if solution_class is SolutionClass.NONTRIVIAL and sub.rank != system.rank:
            continue
        total += count_solutions(sub, box, SolutionClass.PROPER) * p**part.size
    return total


def variance_exact(
    system: LinearSystem, n: int, p, max_supports: int = 20_000
) -> MomentReport:
    """Exact variance of the proper-solution count in [n]_p.

    Sums p^|s(x) ∪ s(y)| - p^(|s(x)|+|s(y)|) over all ordered pairs of proper
    solutions; pairs with disjoint supports cancel, so only overlapping
    supports are visited.
    """
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    weights: Counter = Counter()
    for x in enumerate_solutions(system, interval(n), SolutionClass.PROPER):
        weights[frozenset(x)] += 1
    supports = sorted(weights, key=sorted)
    if len(supports) > max_supports:
        raise ScaleCapError(
            f"{len(supports)} distinct supports exceed the pair-enumeration cap"
        )
    by_element: dict[int, list[int]] = {}
    for idx, s in enumerate(supports):
        for v in s:
            by_element.setdefault(v, []).append(idx)
    expectation = sum((w * p**len(s) for s, w in weights.items()), Fraction(0))
    term_counts: Counter = Counter()
    for idx, s in enumerate(supports):
        neighbors = set()
        for v in s:
            neighbors.update(by_element[v])
        w = weights[s]
        for jdx in neighbors:
            t = supports[jdx]
            term_counts[(len(s | t), len(s) + len(t))] += w * weights[t]
    variance = sum(
        (count * (p**union - p**total) for (union, total), count in term_counts.items()),
        Fraction(0),
    )
    return MomentReport(n=n, p=p, expectation=expectation, variance=variance)


@dataclass(frozen=True)
class ThresholdCurve:
    """Estimate rows along p = C * n^(-1/exponent) for a grid of C and n."""

    system_rows: tuple[tuple[int, ...], ...]
    system_name: str | None
    property: str
    solution_class: str
    exponent_kind: str
    exponent: Fraction
    reference_c: float | None
    seed: int
    rows: tuple[EstimateRow, ...]


def smallc_reference(epsilon, m: int) -> float:
    """The density-side reference constant ((1 - eps)/4)^(1/(m-1))."""
    epsilon = Fraction(epsilon)
    if m < 2:
        raise ValueError("need at least two columns")
    return float((1 - epsilon) / 4) ** (1.0 / (m - 1))


def threshold_sweep(
    system: LinearSystem,
    ns,
    Cs,
    exponent_source: str = "m1",
    prop: str = "contains",
    solution_class: SolutionClass = SolutionClass.PROPER,
    trials: int = 100,
    seed: int = 0,
    epsilon=None,
    colors: int | None = None,
    node_budget: int | None = None,
    max_steps: int | None = None,
    workers: int | None = None,
) -> ThresholdCurve:
    """Estimate the property probability on a (C, n) grid at
    p = min(1, C * n^(-1/exponent)), where the exponent is the system's
    maximum 1-density (m1) or maximum density (m)."""
    if exponent_source == "m1":
        exponent = max_one_density(system).value
    elif exponent_source == "m":
        exponent = max_density(system).value
    else:
        raise ValueError("exponent_source must be 'm1' or 'm'")
    eps_fraction = Fraction(epsilon) if epsilon is not None else None
    rows = []
    for n in ns:
        for C in Cs:
            C = Fraction(C)
            p = min(1.0, float(C) * float(n) ** (-1.0 / float(exponent)))
            config = TrialConfig(
                n=n,
                p=p,
                trials=trials,
                seed=seed,
                solution_class=solution_class,
                epsilon=eps_fraction,
                colors=colors,
                node_budget=node_budget,
                max_steps=max_steps,
            )
            rows.append(estimate_probability(system, config, prop, C=C, workers=workers))
    reference = (
        smallc_reference(eps_fraction, system.cols)
        if prop == "epsilon" and eps_fraction is not None
        else None
    )
    return ThresholdCurve(
        system_rows=system.matrix.entries,
        system_name=system.name,
        property=prop,
        solution_class=solution_class.value,
        exponent_kind=exponent_source,
        exponent=exponent,
        reference_c=reference,
        seed=seed,
        rows=tuple(rows),
    )


CSV_FIELDS = (
    "system",
    "name",
    "property",
    "class",
    "n",
    "C",
    "p",
    "trials",
    "successes",
    "indeterminate",
    "estimate",
    "ci_low",
    "ci_high",
    "seed",
)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return str(value)  # "num/den", or plain digits for integers
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def write_curve_csv(curve: ThresholdCurve, stream) -> None:
    """Serialize a curve with one row per estimate; rationals as num/den."""
    writer = csv.writer(stream)
    writer.writerow(CSV_FIELDS)
    system_text = str([list(r) for r in curve.system_rows]).replace(" ", "")
    for row in curve.rows:
        writer.writerow(
            [
                system_text,
                curve.system_name or "",
                row.property,
                row.solution_class,
                row.n,
                _csv_cell(row.C),
                _csv_cell(row.p),
                row.trials,
                row.successes,
                row.indeterminate,
                _csv_cell(row.estimate),
                _csv_cell(row.ci_low),
                _csv_cell(row.ci_high),
                row.seed,
            ]
        )
