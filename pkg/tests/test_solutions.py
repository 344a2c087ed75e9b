import random
from math import factorial

import pytest

from rado import (
    LinearSystem,
    SolutionClass,
    arithmetic_progression,
    contains_solution,
    count_solutions,
    enumerate_solutions,
    ground_set,
    interval,
    max_ell_degree,
    patterns_realized_in,
    rank_contribution,
    subsystem,
    support,
)
from rado.errors import BudgetExhaustedError
from rado.partitions import ColumnPartition, contract, realized_patterns

from helpers import naive_solutions, random_system_rows

ALL, NT, PROPER = SolutionClass.ALL, SolutionClass.NONTRIVIAL, SolutionClass.PROPER


class TestSchurOnFive:
    def test_proper_solutions(self, schur_system):
        got = sorted(enumerate_solutions(schur_system, interval(5), PROPER))
        assert got == [
            (1, 2, 3), (1, 3, 4), (1, 4, 5), (2, 1, 3),
            (2, 3, 5), (3, 1, 4), (3, 2, 5), (4, 1, 5),
        ]

    def test_class_counts(self, schur_system):
        assert count_solutions(schur_system, interval(5), ALL) == 10
        assert count_solutions(schur_system, interval(5), NT) == 10
        assert count_solutions(schur_system, interval(5), PROPER) == 8

    def test_nontrivial_adds_the_doublings(self, schur_system):
        extra = set(enumerate_solutions(schur_system, interval(5), NT)) - set(
            enumerate_solutions(schur_system, interval(5), PROPER)
        )
        assert extra == {(1, 1, 2), (2, 2, 4)}

    def test_tiny_ground_set(self, schur_system):
        assert not contains_solution(schur_system, (1, 2), PROPER)
        assert contains_solution(schur_system, (1, 2), NT)
        assert list(enumerate_solutions(schur_system, (1, 2), NT)) == [(1, 1, 2)]


class TestOracleEquivalence:
    def test_random_systems_all_classes(self):
        rng = random.Random(137)
        for _ in range(60):
            rows = random_system_rows(rng, max_rows=2, max_cols=4)
            system = LinearSystem.from_rows(rows)
            n = rng.randint(1, 9 if system.cols >= 4 else 12)
            box = interval(n)
            for cls, tag in ((ALL, "all"), (NT, "nontrivial"), (PROPER, "proper")):
                expected = naive_solutions(rows, box, tag)
                got = sorted(enumerate_solutions(system, box, cls))
                assert got == sorted(expected)
                assert count_solutions(system, box, cls) == len(expected)

    def test_inhomogeneous_systems(self):
        rng = random.Random(139)
        exercised = 0
        for _ in range(40):
            rows = random_system_rows(rng, max_rows=2, max_cols=3)
            system = LinearSystem.from_rows(rows)
            rhs = [rng.randint(-3, 3) for _ in rows]
            box = interval(rng.randint(1, 10))
            for cls, tag in ((ALL, "all"), (NT, "nontrivial"), (PROPER, "proper")):
                expected = naive_solutions(rows, box, tag, rhs=rhs)
                got = sorted(enumerate_solutions(system, box, cls, rhs=rhs))
                assert got == sorted(expected)
                assert count_solutions(system, box, cls, rhs=rhs) == len(expected)
                exercised += len(expected) > 0
        assert exercised > 10

    def test_explicit_ground_sets(self, schur_system):
        rng = random.Random(141)
        for _ in range(30):
            elements = sorted(rng.sample(range(1, 21), rng.randint(0, 8)))
            expected = naive_solutions([[1, 1, -1]], elements, "proper")
            got = list(enumerate_solutions(schur_system, elements, PROPER))
            assert sorted(got) == sorted(expected)
            assert count_solutions(schur_system, elements, PROPER) == len(expected)


class TestCountBounds:
    def test_chain_of_class_inclusions_and_trivial_bound(self):
        rng = random.Random(149)
        for _ in range(40):
            rows = random_system_rows(rng, max_rows=2, max_cols=4)
            system = LinearSystem.from_rows(rows)
            n = rng.randint(1, 10)
            box = interval(n)
            proper = count_solutions(system, box, PROPER)
            nt = count_solutions(system, box, NT)
            total = count_solutions(system, box, ALL)
            assert proper <= nt <= total <= n ** (system.cols - system.rank)

    def test_positive_fraction_of_the_trivial_bound(self, schur_system, sidon_system, roth_system):
        # systems with a positive proper solution keep |S0|/n^(m-rank)
        # bounded away from zero
        for system in (schur_system, sidon_system, roth_system):
            ratios = []
            for n in (50, 100, 200):
                count = count_solutions(system, interval(n), PROPER)
                ratios.append(count / n ** (system.cols - system.rank))
            assert min(ratios) > 0.05
            assert ratios[-1] >= ratios[0] / 2

    def test_empty_ground_set(self, schur_system):
        assert count_solutions(schur_system, (), ALL) == 0
        assert list(enumerate_solutions(schur_system, (), ALL)) == []


class TestDegrees:
    def test_schur_point_degree(self, schur_system):
        profile = max_ell_degree(schur_system, 5, 1)
        assert profile.max_degree == 6
        assert profile.attaining == (1,)  # element 3 attains it too

    def test_schur_triple_degree(self, schur_system):
        profile = max_ell_degree(schur_system, 5, 3)
        assert profile.max_degree == 2

    def test_no_solutions_below_minimal_support(self, schur_system):
        profile = max_ell_degree(schur_system, 2, 1)
        assert profile.max_degree == 0
        assert profile.attaining is None

    def test_degree_bound_on_gallery(
        self, schur_system, roth_system, dilated_system, pair_system, chain_system
    ):
        for system in (schur_system, roth_system, dilated_system, pair_system, chain_system):
            m, rank = system.cols, system.rank
            for n in (20, 60):
                for ell in range(1, m + 1):
                    profile = max_ell_degree(system, n, ell)
                    bound = 0
                    from itertools import combinations

                    for q in combinations(range(1, m + 1), ell):
                        r_q = rank_contribution(system, q)
                        bound = max(bound, n ** ((m - rank) - (ell - r_q)))
                    bound *= factorial(ell) * m**ell
                    assert profile.max_degree <= bound

    def test_ell_out_of_range(self, schur_system):
        with pytest.raises(ValueError):
            max_ell_degree(schur_system, 5, 4)


class TestSubsystemSolutionTransfer:
    def test_no_nontrivial_solutions_transfers(self):
        # if a subsystem has no non-trivial solutions in T, neither does
        # the full system
        rng = random.Random(151)
        checked = 0
        for _ in range(200):
            rows = random_system_rows(rng, max_rows=2, max_cols=4, min_cols=2)
            system = LinearSystem.from_rows(rows)
            m = system.cols
            q = tuple(sorted(rng.sample(range(1, m + 1), rng.randint(1, m))))
            if rank_contribution(system, q) <= 0:
                continue
            sub = subsystem(system, q)
            elements = tuple(sorted(rng.sample(range(1, 16), rng.randint(0, 8))))
            if not contains_solution(sub, elements, NT):
                assert not contains_solution(system, elements, NT)
                checked += 1
        assert checked > 30


class TestGroundSets:
    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            ground_set([1, 2, 2])

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            ground_set([0, 1])

    def test_sorts_input(self):
        assert ground_set([5, 3, 9]) == (3, 5, 9)

    def test_support(self):
        assert support((1, 1, 2)) == frozenset({1, 2})
        assert support((5, 5, 5)) == frozenset({5})


class TestBudgets:
    def test_enumeration_budget_raises(self, sidon_system):
        with pytest.raises(BudgetExhaustedError):
            list(enumerate_solutions(sidon_system, interval(30), ALL, max_steps=10))

    def test_contains_short_circuits_before_budget(self, schur_system):
        # (1, 1, 2) appears early, long before the budget runs out
        assert contains_solution(schur_system, interval(30), NT, max_steps=50)


class TestPatternsWithinGround:
    def test_schur_patterns_in_small_interval(self, schur_system):
        everywhere = realized_patterns(schur_system)
        within = patterns_realized_in(schur_system, interval(6))
        assert set(within) <= set(everywhere)
        # x = (t, 0, t) style witnesses need 0, which [n] forbids
        assert ColumnPartition.from_blocks([(1, 3), (2,)]) not in within
        assert ColumnPartition.from_blocks([(1, 2), (3,)]) in within

    def test_count_matches_pattern_split(self, schur_system, sidon_system):
        # non-trivial count = sum over realized patterns of exact-pattern counts
        for system in (schur_system, sidon_system):
            box = interval(8)
            per_pattern = 0
            for part in realized_patterns(system):
                per_pattern += count_solutions(contract(system, part), box, PROPER)
            assert per_pattern == count_solutions(system, box, NT)
