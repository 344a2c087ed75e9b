import random
from fractions import Fraction

import pytest

from rado.matrix import (
    IntMatrix,
    kernel_basis,
    matrix_rank,
    row_dependencies,
    rowspace_contains,
)

from helpers import frac_rank, random_system_rows


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols=cols)


class TestRank:
    def test_single_nonzero_row(self):
        assert matrix_rank(M([[1, 1, -1]])) == 1

    def test_empty_matrix(self):
        assert matrix_rank(M([], cols=0)) == 0
        assert matrix_rank(M([], cols=3)) == 0
        assert matrix_rank(M([[], []], cols=0)) == 0

    def test_ap4_rank(self):
        assert matrix_rank(M([[1, -2, 1, 0], [0, 1, -2, 1]])) == 2

    def test_matches_fraction_elimination_oracle(self):
        rng = random.Random(101)
        for _ in range(150):
            rows = random_system_rows(rng, max_rows=4, max_cols=5, lo=-9, hi=9)
            assert matrix_rank(M(rows)) == frac_rank(rows)

    def test_invariant_under_row_operations(self):
        rng = random.Random(202)
        for _ in range(80):
            rows = random_system_rows(rng, max_rows=3, max_cols=4)
            base = matrix_rank(M(rows))
            mutated = [list(r) for r in rows]
            op = rng.randrange(3)
            if op == 0 and len(mutated) >= 2:
                i, j = rng.sample(range(len(mutated)), 2)
                mutated[i], mutated[j] = mutated[j], mutated[i]
            elif op == 1:
                i = rng.randrange(len(mutated))
                c = rng.choice([-3, -2, -1, 1, 2, 3])
                mutated[i] = [c * v for v in mutated[i]]
            elif op == 2 and len(mutated) >= 2:
                i, j = rng.sample(range(len(mutated)), 2)
                c = rng.randint(-3, 3)
                mutated[i] = [a + c * b for a, b in zip(mutated[i], mutated[j])]
            assert matrix_rank(M(mutated)) == base


class TestKernel:
    def test_schur_kernel_dimension(self):
        basis = kernel_basis(M([[1, 1, -1]]))
        assert len(basis) == 2
        for vec in basis:
            assert sum(a * v for a, v in zip([1, 1, -1], vec)) == 0

    def test_identity_has_trivial_kernel(self):
        assert kernel_basis(M([[1, 0], [0, 1]])) == ()

    def test_zero_matrix_gives_standard_basis(self):
        assert kernel_basis(M([[0, 0, 0]])) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def test_rank_nullity(self):
        rng = random.Random(303)
        for _ in range(120):
            rows = random_system_rows(rng, max_rows=3, max_cols=5)
            mat = M(rows)
            assert matrix_rank(mat) + len(kernel_basis(mat)) == mat.cols

    def test_kernel_vectors_are_canonical_and_exact(self):
        rng = random.Random(404)
        for _ in range(120):
            rows = random_system_rows(rng, max_rows=3, max_cols=5)
            mat = M(rows)
            for vec in kernel_basis(mat):
                assert all(v == 0 for v in mat.apply(vec))
                from math import gcd
                assert gcd(*vec) == 1
                lead = next(v for v in vec if v != 0)
                assert lead > 0


class TestRowspace:
    def test_row_itself(self):
        assert rowspace_contains(M([[1, -1]]), (1, -1))

    def test_not_contained(self):
        assert not rowspace_contains(M([[1, 1, -1]]), (1, -1, 0))

    def test_zero_matrix_contains_zero(self):
        assert rowspace_contains(M([[0, 0]]), (0, 0))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            rowspace_contains(M([[1, 2]]), (1, 2, 3))

    def test_agrees_with_augmented_rank_oracle(self):
        rng = random.Random(505)
        hits = 0
        for _ in range(200):
            rows = random_system_rows(rng, max_rows=3, max_cols=4)
            vec = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in rows[0]]
            expected = frac_rank(rows + [vec]) == frac_rank(rows)
            assert rowspace_contains(M(rows), vec) == expected
            hits += expected
        assert 0 < hits < 200  # both outcomes exercised


class TestRowDependencies:
    def test_scaled_row(self):
        (dep,) = row_dependencies(M([[1, 0], [2, 0]]))
        assert dep.index == 1
        assert dep.scale == 1
        assert dep.coefficients == {0: 2}

    def test_full_rank_square(self):
        assert row_dependencies(M([[1, 0], [0, 1]])) == ()

    def test_negated_single_column(self):
        (dep,) = row_dependencies(M([[-1], [1]]))
        assert dep.index == 1
        assert dep.scale == 1
        assert dep.coefficients == {0: -1}

    def test_zero_columns_make_all_rows_dependent(self):
        deps = row_dependencies(M([[], [], []], cols=0))
        assert [d.index for d in deps] == [0, 1, 2]
        assert all(d.scale == 1 and d.coefficients == {} for d in deps)

    def test_substitution_reproduces_rows_exactly(self):
        rng = random.Random(606)
        for _ in range(150):
            rows = random_system_rows(rng, max_rows=4, max_cols=4)
            mat = M(rows)
            deps = row_dependencies(mat)
            assert len(deps) == mat.rows - matrix_rank(mat)
            for dep in deps:
                lhs = [dep.scale * v for v in rows[dep.index]]
                rhs = [0] * mat.cols
                for j, c in dep.coefficients.items():
                    assert j != dep.index
                    rhs = [a + c * b for a, b in zip(rhs, rows[j])]
                assert lhs == rhs


class TestValidation:
    def test_rejects_ragged_rows(self):
        with pytest.raises(ValueError):
            IntMatrix.from_rows([[1, 2], [1]])

    def test_rejects_non_integer_entries(self):
        with pytest.raises(ValueError):
            IntMatrix.from_rows([[1, 2.5]])
        with pytest.raises(ValueError):
            IntMatrix.from_rows([[True, False]])

    def test_addition(self):
        a = M([[1, 2], [3, 4]])
        b = M([[1, 0], [0, 1]])
        assert (a + b).entries == ((2, 2), (3, 5))
