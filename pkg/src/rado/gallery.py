"""Standard example systems used throughout the tests and docs."""

from __future__ import annotations

from .systems import LinearSystem


def schur() -> LinearSystem:
    """x + y = z."""
    return LinearSystem.from_rows([[1, 1, -1]], name="schur")


def sidon() -> LinearSystem:
    """a + b = c + d."""
    return LinearSystem.from_rows([[1, 1, -1, -1]], name="sidon")


def single_equation(coefficients, name: str | None = None) -> LinearSystem:
    """A one-row system from its coefficient list."""
    return LinearSystem.from_rows([list(coefficients)], name=name)


def arithmetic_progression(k: int) -> LinearSystem:
    """The (k-2) x k banded system whose solutions are k-term progressions.

    Row i reads x_i - 2 x_{i+1} + x_{i+2} = 0, forcing constant differences.
    """
    if k < 3:
        raise ValueError("progressions need at least 3 terms")
    rows = []
    for i in range(k - 2):
        row = [0] * k
        row[i], row[i + 1], row[i + 2] = 1, -2, 1
        rows.append(row)
    return LinearSystem.from_rows(rows, name=f"ap{k}")
