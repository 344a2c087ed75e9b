"""Exception types shared across the package."""


class RadoError(Exception):
    """Base class for package-specific errors."""


class ScaleCapError(RadoError):
    """A configured size cap would be exceeded (state space too large)."""


class BudgetExhaustedError(RadoError):
    """A search or enumeration ran out of its step budget before deciding.

    Callers must treat the result as indeterminate, never as a guess.
    """


class IllDefinedDensityError(RadoError):
    """A density ratio has a non-positive denominator for some column set."""

    def __init__(self, kind: str, columns: tuple[int, ...]):
        self.kind = kind
        self.columns = columns
        super().__init__(
            f"{kind} is ill-defined: column set {set(columns)} "
            "gives a non-positive denominator"
        )
