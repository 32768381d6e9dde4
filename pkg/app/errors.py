from typing import Optional, Tuple


class BetaProcessError(Exception):
    """Root of every error raised by the toolkit."""


class DomainError(BetaProcessError, ValueError):
    """An argument lies outside the domain of the function it was passed to."""


class ParameterError(BetaProcessError, ValueError):
    """Model or sampler parameters are inconsistent (e.g. n <= gamma)."""


class NumericError(BetaProcessError, ArithmeticError):
    """
    An iterative routine stopped before meeting its tolerance.

    Carries the last bracket so callers can see how far the search got.
    """

    def __init__(self, message: str, bracket: Optional[Tuple[float, float]] = None, iterations: int = 0):
        super().__init__(message)
        self.bracket = bracket
        self.iterations = iterations

    def __str__(self) -> str:
        base = super().__str__()
        if self.bracket is None:
            return base
        return f"{base} (last bracket [{self.bracket[0]!r}, {self.bracket[1]!r}] after {self.iterations} iterations)"
