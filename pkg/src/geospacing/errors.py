"""Exception types shared across the package."""


class ParameterDomainError(ValueError):
    """A parameter lies outside the domain where a quantity is defined."""


class BracketError(ValueError):
    """The root-finding bracket does not straddle a sign change."""


class DomainViolationError(RuntimeError):
    """A fixed-point iterate left the interval the map is supposed to preserve."""


class SolverError(RuntimeError):
    """An iterative solver failed to converge.

    Attributes:
        best: The best iterate found before giving up.
        iterations: Number of iterations performed.
    """

    def __init__(self, message: str, best: float, iterations: int):
        super().__init__(message)
        self.best = best
        self.iterations = iterations


class InsufficientDataError(ValueError):
    """Too few usable points to fit a convergence rate."""


class ScheduleSizeError(OverflowError):
    """A requested schedule would exceed the representable sample-size range."""
