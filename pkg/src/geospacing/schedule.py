"""Sample-size schedules and their check against the critical extension factor."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .bounds import BoundParams, solve_rho_star
from .errors import ParameterDomainError, ScheduleSizeError

MAX_SIZE = 2**63 - 1


@dataclass(frozen=True)
class Schedule:
    """Strictly increasing positive sample sizes ``n_1 < n_2 < ...``."""

    sizes: tuple[int, ...]

    def __init__(self, sizes: Iterable[int]):
        sizes = tuple(int(n) for n in sizes)
        if not sizes:
            raise ParameterDomainError("schedule must contain at least one size")
        if sizes[0] < 1:
            raise ParameterDomainError(f"sample sizes must be >= 1, got {sizes[0]}")
        for k, (a, b) in enumerate(zip(sizes, sizes[1:]), start=1):
            if b <= a:
                raise ParameterDomainError(
                    f"sizes must be strictly increasing: n_{k}={a}, n_{k + 1}={b}"
                )
        object.__setattr__(self, "sizes", sizes)

    def __len__(self) -> int:
        return len(self.sizes)

    def __iter__(self):
        return iter(self.sizes)

    @property
    def ratios(self) -> list[float]:
        """Step ratios ``n_{k+1} / n_k`` (exact rational division, correctly rounded)."""
        return [b / a for a, b in zip(self.sizes, self.sizes[1:])]


@dataclass(frozen=True)
class ScheduleReport:
    """Result of ``validate_schedule``.

    ``violations`` holds ``(k, ratio)`` pairs with 1-based ``k``, meaning the
    step from ``n_k`` to ``n_{k+1}``.
    """

    ratios: list[float]
    floor: float
    violations: list[tuple[int, float]]
    admissible: bool


def _guard(n: int) -> None:
    if n > MAX_SIZE:
        raise ScheduleSizeError(f"sample size {n} exceeds {MAX_SIZE}")


def geometric_schedule(n1: int, rho: float, count: int) -> Schedule:
    """Grow sizes geometrically: ``n_{k+1} = max(n_k + 1, ceil(rho * n_k))``.

    >>> geometric_schedule(1, 2.0, 5).sizes
    (1, 2, 4, 8, 16)
    """
    if n1 < 1 or count < 1:
        raise ParameterDomainError("n1 and count must be >= 1")
    if not (math.isfinite(rho) and rho > 1):
        raise ParameterDomainError(f"rho must exceed 1, got {rho}")
    if math.log(n1) + (count - 1) * math.log(rho) > math.log(MAX_SIZE):
        raise ScheduleSizeError(
            f"{count} steps of ratio {rho} from {n1} overflow 64-bit sample sizes"
        )
    sizes = [int(n1)]
    for _ in range(count - 1):
        n = sizes[-1]
        nxt = max(n + 1, math.ceil(rho * n))
        _guard(nxt)
        sizes.append(nxt)
    return Schedule(sizes)


def arithmetic_schedule(n1: int, step: int, count: int) -> Schedule:
    """``n_k = n1 + (k - 1) * step`` for ``k = 1..count``."""
    if n1 < 1 or step < 1 or count < 1:
        raise ParameterDomainError("n1, step and count must be >= 1")
    _guard(n1 + (count - 1) * step)
    return Schedule(n1 + k * step for k in range(count))


def validate_schedule(
    s: Schedule, p: BoundParams, tol: float = 1e-9, rho_star: float | None = None
) -> ScheduleReport:
    """Check each step ratio of ``s`` against the critical factor ``rho_*(p)``.

    A step is admissible when ``ratio >= rho_* - tol``. ``rho_star`` may be
    passed in to skip the solve.
    """
    if rho_star is None:
        rho_star = solve_rho_star(p).rho_star
    ratios = s.ratios
    violations = [
        (k, r) for k, r in enumerate(ratios, start=1) if r < rho_star - tol
    ]
    return ScheduleReport(ratios, rho_star, violations, not violations)
