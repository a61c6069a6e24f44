"""Critical extension factor for rate-optimal extensible equal-weight rules.

A class with worst-case (or RMS) lower bound ``m n^-alpha`` and a sequence
attaining ``M n^-alpha`` along sample sizes ``n_1 < n_2 < ...`` forces every
step ratio ``rho = n_{k+1}/n_k`` to satisfy ``rho >= g(rho)`` with

    g(rho) = 1 + [(m/M) / (1 + rho^(1-alpha))]^(1/(alpha-1)).

``g`` is an increasing contraction of ``[1, 2]`` into itself, so the
admissible ratios are exactly ``rho >= rho_*`` where ``rho_*`` is its unique
fixed point.

Internally everything is evaluated in the excess ``e = rho - 1``. For small
``alpha`` and small ``m/M`` the excess can be far below double-precision
resolution at 1 (``(0.005)^10`` is about ``1e-23``), so the excess and the
deficit ``2 - rho`` are carried separately with full relative accuracy.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import ParameterDomainError, SolverError
from .rootfind import brent, fixed_point_iterate

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200
# Above this alpha, rho_* is within a few ulps of 2 and is reported as 2 - deficit.
ALPHA_CAP = 64.0


@dataclass(frozen=True)
class BoundParams:
    """Rate exponent ``alpha`` with lower/upper error constants ``m <= big_m``."""

    alpha: float
    m: float
    big_m: float

    def __post_init__(self):
        for name in ("alpha", "m", "big_m"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterDomainError(f"{name} must be finite")
        if not self.alpha > 1:
            raise ParameterDomainError(f"alpha must exceed 1, got {self.alpha}")
        if not self.m > 0:
            raise ParameterDomainError(f"m must be positive, got {self.m}")
        if not self.big_m >= self.m:
            raise ParameterDomainError(f"M must be at least m, got m={self.m}, M={self.big_m}")

    @property
    def ratio(self) -> float:
        """``m / M``, the fraction of the optimal constant attained."""
        return self.m / self.big_m

    @classmethod
    def from_ratio(cls, alpha: float, ratio: float) -> "BoundParams":
        return cls(alpha, ratio, 1.0)


@dataclass(frozen=True)
class LogRateParams:
    """Parameters for the rate ``n^-alpha log(n)^beta``.

    ``beta`` is kept for completeness; the step-ratio floor depends only on
    the surrogate exponent ``gamma`` with ``1 < gamma < alpha``.
    """

    base: BoundParams
    beta: float
    gamma: float

    def __post_init__(self):
        if not self.beta >= 0:
            raise ParameterDomainError(f"beta must be nonnegative, got {self.beta}")
        if not 1 < self.gamma < self.base.alpha:
            raise ParameterDomainError(
                f"gamma must lie in (1, alpha={self.base.alpha}), got {self.gamma}"
            )


class SolveMethod(str, enum.Enum):
    FIXED_POINT = "fixed_point"
    BRENT = "brent"
    AGREEMENT_OF_BOTH = "agreement_of_both"


@dataclass(frozen=True)
class ExtensionSolution:
    """Solved critical extension factor.

    Attributes:
        rho_star: The fixed point of ``g`` as a double. For extreme
            parameters it can round to 1.0 or 2.0; ``excess`` and ``deficit``
            keep the distances to those ends exactly.
        residual: ``|g(rho_star) - rho_star|``, evaluated in excess coordinates.
        iterations: Iterations used by the reported method.
        method: Which solver(s) produced the value.
        excess: ``rho_star - 1`` to full relative precision.
        deficit: ``2 - rho_star`` to full relative precision.
        capped: True when ``alpha > ALPHA_CAP``; ``rho_star`` is then ``2 - deficit``.
        trace: Fixed-point iterates in excess coordinates starting from 0
            (empty for Brent-only solves).
    """

    rho_star: float
    residual: float
    iterations: int
    method: SolveMethod
    excess: float
    deficit: float
    capped: bool = False
    trace: tuple[float, ...] = field(default=(), repr=False)


def _log_scaled(excess: float, p: BoundParams) -> float:
    """``log(g(1 + excess) - 1)``."""
    a1 = p.alpha - 1.0
    power = math.exp(-a1 * math.log1p(excess))  # (1+e)^(1-alpha)
    return (math.log(p.ratio) - math.log1p(power)) / a1


def excess_map(excess: float, p: BoundParams) -> float:
    """``g(1 + excess) - 1``, accurate even when the result is tiny."""
    return math.exp(_log_scaled(excess, p))


def _check_rho(rho: float, lo: float = 1.0) -> None:
    if not (math.isfinite(rho) and rho >= lo):
        raise ParameterDomainError(f"rho must be a finite value >= {lo}, got {rho}")


def fixed_point_map(rho: float, p: BoundParams) -> float:
    """Evaluate ``g(rho) = 1 + [(m/M)(1 + rho^(1-alpha))^-1]^(1/(alpha-1))``."""
    _check_rho(rho)
    return 1.0 + excess_map(rho - 1.0, p)


def map_derivative(rho: float, p: BoundParams) -> float:
    """Analytic derivative ``g'(rho)``; positive for every ``rho >= 1``."""
    _check_rho(rho)
    a1 = p.alpha - 1.0
    return (
        p.ratio ** (1.0 / a1)
        * (1.0 + rho ** (-a1)) ** (-1.0 / a1 - 1.0)
        * rho ** (-p.alpha)
    )


def floor_excess(p: BoundParams) -> float:
    """``g(1) - 1 = (m / 2M)^(1/(alpha-1))``."""
    return math.exp(math.log(p.ratio / 2.0) / (p.alpha - 1.0))


def closed_form_floor(p: BoundParams) -> float:
    """Analytic lower bound ``g(1) = 1 + (m/2M)^(1/(alpha-1))`` on ``rho_*``."""
    return 1.0 + floor_excess(p)


def lipschitz_bound(p: BoundParams) -> float:
    """Upper bound ``(m/M)^(1/(alpha-1)) 2^(-1/(alpha-1)-1)`` on ``g'`` over ``[1, 2]``."""
    a1 = p.alpha - 1.0
    return p.ratio ** (1.0 / a1) * 2.0 ** (-1.0 / a1 - 1.0)


def solve_rho_star(
    p: BoundParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    method: SolveMethod | str = SolveMethod.AGREEMENT_OF_BOTH,
) -> ExtensionSolution:
    """Solve ``g(rho) = rho`` on ``(1, 2)``.

    By default the fixed point is found twice, by iteration from ``rho = 1``
    and by Brent's method on ``g(rho) - rho`` over ``[1, 2]``; the two must
    agree within ``10 * tol`` and the (monotone, sharper) iteration result is
    reported.

    Raises:
        SolverError: On non-convergence or disagreement between solvers.
        ParameterDomainError: If ``rho_* - 1`` underflows double precision.
    """
    method = SolveMethod(method)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if floor_excess(p) == 0.0:
        raise ParameterDomainError(
            f"rho_* - 1 underflows double precision for alpha={p.alpha}, m/M={p.ratio}"
        )

    def h(e: float) -> float:
        return excess_map(e, p)

    fp = bt = None
    if method in (SolveMethod.FIXED_POINT, SolveMethod.AGREEMENT_OF_BOTH):
        fp = fixed_point_iterate(h, 0.0, 0.0, 1.0, tol=tol, max_iter=max_iter)
        if not fp.converged:
            raise SolverError("fixed-point iteration did not converge", 1.0 + fp.x, fp.iterations)
    if method in (SolveMethod.BRENT, SolveMethod.AGREEMENT_OF_BOTH):
        bt = brent(lambda e: h(e) - e, (0.0, 1.0), tol=tol, max_iter=max(max_iter, 100))
        if not bt.converged:
            raise SolverError("Brent's method did not converge", 1.0 + bt.x, bt.iterations)
    if fp is not None and bt is not None and abs(fp.x - bt.x) > 10 * tol:
        raise SolverError(
            f"fixed-point ({1 + fp.x!r}) and Brent ({1 + bt.x!r}) disagree beyond {10 * tol}",
            1.0 + fp.x,
            fp.iterations,
        )

    chosen = fp if fp is not None else bt
    excess = chosen.x
    log_scaled = _log_scaled(excess, p)
    deficit = -math.expm1(log_scaled)
    capped = p.alpha > ALPHA_CAP
    rho = 2.0 - deficit if capped else 1.0 + excess
    return ExtensionSolution(
        rho_star=rho,
        residual=abs(math.exp(log_scaled) - excess),
        iterations=chosen.iterations,
        method=method,
        excess=excess,
        deficit=deficit,
        capped=capped,
        trace=fp.iterates if fp is not None else (),
    )


def floor_gap(solution: ExtensionSolution, p: BoundParams) -> float:
    """``rho_* - g(1)`` computed without cancellation.

    Since ``rho_* = g(rho_*)``, the gap is ``g(rho_*) - g(1)``, which equals
    ``(g(1) - 1) * expm1(-log1p(t/2)/(alpha-1))`` with ``t = rho_*^(1-alpha) - 1``.
    Positive whenever the solved excess is positive.
    """
    a1 = p.alpha - 1.0
    t = math.expm1(-a1 * math.log1p(solution.excess))
    return floor_excess(p) * math.expm1(-math.log1p(0.5 * t) / a1)


def is_admissible_extension(rho: float, p: BoundParams, tol: float = DEFAULT_TOL) -> bool:
    """Whether a step ratio ``rho`` satisfies ``rho >= g(rho)`` (up to ``tol``)."""
    _check_rho(rho)
    if rho <= 1.0:
        raise ParameterDomainError(f"rho must exceed 1, got {rho}")
    e = rho - 1.0
    return e >= excess_map(e, p) - tol


def min_inefficiency_excess(excess: float, alpha: float, form: str = "rearranged") -> float:
    """``min_inefficiency`` parametrised by ``rho - 1`` instead of ``rho``."""
    if not alpha > 1:
        raise ParameterDomainError(f"alpha must exceed 1, got {alpha}")
    if not 0 < excess < 1:
        raise ParameterDomainError(f"rho must lie in (1, 2), got 1 + {excess}")
    a1 = alpha - 1.0
    power = math.exp(-a1 * math.log1p(excess))
    if form == "rearranged":
        return math.exp(-math.log1p(power) - a1 * math.log(excess))
    if form == "printed":
        return math.exp(-math.log1p(power) / a1) / excess
    raise ValueError(f"unknown form {form!r}; expected 'rearranged' or 'printed'")


def min_inefficiency(rho: float, alpha: float, form: str = "rearranged") -> float:
    """Smallest ``M/m`` compatible with a rate-optimal step of ratio ``rho``.

    ``form="rearranged"`` solves ``rho = g(rho)`` for ``M/m`` exactly,
    ``(1 + rho^(1-alpha))^-1 (rho - 1)^(1-alpha)``, so it inverts
    ``solve_rho_star``. ``form="printed"`` gives
    ``(1 + rho^(1-alpha))^(-1/(alpha-1)) / (rho - 1)``, which is the
    ``1/(alpha-1)`` power of the former; the two agree only at ``alpha = 2``.
    """
    if not (math.isfinite(rho) and 1 < rho < 2):
        raise ParameterDomainError(f"rho must lie in (1, 2), got {rho}")
    return min_inefficiency_excess(rho - 1.0, alpha, form)


def log_rate_floor(lp: LogRateParams) -> float:
    """Asymptotic step-ratio floor ``1 + (m/2M)^(1/(gamma-1))`` for log-modified rates."""
    return 1.0 + math.exp(math.log(lp.base.ratio / 2.0) / (lp.gamma - 1.0))
