"""Bracketed scalar root finding and fixed-point iteration.

Both solvers are pure functions of their arguments; the callables passed in
must be side-effect free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import BracketError, DomainViolationError

_EPS = 2.220446049250313e-16

ScalarFunction = Callable[[float], float]


@dataclass(frozen=True)
class Bracket:
    """Closed interval ``[lo, hi]`` used to bracket a root."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise BracketError(f"bracket endpoints must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise BracketError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def checked(cls, f: ScalarFunction, lo: float, hi: float) -> "Bracket":
        """Build a bracket and verify that ``f`` changes sign on it."""
        b = cls(lo, hi)
        flo, fhi = f(lo), f(hi)
        if flo * fhi > 0:
            raise BracketError(
                f"no sign change on [{lo}, {hi}]: f(lo)={flo!r}, f(hi)={fhi!r}"
            )
        return b


@dataclass(frozen=True)
class RootResult:
    """Outcome of a scalar solve.

    Attributes:
        x: Final estimate.
        f_x: Residual at ``x``. For fixed-point iteration this is the last
            step ``g(x_prev) - x_prev``.
        iterations: Iterations performed.
        converged: Whether a stopping criterion was met.
        monotone: Fixed-point iteration only: whether every nonzero step had
            the same sign. ``None`` for Brent.
        iterates: Fixed-point iteration only: the visited points, ``x0`` first.
    """

    x: float
    f_x: float
    iterations: int
    converged: bool
    monotone: bool | None = None
    iterates: tuple[float, ...] = field(default=(), repr=False)


def brent(
    f: ScalarFunction,
    bracket: Bracket | Sequence[float],
    tol: float = 1e-12,
    max_iter: int = 100,
) -> RootResult:
    """Find a root of ``f`` inside ``bracket`` by Brent's method.

    Inverse quadratic interpolation and secant steps are used when they make
    sufficient progress, with bisection as the fallback, so every iterate
    stays inside the current bracket. The solve stops once ``|f(x)| <= tol``
    or the bracket half-width drops below ``tol`` (plus a few ulps of ``x``).

    Args:
        f: Continuous scalar function.
        bracket: ``Bracket`` or ``(lo, hi)`` pair with ``f(lo) * f(hi) <= 0``.
        tol: Absolute tolerance on ``x`` and on ``|f(x)|``.
        max_iter: Iteration cap; hitting it yields ``converged=False``.

    Raises:
        BracketError: If ``f`` has the same strict sign at both ends.
    """
    if not isinstance(bracket, Bracket):
        bracket = Bracket(*bracket)
    if tol <= 0:
        raise ValueError("tol must be positive")

    a, b = bracket.lo, bracket.hi
    fa, fb = f(a), f(b)
    if fa * fb > 0:
        raise BracketError(f"no sign change on [{a}, {b}]: f(lo)={fa!r}, f(hi)={fb!r}")
    if fa == 0:
        return RootResult(a, fa, 0, True)
    if fb == 0:
        return RootResult(b, fb, 0, True)

    # b is the best estimate, c the contrapoint, a the previous b.
    c, fc = a, fa
    d = e = b - a
    for it in range(1, max_iter + 1):
        if fb * fc > 0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, fa = b, fb
            b, fb = c, fc
            c, fc = a, fa

        tol1 = 2.0 * _EPS * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or abs(fb) <= tol:
            return RootResult(b, fb, it, True)

        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = e = xm
        else:
            d = e = xm

        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += math.copysign(tol1, xm)
        fb = f(b)

    return RootResult(b, fb, max_iter, False)


def fixed_point_iterate(
    g: ScalarFunction,
    x0: float,
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> RootResult:
    """Iterate ``x <- g(x)`` from ``x0`` until successive iterates differ by ``tol``.

    ``g`` is expected to map ``[lo, hi]`` into itself; an iterate outside
    that interval raises ``DomainViolationError``. The returned ``x`` is the
    last image computed, ``f_x`` the last step.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not lo <= x0 <= hi:
        raise DomainViolationError(f"starting point {x0} outside [{lo}, {hi}]")

    x = x0
    trace = [x0]
    direction = 0
    monotone = True
    step = math.inf
    for it in range(1, max_iter + 1):
        y = g(x)
        if not lo <= y <= hi:
            raise DomainViolationError(
                f"iterate {it} left [{lo}, {hi}]: g({x!r}) = {y!r}"
            )
        trace.append(y)
        step = y - x
        if step != 0:
            sign = 1 if step > 0 else -1
            if direction == 0:
                direction = sign
            elif sign != direction:
                monotone = False
        x = y
        if abs(step) <= tol:
            return RootResult(x, step, it, True, monotone, tuple(trace))
    return RootResult(x, step, max_iter, False, monotone, tuple(trace))
