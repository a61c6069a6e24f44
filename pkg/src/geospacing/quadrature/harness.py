"""Signed errors of equal-weight rules and the identities they satisfy.

All sums are compensated (``math.fsum``) so the algebraic identities hold to
a few ulps of the terms being differenced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import InsufficientDataError, ParameterDomainError
from .integrands import Integrand
from .sequences import PointSequence, replicate_seeds

SequenceFactory = Callable[[int], PointSequence]


def _strictly_increasing(ns: Sequence[int], lowest: int = 1) -> list[int]:
    ns = [int(n) for n in ns]
    if not ns or ns[0] < lowest or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ParameterDomainError(f"sample sizes must be strictly increasing and >= {lowest}")
    return ns


@dataclass(frozen=True)
class ErrorProfile:
    """Signed errors ``eta_n`` at increasing sample sizes."""

    sample_sizes: tuple[int, ...]
    eta: tuple[float, ...]

    def __post_init__(self):
        _strictly_increasing(self.sample_sizes)
        if len(self.eta) != len(self.sample_sizes):
            raise ParameterDomainError("sample_sizes and eta differ in length")

    @property
    def magnitudes(self) -> tuple[float, ...]:
        return tuple(abs(e) for e in self.eta)


@dataclass(frozen=True)
class RmsCurve:
    """Root-mean-square errors over replicates at increasing sample sizes."""

    sample_sizes: tuple[int, ...]
    rms: tuple[float, ...]
    replicates: int

    @property
    def magnitudes(self) -> tuple[float, ...]:
        return self.rms


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit of ``log|error| = intercept + slope * log n``.

    ``slope`` estimates ``-alpha``; ``dropped`` counts zero errors left out.
    """

    slope: float
    intercept: float
    r_squared: float
    dropped: int = 0


def _check_compatible(seq: PointSequence, f: Integrand) -> None:
    if seq.dimension != f.dimension:
        raise ParameterDomainError(
            f"sequence dimension {seq.dimension} does not match integrand {f.label!r} "
            f"dimension {f.dimension}"
        )


def deviations(seq: PointSequence, f: Integrand, start: int, stop: int) -> np.ndarray:
    """``f(x_i) - mu`` for ``i = start+1 .. stop``."""
    _check_compatible(seq, f)
    return f(seq.points(start, stop)) - f.true_mean


def eta_profile(seq: PointSequence, f: Integrand, ns: Sequence[int]) -> ErrorProfile:
    """``eta_n = (1/n) sum_{i<=n} f(x_i) - mu`` for each ``n`` in ``ns``, in one pass."""
    ns = _strictly_increasing(ns)
    total, prev, eta = 0.0, 0, []
    for n in ns:
        block = deviations(seq, f, prev, n).tolist()
        block.append(total)
        total = math.fsum(block)
        eta.append(total / n)
        prev = n
    return ErrorProfile(tuple(ns), tuple(eta))


def sobol_identity_terms(seq: PointSequence, f: Integrand, n: int) -> tuple[float, float, float]:
    """Both sides of ``|f(x_{n+1}) - mu| = |(n+1) eta_{n+1} - n eta_n|`` plus a scale.

    The scale is ``(n+1) max_{i<=n+1} |f(x_i)|``, the magnitude of the
    quantities differenced on the right.
    """
    if n < 1:
        raise ParameterDomainError(f"n must be >= 1, got {n}")
    prof = eta_profile(seq, f, [n, n + 1])
    lhs = abs(float(deviations(seq, f, n, n + 1)[0]))
    rhs = abs((n + 1) * prof.eta[1] - n * prof.eta[0])
    scale = (n + 1) * float(np.max(np.abs(f(seq.first(n + 1)))))
    return lhs, rhs, scale


def sobol_identity_residual(seq: PointSequence, f: Integrand, n: int) -> float:
    """``| |f(x_{n+1}) - mu| - |(n+1) eta_{n+1} - n eta_n| |``; zero up to rounding."""
    lhs, rhs, _ = sobol_identity_terms(seq, f, n)
    return abs(lhs - rhs)


def block_error(seq: PointSequence, f: Integrand, n_lo: int, n_hi: int) -> float:
    """Mean of ``f(x_i) - mu`` over the block ``n_lo < i <= n_hi``, from the block points alone."""
    if not 0 <= n_lo < n_hi:
        raise ParameterDomainError(f"need 0 <= n_lo < n_hi, got ({n_lo}, {n_hi})")
    return math.fsum(deviations(seq, f, n_lo, n_hi).tolist()) / (n_hi - n_lo)


def block_identity_terms(
    seq: PointSequence, f: Integrand, n_lo: int, n_hi: int
) -> tuple[float, float, float]:
    """Direct block error, its expression via prefix errors, and a scale ``n_hi max|f| / delta``."""
    direct = block_error(seq, f, n_lo, n_hi)
    delta = n_hi - n_lo
    if n_lo == 0:
        eta_hi = eta_profile(seq, f, [n_hi]).eta[0]
        via_prefix = n_hi * eta_hi / delta
    else:
        eta_lo, eta_hi = eta_profile(seq, f, [n_lo, n_hi]).eta
        via_prefix = (n_hi * eta_hi - n_lo * eta_lo) / delta
    scale = n_hi * float(np.max(np.abs(f(seq.first(n_hi))))) / delta
    return direct, via_prefix, scale


def block_identity_residual(seq: PointSequence, f: Integrand, n_lo: int, n_hi: int) -> float:
    """``|block_error - (n_hi eta_{n_hi} - n_lo eta_{n_lo}) / delta|``; zero up to rounding."""
    direct, via_prefix, _ = block_identity_terms(seq, f, n_lo, n_hi)
    return abs(direct - via_prefix)


def _randomized_sequences(factory: SequenceFactory, replicates: int, master_seed: int):
    if replicates < 2:
        raise ParameterDomainError(f"replicates must be >= 2, got {replicates}")
    for seed in replicate_seeds(master_seed, replicates):
        seq = factory(seed)
        if not seq.randomized:
            raise ParameterDomainError(
                "RMS error needs a randomized sequence; the factory returned a deterministic one"
            )
        yield seq


def rms_profile(
    factory: SequenceFactory,
    f: Integrand,
    ns: Sequence[int],
    replicates: int,
    master_seed: int = 42,
) -> RmsCurve:
    """RMS of ``eta_n`` over independent randomizations, for each ``n`` in ``ns``.

    Replicate ``r`` uses the ``r``-th seed split from ``master_seed``; the
    reduction runs in replicate order so results do not depend on scheduling.
    """
    ns = _strictly_increasing(ns)
    squares = [[] for _ in ns]
    for seq in _randomized_sequences(factory, replicates, master_seed):
        for j, e in enumerate(eta_profile(seq, f, ns).eta):
            squares[j].append(e * e)
    rms = tuple(math.sqrt(math.fsum(col) / replicates) for col in squares)
    return RmsCurve(tuple(ns), rms, replicates)


def rms_error(
    factory: SequenceFactory, f: Integrand, n: int, replicates: int, master_seed: int = 42
) -> float:
    """``sqrt(mean_r eta_n(r)^2)`` over ``replicates`` seeded randomizations."""
    return rms_profile(factory, f, [n], replicates, master_seed).rms[0]


def fit_rate(profile, errors: Sequence[float] | None = None) -> RateFit:
    """Ordinary least squares of ``log|error|`` on ``log n``.

    Accepts an ``ErrorProfile``, an ``RmsCurve``, or ``(sample_sizes, errors)``.
    Zero errors are dropped and counted rather than floored.

    Raises:
        InsufficientDataError: If fewer than three nonzero errors remain.
    """
    if errors is None:
        sizes, mags = profile.sample_sizes, profile.magnitudes
    else:
        sizes, mags = profile, [abs(e) for e in errors]
    if len(sizes) != len(mags):
        raise ParameterDomainError("sample sizes and errors differ in length")
    pairs = [(n, e) for n, e in zip(sizes, mags) if e != 0]
    dropped = len(sizes) - len(pairs)
    if len(pairs) < 3:
        raise InsufficientDataError(
            f"need at least 3 nonzero errors to fit a rate, have {len(pairs)} ({dropped} zeros dropped)"
        )
    x = np.log([n for n, _ in pairs])
    y = np.log([e for _, e in pairs])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (intercept + slope * x)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return RateFit(float(slope), float(intercept), min(max(r2, 0.0), 1.0), dropped)


def weighted_block_estimate(
    seq: PointSequence, f: Integrand, block_sizes: Sequence[int], a: float
) -> float:
    """Combine consecutive block means with weights proportional to ``n_j ** a``.

    The first ``sum(block_sizes)`` points are split into consecutive blocks;
    the result estimates the integral (not its error).
    """
    if not block_sizes:
        raise ParameterDomainError("block_sizes must not be empty")
    if any(int(n) < 1 for n in block_sizes):
        raise ParameterDomainError("every block needs at least one point")
    if not a >= 1:
        raise ParameterDomainError(f"weight exponent a must be >= 1, got {a}")
    _check_compatible(seq, f)
    values = f(seq.first(sum(int(n) for n in block_sizes)))
    means, start = [], 0
    for n in block_sizes:
        means.append(math.fsum(values[start:start + n].tolist()) / n)
        start += n
    raw = np.asarray(block_sizes, dtype=np.float64) ** a
    weights = raw / math.fsum(raw.tolist())
    return math.fsum((weights * np.asarray(means)).tolist())
