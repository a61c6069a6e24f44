"""Registered identity cross-product and the seeded RMS experiment suite."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .quadrature import (
    SUITE,
    Halton,
    IIDUniform,
    Integrand,
    PointSequence,
    Shifted,
    VanDerCorput,
    block_identity_terms,
    fit_rate,
    replicate_seeds,
    rms_profile,
    scramble_base2,
    sobol_identity_terms,
    weighted_block_estimate,
)

IDENTITY_RTOL = 1e-10
SOBOL_NS = (
    1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 31, 32, 63, 64, 100, 127, 128,
    255, 256, 511, 512, 1000, 1023, 1024, 2047, 2048, 4095,
)
BLOCKS = (
    (0, 4), (2, 4), (4, 8), (10, 17), (16, 32), (100, 200), (128, 256),
    (512, 1024), (1000, 1618), (1024, 2048), (2048, 4096),
)
RMS_NS = tuple(2**k for k in range(4, 13))
WEIGHTED_LEVELS = tuple(range(5, 12))  # blocks 2^0..2^J, total 2^(J+1) - 1
OFF_SCHEDULE_K = 10


def identity_sequences(seed: int = 42) -> list[PointSequence]:
    """Sequences in the registered identity suite; randomized ones use ``seed``."""
    return [
        VanDerCorput(2),
        VanDerCorput(3),
        IIDUniform(seed),
        Shifted(VanDerCorput(2), seed=seed),
        scramble_base2(seed),
        Halton(2),
        IIDUniform(seed, dims=2),
        Shifted(Halton(2), seed=seed),
    ]


def registered_pairs(seed: int = 42) -> list[tuple[PointSequence, Integrand]]:
    """Every dimension-compatible (sequence, integrand) pair."""
    return [
        (seq, f)
        for seq in identity_sequences(seed)
        for f in SUITE.values()
        if seq.dimension == f.dimension
    ]


@dataclass(frozen=True)
class IdentityCase:
    generator: str
    integrand: str
    identity: str
    n_lo: int
    n_hi: int
    residual: float
    scale: float

    @property
    def relative(self) -> float:
        if self.scale == 0:
            return 0.0 if self.residual == 0 else math.inf
        return self.residual / self.scale

    @property
    def passed(self) -> bool:
        return self.residual <= IDENTITY_RTOL * self.scale


def identity_suite(seed: int = 42) -> list[IdentityCase]:
    """Both exact identities over the registered cross-product (n <= 4096)."""
    cases = []
    for seq, f in registered_pairs(seed):
        for n in SOBOL_NS:
            lhs, rhs, scale = sobol_identity_terms(seq, f, n)
            cases.append(IdentityCase(seq.label, f.label, "sobol", n, n + 1, abs(lhs - rhs), scale))
        for lo, hi in BLOCKS:
            direct, via, scale = block_identity_terms(seq, f, lo, hi)
            cases.append(IdentityCase(seq.label, f.label, "block", lo, hi, abs(direct - via), scale))
    return cases


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    detail: str


@dataclass
class ExperimentReport:
    """Rows are ``(generator, integrand, n, rms, slope_so_far)``; slope is None with < 3 points."""

    rows: list[tuple[str, str, int, float, float | None]] = field(default_factory=list)
    checks: list[PropertyCheck] = field(default_factory=list)
    identity_cases: list[IdentityCase] = field(default_factory=list)

    @property
    def identities_ok(self) -> bool:
        return all(c.passed for c in self.identity_cases)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _generators() -> dict[str, dict[int, Callable[[int], PointSequence]]]:
    """Randomized generator families, keyed by name then dimension."""
    return {
        "iid": {1: lambda s: IIDUniform(s), 2: lambda s: IIDUniform(s, dims=2)},
        "shifted_vdc": {
            1: lambda s: Shifted(VanDerCorput(2), seed=s),
            2: lambda s: Shifted(Halton(2), seed=s),
        },
        "scrambled_vdc": {1: scramble_base2},
    }


def _curve_rows(name, f, curve):
    rows = []
    for j, (n, r) in enumerate(zip(curve.sample_sizes, curve.rms)):
        slope = None
        if j >= 2:
            slope = fit_rate(curve.sample_sizes[: j + 1], curve.rms[: j + 1]).slope
        rows.append((name, f.label, n, r, slope))
    return rows


def weighted_block_rms(f: Integrand, levels, replicates: int, seed: int, a: float = 2.0):
    """RMS error of the ``n_j^a``-weighted block estimator on scrambled vdc, blocks ``2^0..2^J``."""
    seeds = replicate_seeds(seed, replicates)
    totals, rms = [], []
    for level in levels:
        blocks = [2**j for j in range(level + 1)]
        errs = [
            weighted_block_estimate(scramble_base2(s), f, blocks, a) - f.true_mean for s in seeds
        ]
        totals.append(sum(blocks))
        rms.append(math.sqrt(math.fsum(e * e for e in errs) / replicates))
    return tuple(totals), tuple(rms)


def off_schedule_ratio(f: Integrand, k: int, replicates: int, seed: int) -> float:
    """RMS at ``1.5 * 2^k`` divided by the log-log interpolation of RMS at ``2^k`` and ``2^(k+1)``."""
    n_mid = round(3 * 2**k / 2)
    curve = rms_profile(scramble_base2, f, [2**k, n_mid, 2 ** (k + 1)], replicates, seed)
    lo, mid, hi = curve.rms
    t = math.log(n_mid / 2**k) / math.log(2.0)
    interp = math.exp((1 - t) * math.log(lo) + t * math.log(hi))
    return mid / interp


def run_experiment(seed: int = 42, replicates: int = 200) -> ExperimentReport:
    """Identity checks, RMS curves with running slope fits, and the rate properties."""
    report = ExperimentReport()
    report.identity_cases = identity_suite(seed)
    worst = max(c.relative for c in report.identity_cases)
    report.checks.append(
        PropertyCheck(
            "exact_identities",
            report.identities_ok,
            f"{len(report.identity_cases)} cases, max relative residual {worst:.3g}",
        )
    )

    fits = {}
    for name, family in _generators().items():
        for f in SUITE.values():
            factory = family.get(f.dimension)
            if factory is None:
                continue
            curve = rms_profile(factory, f, RMS_NS, replicates, seed)
            report.rows.extend(_curve_rows(name, f, curve))
            fits[name, f.label] = fit_rate(curve).slope

    totals, rms = weighted_block_rms(SUITE["x2"], WEIGHTED_LEVELS, replicates, seed)
    wslope = fit_rate(totals, rms).slope
    for j, (n, r) in enumerate(zip(totals, rms)):
        slope = fit_rate(totals[: j + 1], rms[: j + 1]).slope if j >= 2 else None
        report.rows.append(("weighted_scrambled_vdc", "x2", n, r, slope))

    iid = fits["iid", "x"]
    report.checks.append(
        PropertyCheck("iid_rate_x", -0.6 <= iid <= -0.4, f"slope {iid:.4f} in [-0.6, -0.4]")
    )
    scr = fits["scrambled_vdc", "x2"]
    report.checks.append(
        PropertyCheck("scrambled_rate_x2", scr <= -1.3, f"slope {scr:.4f} <= -1.3")
    )
    report.checks.append(
        PropertyCheck("weighted_block_rate_x2", wslope <= -1.3, f"slope {wslope:.4f} <= -1.3")
    )
    ratio = off_schedule_ratio(SUITE["x2"], OFF_SCHEDULE_K, replicates, seed)
    report.checks.append(
        PropertyCheck(
            "off_schedule_degradation", ratio >= 1.5, f"RMS ratio {ratio:.4f} >= 1.5 at k=10"
        )
    )
    report.rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return report

