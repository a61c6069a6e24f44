"""Point sequences on the unit cube.

Point ``i`` (1-based) of every sequence is computable from ``(i, seed)``
alone, so blocks of points can be produced in any order.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..errors import ParameterDomainError

SCRAMBLE_DIGITS = 32
_MASK64 = (1 << 64) - 1


def van_der_corput(index: int, base: int = 2) -> float:
    """Radical inverse of ``index`` in ``base``.

    >>> van_der_corput(3, 2)
    0.75
    """
    if base < 2:
        raise ParameterDomainError(f"base must be >= 2, got {base}")
    if index < 1:
        raise ParameterDomainError(f"index must be >= 1, got {index}")
    x, scale = 0.0, 1.0 / base
    while index:
        index, digit = divmod(index, base)
        x += digit * scale
        scale /= base
    return x


def radical_inverse(indices: np.ndarray, base: int) -> np.ndarray:
    """Vectorised ``van_der_corput`` over an integer array."""
    if base < 2:
        raise ParameterDomainError(f"base must be >= 2, got {base}")
    idx = np.asarray(indices, dtype=np.int64).copy()
    out = np.zeros(idx.shape, dtype=np.float64)
    scale = 1.0 / base
    while np.any(idx):
        idx, digit = np.divmod(idx, base)
        out += digit * scale
        scale /= base
    return out


def _first_primes(k: int) -> list[int]:
    primes: list[int] = []
    candidate = 2
    while len(primes) < k:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def _mix64(x: np.ndarray) -> np.ndarray:
    """splitmix64 finaliser on uint64 arrays (wrapping arithmetic)."""
    x = np.asarray(x, dtype=np.uint64)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def _seed_word(seed: int) -> np.uint64:
    lo = _mix64(np.array([seed & _MASK64], dtype=np.uint64))
    hi = _mix64(np.array([(seed >> 64) & _MASK64], dtype=np.uint64) ^ lo)
    return hi[0]


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if seed < 0 or seed >= 1 << 128:
        raise ParameterDomainError(f"seed must lie in [0, 2**128), got {seed}")
    return seed


def _uniform_block(seed: int, start: int, count: int, dim: int) -> np.ndarray:
    """Uniforms for points ``start+1 .. start+count``; one Philox counter per 4 coordinates."""
    stride = -(-dim // 4)
    bitgen = np.random.Philox(key=seed)
    if start:
        bitgen.advance(start * stride)
    raw = np.random.Generator(bitgen).random(count * stride * 4)
    return raw.reshape(count, stride * 4)[:, :dim]


def replicate_seeds(master_seed: int, replicates: int) -> list[int]:
    """Independent 128-bit seeds, one per replicate, split from ``master_seed`` by counter."""
    master_seed = _check_seed(master_seed)
    seeds = []
    for r in range(replicates):
        words = np.random.SeedSequence(master_seed, spawn_key=(r,)).generate_state(2, np.uint64)
        seeds.append(int(words[0]) | (int(words[1]) << 64))
    return seeds


class PointSequence(ABC):
    """An extensible sequence ``x_1, x_2, ...`` in ``[0, 1)^dimension``."""

    dimension: int = 1
    randomized: bool = False

    @abstractmethod
    def _block(self, start: int, count: int) -> np.ndarray:
        """Points ``start+1 .. start+count`` as a ``(count, dimension)`` array."""

    def points(self, start: int, stop: int) -> np.ndarray:
        """Points with 1-based indices ``start+1 .. stop``."""
        if start < 0 or stop < start:
            raise ParameterDomainError(f"need 0 <= start <= stop, got ({start}, {stop})")
        if stop == start:
            return np.empty((0, self.dimension))
        return self._block(start, stop - start)

    def point(self, index: int) -> np.ndarray:
        return self.points(index - 1, index)[0]

    def first(self, n: int) -> np.ndarray:
        return self.points(0, n)


@dataclass(frozen=True)
class VanDerCorput(PointSequence):
    base: int = 2

    def __post_init__(self):
        if self.base < 2:
            raise ParameterDomainError(f"base must be >= 2, got {self.base}")

    @property
    def label(self) -> str:
        return f"vdc{self.base}"

    def _block(self, start, count):
        return radical_inverse(np.arange(start + 1, start + count + 1), self.base)[:, None]


@dataclass(frozen=True)
class Halton(PointSequence):
    dims: int = 2

    def __post_init__(self):
        if self.dims < 1:
            raise ParameterDomainError(f"dims must be >= 1, got {self.dims}")

    @property
    def dimension(self) -> int:
        return self.dims

    @property
    def label(self) -> str:
        return f"halton{self.dims}"

    def _block(self, start, count):
        idx = np.arange(start + 1, start + count + 1)
        return np.column_stack([radical_inverse(idx, b) for b in _first_primes(self.dims)])


@dataclass(frozen=True)
class IIDUniform(PointSequence):
    """Independent uniform points from a Philox stream keyed by ``seed``."""

    seed: int
    dims: int = 1
    randomized = True

    def __post_init__(self):
        object.__setattr__(self, "seed", _check_seed(self.seed))

    @property
    def dimension(self) -> int:
        return self.dims

    @property
    def label(self) -> str:
        return "iid"

    def _block(self, start, count):
        return _uniform_block(self.seed, start, count, self.dims)


class Shifted(PointSequence):
    """Cranley-Patterson rotation ``(x_i + shift) mod 1`` of a base sequence.

    Give either an explicit ``shift`` vector (deterministic) or a ``seed``
    from which one uniform shift is drawn.
    """

    def __init__(self, base: PointSequence, shift=None, seed: int | None = None):
        if (shift is None) == (seed is None):
            raise ParameterDomainError("give exactly one of shift or seed")
        self.base = base
        self.dimension = base.dimension
        self.seed = None if seed is None else _check_seed(seed)
        if shift is None:
            shift = _uniform_block(self.seed, 0, 1, base.dimension)[0]
        shift = np.atleast_1d(np.asarray(shift, dtype=np.float64))
        if shift.shape != (base.dimension,):
            raise ParameterDomainError(
                f"shift must have length {base.dimension}, got shape {shift.shape}"
            )
        self.shift = shift
        self.randomized = seed is not None or base.randomized

    @property
    def label(self) -> str:
        return f"shifted_{getattr(self.base, 'label', 'seq')}"

    def _block(self, start, count):
        return np.mod(self.base._block(start, count) + self.shift, 1.0)


@dataclass(frozen=True)
class ScrambledVanDerCorput(PointSequence):
    """Base-2 van der Corput with nested uniform (Owen) digit scrambling.

    The first ``SCRAMBLE_DIGITS`` binary digits are scrambled; each digit is
    flipped by a pseudo-random bit that depends on the seed and all of the
    digits above it, which keeps every dyadic stratification of the
    unscrambled sequence. The remaining 21 mantissa bits are random filler
    so each point is uniform on ``[0, 1)``.
    """

    seed: int
    randomized = True

    def __post_init__(self):
        object.__setattr__(self, "seed", _check_seed(self.seed))

    @property
    def label(self) -> str:
        return "scrambled_vdc2"

    def _block(self, start, count):
        if start + count >= 1 << SCRAMBLE_DIGITS:
            raise ParameterDomainError(f"index exceeds 2**{SCRAMBLE_DIGITS} - 1")
        idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        # Bit reversal: the first digit of the radical inverse is the lowest bit of i.
        digits = np.zeros_like(idx)
        for k in range(SCRAMBLE_DIGITS):
            digits |= ((idx >> np.uint64(k)) & np.uint64(1)) << np.uint64(SCRAMBLE_DIGITS - 1 - k)

        key = _seed_word(self.seed)
        flips = np.zeros_like(digits)
        for depth in range(SCRAMBLE_DIGITS):
            prefix = digits >> np.uint64(SCRAMBLE_DIGITS - depth)
            node = (np.uint64(1) << np.uint64(depth)) | prefix
            bit = _mix64(_mix64(node ^ key) + key) & np.uint64(1)
            flips |= bit << np.uint64(SCRAMBLE_DIGITS - 1 - depth)
        scrambled = digits ^ flips

        leaf = (np.uint64(1) << np.uint64(SCRAMBLE_DIGITS)) | digits
        filler = _mix64(_mix64(leaf ^ key) + key) >> np.uint64(64 - 21)
        mantissa = (scrambled << np.uint64(21)) | filler
        return (mantissa.astype(np.float64) * 2.0**-53)[:, None]


def scramble_base2(seed: int) -> ScrambledVanDerCorput:
    """Owen-scrambled base-2 van der Corput sequence for ``seed``."""
    return ScrambledVanDerCorput(seed)


def random_shift(seed: int, base: PointSequence | None = None) -> Shifted:
    """Randomly shifted copy of ``base`` (van der Corput base 2 by default)."""
    return Shifted(VanDerCorput(2) if base is None else base, seed=seed)
