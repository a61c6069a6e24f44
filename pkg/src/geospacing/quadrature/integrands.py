"""Test integrands with analytically known means over the unit cube."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ParameterDomainError

SMOOTHNESS_CLASSES = ("bounded_variation", "smooth", "antisymmetric")


@dataclass(frozen=True)
class Integrand:
    """A vectorised integrand ``(n, d) -> (n,)`` together with its exact mean."""

    label: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    true_mean: float
    smoothness_class: str
    dimension: int = 1

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64)
        if points.ndim == 1:
            points = points[:, None] if self.dimension == 1 else points[None, :]
        return np.asarray(self.evaluator(points), dtype=np.float64).reshape(len(points))


def _midpoint_grid(dimension: int) -> np.ndarray:
    per_axis = {1: 1 << 14, 2: 512}.get(dimension, 32)
    axis = (np.arange(per_axis) + 0.5) / per_axis
    mesh = np.meshgrid(*([axis] * dimension), indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def register(
    label: str,
    evaluator: Callable[[np.ndarray], np.ndarray],
    true_mean: float,
    smoothness_class: str,
    dimension: int = 1,
    tol: float = 1e-6,
) -> Integrand:
    """Build an ``Integrand`` after checking ``true_mean`` on a midpoint grid.

    Raises:
        ParameterDomainError: If the grid average differs from ``true_mean``
            by more than ``tol``, or the class is unknown.
    """
    if smoothness_class not in SMOOTHNESS_CLASSES:
        raise ParameterDomainError(f"unknown smoothness class {smoothness_class!r}")
    f = Integrand(label, evaluator, float(true_mean), smoothness_class, dimension)
    grid = _midpoint_grid(dimension)
    grid_mean = math.fsum(f(grid).tolist()) / len(grid)
    if abs(grid_mean - true_mean) > tol:
        raise ParameterDomainError(
            f"{label}: stated mean {true_mean!r} but grid average is {grid_mean!r}"
        )
    return f


def constant(c: float, dimension: int = 1) -> Integrand:
    return register(
        f"const{c:g}", lambda x: np.full(len(x), c, dtype=np.float64), c, "smooth", dimension
    )


IDENTITY = register("x", lambda x: x[:, 0], 0.5, "bounded_variation")
SQUARE = register("x2", lambda x: x[:, 0] ** 2, 1.0 / 3.0, "smooth")
EXPONENTIAL = register("exp", lambda x: np.exp(x[:, 0]), math.e - 1.0, "smooth")
PRODUCT_2D = register("xy", lambda x: x[:, 0] * x[:, 1], 0.25, "smooth", dimension=2)
CENTERED = register("x_minus_half", lambda x: x[:, 0] - 0.5, 0.0, "antisymmetric")

SUITE: dict[str, Integrand] = {
    f.label: f for f in (IDENTITY, SQUARE, EXPONENTIAL, PRODUCT_2D, CENTERED)
}
