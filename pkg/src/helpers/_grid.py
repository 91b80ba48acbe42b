#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

"""
Periodic staggered-grid containers and discrete operators.

Node families: scalars (u, f) live at the bullet nodes (i, j); the first
component of a vector field at the circle nodes (i + 1/2, j) and the second at
the square nodes (i, j + 1/2). Arrays are indexed 0-based with axis 0 along x1
(i) and axis 1 along x2 (j); every shift wraps periodically, so the
1-based wrap rows (i = 1 reads i = M1) of the difference formulas become ``np.roll``.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]


def _as_grid(values, name: str) -> FloatArray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 2 or arr.shape[1] < 2:
        raise ValueError(f"{name} must be at least 2x2, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ScalarField:
    """M1 x N1 samples at the bullet nodes."""

    values: FloatArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_grid(self.values, "ScalarField"))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def width(self) -> int:
        return self.values.shape[0]

    @property
    def height(self) -> int:
        return self.values.shape[1]

    def mean(self) -> float:
        return float(self.values.mean())

    @classmethod
    def zeros(cls, width: int, height: int) -> "ScalarField":
        return cls(np.zeros((width, height)))

    @classmethod
    def constant(cls, width: int, height: int, value: float) -> "ScalarField":
        return cls(np.full((width, height), float(value)))


@dataclass(frozen=True)
class StaggeredVectorField:
    """First component at the circle nodes, second at the square nodes."""

    c1: FloatArray
    c2: FloatArray

    def __post_init__(self) -> None:
        c1 = _as_grid(self.c1, "component1")
        c2 = _as_grid(self.c2, "component2")
        if c1.shape != c2.shape:
            raise ValueError(
                f"components must share dimensions, got {c1.shape} and {c2.shape}"
            )
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)

    @property
    def shape(self) -> tuple[int, int]:
        return self.c1.shape

    def collocated_norm(self) -> FloatArray:
        """|(c1(i,j), c2(i,j))|, pairing the components that share an index."""
        return np.hypot(self.c1, self.c2)

    @classmethod
    def zeros(cls, width: int, height: int) -> "StaggeredVectorField":
        return cls(np.zeros((width, height)), np.zeros((width, height)))


def check_same_shape(*shapes: tuple[int, int]) -> None:
    if len(set(shapes)) > 1:
        raise ValueError(f"grid dimensions do not match: {shapes}")


# S1+ v(i,j) = v(i+1,j), S1- v(i,j) = v(i-1,j), likewise along axis 1.
def shift_plus(arr: FloatArray, axis: int) -> FloatArray:
    return np.roll(arr, -1, axis=axis)


def shift_minus(arr: FloatArray, axis: int) -> FloatArray:
    return np.roll(arr, 1, axis=axis)


def diff_backward_1(v: ScalarField, h: float = 1.0) -> ScalarField:
    return ScalarField((v.values - shift_minus(v.values, 0)) / h)


def diff_backward_2(v: ScalarField, h: float = 1.0) -> ScalarField:
    return ScalarField((v.values - shift_minus(v.values, 1)) / h)


def diff_forward_1(v: ScalarField, h: float = 1.0) -> ScalarField:
    return ScalarField((shift_plus(v.values, 0) - v.values) / h)


def diff_forward_2(v: ScalarField, h: float = 1.0) -> ScalarField:
    return ScalarField((shift_plus(v.values, 1) - v.values) / h)


def grad_plus(v: ScalarField, h: float = 1.0) -> StaggeredVectorField:
    return StaggeredVectorField(
        diff_forward_1(v, h).values, diff_forward_2(v, h).values
    )


def div_minus(q: StaggeredVectorField, h: float = 1.0) -> ScalarField:
    return ScalarField(
        (q.c1 - shift_minus(q.c1, 0) + q.c2 - shift_minus(q.c2, 1)) / h
    )


def avg_to_square(mu1: FloatArray) -> FloatArray:
    """
    Circle-node field evaluated at the square nodes:
    [mu1(i,j+1) + mu1(i-1,j+1) + mu1(i,j) + mu1(i-1,j)] / 4.
    """
    pair = mu1 + shift_minus(mu1, 0)
    return (pair + shift_plus(pair, 1)) / 4.0


def avg_to_circle(mu2: FloatArray) -> FloatArray:
    """
    Square-node field evaluated at the circle nodes:
    [mu2(i+1,j) + mu2(i,j) + mu2(i+1,j-1) + mu2(i,j-1)] / 4.
    """
    pair = mu2 + shift_plus(mu2, 0)
    return (pair + shift_minus(pair, 1)) / 4.0


def average_to_bullet(q: StaggeredVectorField) -> tuple[FloatArray, FloatArray]:
    """(q1(i,j) + q1(i-1,j)) / 2 and (q2(i,j) + q2(i,j-1)) / 2."""
    return (q.c1 + shift_minus(q.c1, 0)) / 2.0, (q.c2 + shift_minus(q.c2, 1)) / 2.0


def spread_from_bullet(w1: FloatArray, w2: FloatArray) -> StaggeredVectorField:
    """Adjoint of ``average_to_bullet``."""
    return StaggeredVectorField(
        (w1 + shift_plus(w1, 0)) / 2.0, (w2 + shift_plus(w2, 1)) / 2.0
    )


def magnitude_at_bullet(q: StaggeredVectorField) -> ScalarField:
    return ScalarField(np.hypot(*average_to_bullet(q)))


def divergence_at_bullet(mu: StaggeredVectorField, h: float = 1.0) -> ScalarField:
    # same stencil as div_minus, spelled out at the bullet node
    return ScalarField(
        (mu.c1 - shift_minus(mu.c1, 0) + mu.c2 - shift_minus(mu.c2, 1)) / h
    )


def inner(a: FloatArray, b: FloatArray) -> float:
    return float(np.vdot(a, b))
