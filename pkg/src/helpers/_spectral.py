#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

import logging
from dataclasses import dataclass
from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray

from src.logger import LOGGER
from ._cacher import frequencies, helmholtz_symbol, phase_factors
from ._grid import ScalarField, StaggeredVectorField, check_same_shape

__all__ = [
    "ComplexField",
    "LambdaSystemSymbols",
    "dft2",
    "frequencies",
    "idft2",
    "lambda_system_symbols",
    "solve_helmholtz",
    "solve_lambda_system",
]

# Unnormalized forward / normalized inverse (numpy.fft convention).
ComplexField: TypeAlias = NDArray[np.complex128]


@dataclass(frozen=True)
class LambdaSystemSymbols:
    """Per-frequency 2x2 matrix of the frozen-coefficient lambda system."""

    a11: NDArray[np.float64]
    a12: ComplexField
    a21: ComplexField
    a22: NDArray[np.float64]
    det: NDArray[np.float64]


def dft2(f: ScalarField) -> ComplexField:
    return np.fft.fft2(f.values)


def idft2(spectrum: ComplexField) -> ScalarField:
    return ScalarField(np.fft.ifft2(spectrum).real)


def _check_mesh(h: float) -> None:
    if not h > 0:
        raise ValueError(f"mesh size h must be positive, got {h}")


def lambda_system_symbols(
    width: int, height: int, gamma: float, c_star: float, h: float = 1.0
) -> LambdaSystemSymbols:
    if not gamma > 0:
        raise ValueError(
            f"gamma must be positive for the lambda system to be invertible, got {gamma}"
        )
    if c_star < 0:
        raise ValueError(f"c* must be nonnegative, got {c_star}")
    _check_mesh(h)

    ei, ej = phase_factors(width, height)
    gh2 = gamma * h * h
    # (I - S1+)(I - S1-) -> |1 - e^{iz_i}|^2 = 2 - 2 cos z_i
    a11 = gh2 + c_star * np.abs(1 - ei) ** 2 + np.zeros((1, height))
    a22 = gh2 + c_star * np.abs(1 - ej) ** 2 + np.zeros((width, 1))
    a12 = c_star * (1 - ei) * (1 - ej.conj())
    a21 = c_star * (1 - ej) * (1 - ei.conj())
    det = gh2 * gh2 + gh2 * c_star * (np.abs(1 - ei) ** 2 + np.abs(1 - ej) ** 2)
    return LambdaSystemSymbols(a11=a11, a12=a12, a21=a21, a22=a22, det=det)


def solve_lambda_system(
    g1: ScalarField,
    g2: ScalarField,
    gamma: float,
    c_star: float,
    h: float = 1.0,
) -> StaggeredVectorField:
    """
    Solve, with periodic wrap,

        [gamma h^2 I + c*(I - S1+)(I - S1-)] l1 + c*(I - S1+)(I - S2-) l2 = g1
        c*(I - S2+)(I - S1-) l1 + [gamma h^2 I + c*(I - S2+)(I - S2-)] l2 = g2

    by diagonalizing every shift with the 2D DFT.
    """
    check_same_shape(g1.shape, g2.shape)
    width, height = g1.shape
    sym = lambda_system_symbols(width, height, gamma, c_star, h)

    if c_star == 0:
        return StaggeredVectorField(g1.values / sym.a11, g2.values / sym.a22)

    G1 = dft2(g1)
    G2 = dft2(g2)
    L1 = (sym.a22 * G1 - sym.a12 * G2) / sym.det
    L2 = (-sym.a21 * G1 + sym.a11 * G2) / sym.det
    return StaggeredVectorField(idft2(L1).values, idft2(L2).values)


def solve_helmholtz(g: ScalarField, tau: float, h: float = 1.0) -> ScalarField:
    """
    Solve [(I - S1-)(S1+ - I) + (I - S2-)(S2+ - I) - tau h^2 I] u = g.

    The symbol is bounded above by -tau h^2, so the division never hits zero.
    """
    if not tau > 0:
        raise ValueError(f"time step tau must be positive, got {tau}")
    _check_mesh(h)

    w = helmholtz_symbol(g.width, g.height, float(tau), float(h))
    u = np.fft.ifft2(dft2(g) / w)
    if LOGGER.isEnabledFor(logging.DEBUG):
        LOGGER.debug("helmholtz solve: max imaginary residue %.3e", np.abs(u.imag).max())
    return ScalarField(u.real)
