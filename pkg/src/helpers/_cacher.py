#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

import threading

import numpy as np
from cachetools import LRUCache, cached
from cachetools.keys import hashkey
from numpy.typing import NDArray

from src.config import SYMBOL_CACHE_SIZE

_symbol_lock = threading.Lock()
symbol_cache: LRUCache = LRUCache(maxsize=SYMBOL_CACHE_SIZE)


def frequencies(width: int, height: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """z_i = 2 pi y_i / M1 and z_j = 2 pi y_j / N1 for y = 0 .. size - 1."""
    return (
        2.0 * np.pi * np.arange(width) / width,
        2.0 * np.pi * np.arange(height) / height,
    )


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@cached(
    symbol_cache,
    key=lambda width, height: hashkey("phase", width, height),
    lock=_symbol_lock,
)
def phase_factors(
    width: int, height: int
) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """
    exp(sqrt(-1) z_i) and exp(sqrt(-1) z_j), broadcast to (width, 1) and (1, height).

    With numpy's forward DFT, the shift S+ becomes a multiplication by these
    factors and S- by their conjugates.
    """
    zi, zj = frequencies(width, height)
    return (
        _readonly(np.exp(1j * zi)[:, None]),
        _readonly(np.exp(1j * zj)[None, :]),
    )


@cached(
    symbol_cache,
    key=lambda width, height, tau, h: hashkey("helmholtz", width, height, tau, h),
    lock=_symbol_lock,
)
def helmholtz_symbol(width: int, height: int, tau: float, h: float) -> NDArray[np.float64]:
    """w(i,j) = (1 - e^{-iz_i})(e^{iz_i} - 1) + (1 - e^{-iz_j})(e^{iz_j} - 1) - tau h^2."""
    ei, ej = phase_factors(width, height)
    w = (1 - ei.conj()) * (ei - 1) + (1 - ej.conj()) * (ej - 1) - tau * h * h
    # the symbol is real: 2(cos z_i - 1) + 2(cos z_j - 1) - tau h^2
    return _readonly(np.ascontiguousarray(w.real))
