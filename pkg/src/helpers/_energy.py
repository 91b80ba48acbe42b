#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

"""
Discrete energies, all assembled with the h^2 cell measure. The elastica term
lives at the bullet nodes and uses |A| and div there.
"""

import numpy as np

from ._dataclass import ModelParams
from ._grid import (
    FloatArray,
    ScalarField,
    StaggeredVectorField,
    divergence_at_bullet,
    magnitude_at_bullet,
)


def _sq_dist(q: StaggeredVectorField, r: StaggeredVectorField) -> FloatArray:
    return (q.c1 - r.c1) ** 2 + (q.c2 - r.c2) ** 2


def elastica_density(
    p: StaggeredVectorField, lam: StaggeredVectorField, params: ModelParams
) -> FloatArray:
    curvature = divergence_at_bullet(lam, params.h).values
    return (params.a + params.b * curvature**2) * magnitude_at_bullet(p).values


def elastica_energy(
    p: StaggeredVectorField, lam: StaggeredVectorField, params: ModelParams
) -> float:
    return float(elastica_density(p, lam, params).sum() * params.h**2)


def fidelity_energy(u: ScalarField, f: ScalarField, h: float = 1.0) -> float:
    return float(0.5 * np.sum((u.values - f.values) ** 2) * h * h)


def total_energy(
    u: ScalarField,
    p: StaggeredVectorField,
    lam: StaggeredVectorField,
    f: ScalarField,
    params: ModelParams,
) -> float:
    return elastica_energy(p, lam, params) + fidelity_energy(u, f, params.h)


def shrink_energy(
    p_third: StaggeredVectorField,
    p_prev: StaggeredVectorField,
    lam_prev: StaggeredVectorField,
    params: ModelParams,
) -> float:
    """1/2 |q - p^n|^2 + tau (a + b |div lambda^n|^2) |q| at q = p^{n+1/3}."""
    h2 = params.h**2
    return float(
        0.5 * _sq_dist(p_third, p_prev).sum() * h2
        + params.tau * elastica_density(p_third, lam_prev, params).sum() * h2
    )


def lambda_energy(
    lam_third: StaggeredVectorField,
    lam_prev: StaggeredVectorField,
    p_third: StaggeredVectorField,
    gamma_fft: float,
    params: ModelParams,
) -> float:
    h2 = params.h**2
    return float(
        gamma_fft / (2.0 * params.tau) * _sq_dist(lam_third, lam_prev).sum() * h2
        + elastica_density(p_third, lam_third, params).sum() * h2
    )


def projection_energy(
    p_twothirds: StaggeredVectorField,
    lam_twothirds: StaggeredVectorField,
    p_third: StaggeredVectorField,
    lam_third: StaggeredVectorField,
    gamma: FloatArray,
    h: float = 1.0,
) -> float:
    return float(
        (
            _sq_dist(p_twothirds, p_third) + gamma * _sq_dist(lam_twothirds, lam_third)
        ).sum()
        * h
        * h
    )


def update_energy(
    p_next: StaggeredVectorField,
    p_twothirds: StaggeredVectorField,
    u: ScalarField,
    f: ScalarField,
    params: ModelParams,
) -> float:
    h2 = params.h**2
    return float(
        0.5 * _sq_dist(p_next, p_twothirds).sum() * h2
        + 0.5 * params.tau * np.sum((u.values - f.values) ** 2) * h2
    )
