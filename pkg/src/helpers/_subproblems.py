#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

"""
Kernels of the three fractional steps: shrinkage and frozen-coefficient
diffusion (first step), pointwise projection onto
{q . mu = |q|, |mu| <= 1} (second step) and the Helmholtz u-update (third step).
"""

import math
from dataclasses import dataclass

import numpy as np

from ._dataclass import FixedPointConfig, ModelParams
from ._grid import (
    FloatArray,
    ScalarField,
    StaggeredVectorField,
    avg_to_circle,
    avg_to_square,
    check_same_shape,
    div_minus,
    divergence_at_bullet,
    grad_plus,
    magnitude_at_bullet,
    shift_minus,
    shift_plus,
)
from ._spectral import solve_helmholtz, solve_lambda_system


@dataclass(frozen=True)
class GammaField:
    pointwise: FloatArray
    fft: float


def _shrink_factor(c: FloatArray, magnitude: FloatArray) -> FloatArray:
    # factor is 0 where the collocated magnitude vanishes
    ratio = np.divide(c, magnitude, out=np.ones_like(c), where=magnitude > 0)
    return np.maximum(0.0, 1.0 - ratio)


def curvature_weights(lam: StaggeredVectorField, params: ModelParams) -> tuple[FloatArray, FloatArray]:
    """c^(1) at the circle nodes and c^(2) at the square nodes."""
    l1, l2 = lam.c1, lam.c2
    two_h = 2.0 * params.h

    pair2 = l2 + shift_plus(l2, 0)
    div_circle = (
        shift_plus(l1, 0) - shift_minus(l1, 0) + pair2 - shift_minus(pair2, 1)
    ) / two_h

    pair1 = l1 + shift_plus(l1, 1)
    div_square = (
        pair1 - shift_minus(pair1, 0) + shift_plus(l2, 1) - shift_minus(l2, 1)
    ) / two_h

    tau, a, b = params.tau, params.a, params.b
    return tau * (a + b * div_circle**2), tau * (a + b * div_square**2)


def shrink_p(
    p: StaggeredVectorField, lam: StaggeredVectorField, params: ModelParams
) -> StaggeredVectorField:
    check_same_shape(p.shape, lam.shape)
    c_circle, c_square = curvature_weights(lam, params)

    mag_circle = np.hypot(p.c1, avg_to_circle(p.c2))
    mag_square = np.hypot(avg_to_square(p.c1), p.c2)

    return StaggeredVectorField(
        _shrink_factor(c_circle, mag_circle) * p.c1,
        _shrink_factor(c_square, mag_square) * p.c2,
    )


def compute_gamma(
    p_third: StaggeredVectorField, tau: float, exponent: int = 2
) -> GammaField:
    """gamma = max(|p^{n+1/3}|^exponent, sqrt(tau)) nodewise, plus its max for the FFT solve."""
    if not tau > 0:
        raise ValueError(f"time step tau must be positive, got {tau}")
    if exponent not in (1, 2):
        raise ValueError(f"gamma exponent must be 1 or 2, got {exponent}")

    pointwise = np.maximum(p_third.collocated_norm() ** exponent, math.sqrt(tau))
    pointwise.setflags(write=False)
    return GammaField(pointwise=pointwise, fft=float(pointwise.max()))


def solve_lambda_diffusion(
    lam: StaggeredVectorField,
    p_third: StaggeredVectorField,
    gamma_fft: float,
    params: ModelParams,
) -> StaggeredVectorField:
    check_same_shape(lam.shape, p_third.shape)
    tau, b, h = params.tau, params.b, params.h

    magnitude = magnitude_at_bullet(p_third).values
    c_star = float((2.0 * tau * b * magnitude).max())

    # (c* h - 2 tau b h |A|(p)) div(lambda) at the bullet nodes, then its forward difference
    flux = (c_star * h - 2.0 * tau * b * h * magnitude) * divergence_at_bullet(lam, h).values
    gh2 = gamma_fft * h * h
    g1 = gh2 * lam.c1 - (shift_plus(flux, 0) - flux)
    g2 = gh2 * lam.c2 - (shift_plus(flux, 1) - flux)

    return solve_lambda_system(ScalarField(g1), ScalarField(g2), gamma_fft, c_star, h)


def _fixed_point_batch(
    x: FloatArray, y: FloatArray, gamma: FloatArray, cfg: FixedPointConfig
) -> tuple[FloatArray, np.ndarray]:
    """
    Vectorized fixed-point iteration for min_{theta >= 0} theta^2/2 - |theta x + gamma y|.

    x and y carry the 2-vectors on their last axis. Each node stops on its own
    once its step is below ``fp_tol``; nodes where theta x + gamma y vanishes
    keep their current theta and are flagged as degenerate. The result is
    finally compared against theta = 0.
    """
    theta = np.hypot(x[..., 0], x[..., 1])
    active = np.ones(theta.shape, dtype=bool)
    degenerate = np.zeros(theta.shape, dtype=bool)
    gamma_y = gamma[..., None] * y

    for _ in range(cfg.fp_max_iter):
        if not active.any():
            break
        v = theta[..., None] * x + gamma_y
        norm = np.hypot(v[..., 0], v[..., 1])

        hit_zero = active & (norm == 0)
        degenerate |= hit_zero
        active &= ~hit_zero

        proj = np.einsum("...k,...k->...", x, v)
        update = np.maximum(
            0.0, np.divide(proj, norm, out=np.zeros_like(proj), where=norm > 0)
        )
        done = np.abs(update - theta) <= cfg.fp_tol
        theta = np.where(active, update, theta)
        active &= ~done

    # the iteration settles on the largest stationary point; the other local
    # minimum, if any, sits on the boundary theta = 0
    v = theta[..., None] * x + gamma_y
    e_theta = 0.5 * theta**2 - np.hypot(v[..., 0], v[..., 1])
    gy_norm = np.hypot(gamma_y[..., 0], gamma_y[..., 1])
    use_zero = -gy_norm < e_theta
    theta = np.where(use_zero, 0.0, theta)
    degenerate &= ~(use_zero & (gy_norm > 0))

    return theta, degenerate


def fixed_point_theta(
    x,
    y,
    gamma: float,
    cfg: FixedPointConfig = FixedPointConfig(),
) -> float:
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    xv = np.asarray(x, dtype=np.float64).reshape(1, 2)
    yv = np.asarray(y, dtype=np.float64).reshape(1, 2)
    theta, _ = _fixed_point_batch(xv, yv, np.array([float(gamma)]), cfg)
    return float(theta[0])


def theta_objective(theta: float, x, y, gamma: float) -> float:
    """E(theta) = theta^2 / 2 - |theta x + gamma y|."""
    v = theta * np.asarray(x, dtype=np.float64) + gamma * np.asarray(y, dtype=np.float64)
    return 0.5 * theta * theta - float(np.hypot(v[0], v[1]))


def project_pointwise(
    x: FloatArray, y: FloatArray, gamma: FloatArray, cfg: FixedPointConfig
) -> tuple[FloatArray, FloatArray]:
    """
    Nodewise argmin of |q - x|^2 + gamma |mu - y|^2 over q . mu = |q|, |mu| <= 1.

    Compares the q = 0 branch with the q = theta mu, |mu| = 1 branch; ties go
    to q = 0.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    y_norm = np.hypot(y[..., 0], y[..., 1])
    mu0 = y / np.maximum(1.0, y_norm)[..., None]
    j0 = np.sum(x * x, axis=-1) + gamma * np.sum((mu0 - y) ** 2, axis=-1)

    theta, degenerate = _fixed_point_batch(x, y, gamma, cfg)
    v = theta[..., None] * x + gamma[..., None] * y
    v_norm = np.hypot(v[..., 0], v[..., 1])
    valid = ~degenerate & (v_norm > 0)

    safe_norm = np.where(valid, v_norm, 1.0)
    mu1 = v / safe_norm[..., None]
    q1 = theta[..., None] * mu1
    j1 = np.sum((q1 - x) ** 2, axis=-1) + gamma * np.sum((mu1 - y) ** 2, axis=-1)

    take_one = (valid & (j1 < j0))[..., None]
    q = np.where(take_one, q1, 0.0)
    mu = np.where(take_one, mu1, mu0)
    return q, mu


def project_constraint(
    p_third: StaggeredVectorField,
    lam_third: StaggeredVectorField,
    gamma: GammaField,
    cfg: FixedPointConfig = FixedPointConfig(),
) -> tuple[StaggeredVectorField, StaggeredVectorField]:
    check_same_shape(p_third.shape, lam_third.shape, gamma.pointwise.shape)
    if not np.all(gamma.pointwise > 0):
        raise ValueError("pointwise gamma must be positive")

    x = np.stack((p_third.c1, p_third.c2), axis=-1)
    y = np.stack((lam_third.c1, lam_third.c2), axis=-1)
    q, mu = project_pointwise(x, y, gamma.pointwise, cfg)
    return (
        StaggeredVectorField(q[..., 0], q[..., 1]),
        StaggeredVectorField(mu[..., 0], mu[..., 1]),
    )


def helmholtz_rhs(p_twothirds: StaggeredVectorField, f: ScalarField, params: ModelParams) -> ScalarField:
    """g = h * (undivided backward divergence of p) - tau h^2 f."""
    h, tau = params.h, params.tau
    return ScalarField(h * h * div_minus(p_twothirds, h).values - tau * h * h * f.values)


def update_u(
    p_twothirds: StaggeredVectorField, f: ScalarField, params: ModelParams
) -> tuple[ScalarField, StaggeredVectorField]:
    check_same_shape(p_twothirds.shape, f.shape)
    u = solve_helmholtz(helmholtz_rhs(p_twothirds, f, params), params.tau, params.h)
    return u, grad_plus(u, params.h)
