#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

import math

import numpy as np
import pytest

from src.helpers import FixedPointConfig, ModelParams, ScalarField, StaggeredVectorField
from src.helpers._grid import (
    div_minus,
    divergence_at_bullet,
    grad_plus,
    magnitude_at_bullet,
    shift_plus,
)
from src.helpers._subproblems import (
    GammaField,
    compute_gamma,
    curvature_weights,
    fixed_point_theta,
    helmholtz_rhs,
    project_constraint,
    project_pointwise,
    shrink_p,
    solve_lambda_diffusion,
    theta_objective,
    update_u,
)

PARAMS = ModelParams(a=0.1, b=0.1, tau=0.1)
FP = FixedPointConfig()


def _const_vector(shape, v1, v2):
    return StaggeredVectorField(np.full(shape, v1), np.full(shape, v2))


def test_shrink_constant_field_with_zero_normals():
    p = _const_vector((4, 4), 3.0, 4.0)
    lam = StaggeredVectorField.zeros(4, 4)
    out = shrink_p(p, lam, PARAMS)
    factor = 1.0 - PARAMS.tau * PARAMS.a / 5.0
    assert np.allclose(out.c1, 3.0 * factor)
    assert np.allclose(out.c2, 4.0 * factor)


def test_shrink_kills_small_gradients():
    p = _const_vector((4, 4), 1e-3, 0.0)
    out = shrink_p(p, StaggeredVectorField.zeros(4, 4), PARAMS)
    assert not out.c1.any() and not out.c2.any()


def test_shrink_of_zero_field_is_zero(random_vector_field):
    p = StaggeredVectorField.zeros(5, 6)
    out = shrink_p(p, random_vector_field(5, 6), PARAMS)
    assert not out.c1.any() and not out.c2.any()


def test_shrink_never_grows_components(random_vector_field):
    p = random_vector_field(6, 7)
    lam = random_vector_field(6, 7, 0.5)
    out = shrink_p(p, lam, PARAMS)
    assert np.all(np.abs(out.c1) <= np.abs(p.c1))
    assert np.all(np.abs(out.c2) <= np.abs(p.c2))
    assert np.all(out.c1 * p.c1 >= 0)


def test_curvature_weights_use_first_component_in_square_stencil():
    lam = StaggeredVectorField.zeros(6, 6)
    c1 = np.zeros((6, 6))
    c1[1, 3] = 1.0  # lambda1(i-1, j+1) seen from the square node (2, 2)
    lam = StaggeredVectorField(c1, lam.c2)
    _, c_square = curvature_weights(lam, ModelParams(a=0.0, b=1.0, tau=1.0))
    # the square stencil reads lambda1 at (i, j+1) and (i-1, j+1) among others
    assert c_square[2, 2] == pytest.approx((1.0 / 2.0) ** 2)


def test_curvature_weights_are_a_tau_for_divergence_free_normals():
    lam = _const_vector((5, 5), 0.6, -0.8)
    c_circle, c_square = curvature_weights(lam, PARAMS)
    assert np.allclose(c_circle, PARAMS.tau * PARAMS.a)
    assert np.allclose(c_square, PARAMS.tau * PARAMS.a)


def test_gamma_is_floored_at_sqrt_tau():
    p = StaggeredVectorField(np.array([[0.0, 2.0], [0.1, 0.0]]), np.zeros((2, 2)))
    gamma = compute_gamma(p, 0.1)
    floor = math.sqrt(0.1)
    assert np.allclose(gamma.pointwise, [[floor, 4.0], [floor, floor]])
    assert gamma.fft == 4.0
    assert not gamma.pointwise.flags.writeable


def test_gamma_exponent_one():
    p = _const_vector((2, 2), 3.0, 4.0)
    assert compute_gamma(p, 0.1, exponent=1).fft == pytest.approx(5.0)


def test_gamma_rejects_bad_exponent():
    with pytest.raises(ValueError, match="exponent"):
        compute_gamma(StaggeredVectorField.zeros(2, 2), 0.1, exponent=3)


def test_lambda_diffusion_without_curvature_weight_is_identity(random_vector_field):
    lam = random_vector_field(6, 6, 0.5)
    p = random_vector_field(6, 6)
    params = ModelParams(a=0.1, b=0.0, tau=0.1)
    out = solve_lambda_diffusion(lam, p, 2.0, params)
    assert np.allclose(out.c1, lam.c1, atol=1e-12)
    assert np.allclose(out.c2, lam.c2, atol=1e-12)


def test_lambda_diffusion_with_zero_gradient_keeps_lambda(random_vector_field):
    lam = random_vector_field(5, 7, 0.5)
    out = solve_lambda_diffusion(lam, StaggeredVectorField.zeros(5, 7), 1.0, PARAMS)
    assert np.allclose(out.c1, lam.c1, atol=1e-12)
    assert np.allclose(out.c2, lam.c2, atol=1e-12)


def test_lambda_diffusion_smooths_divergence(random_vector_field):
    lam = random_vector_field(8, 8, 0.5)
    p = _const_vector((8, 8), 1.0, 1.0)
    out = solve_lambda_diffusion(lam, p, math.sqrt(0.1), ModelParams(a=0.1, b=1.0, tau=0.1))
    assert np.linalg.norm(div_minus(out).values) < np.linalg.norm(div_minus(lam).values)


def test_fixed_point_zero_x():
    assert fixed_point_theta((0.0, 0.0), (0.3, -0.4), 1.0) == 0.0


def test_fixed_point_aligned_y_is_fixed_at_initializer():
    x = np.array([0.6, 0.8]) * 2.0
    y = x / np.linalg.norm(x)
    assert fixed_point_theta(x, y, 1.5) == pytest.approx(2.0)


def test_fixed_point_orthogonal_example():
    theta = fixed_point_theta((1.0, 0.0), (0.0, 1.0), 1.0)
    grid = np.arange(0.0, 5.0, 1e-4)
    brute = min(theta_objective(t, (1.0, 0.0), (0.0, 1.0), 1.0) for t in grid[:2000])
    assert theta == 0.0
    assert theta_objective(theta, (1.0, 0.0), (0.0, 1.0), 1.0) <= brute + 1e-12


def test_fixed_point_prefers_boundary_minimum():
    # two local minima: theta = 0 is the global one
    x, y = (1.0, 0.0), (-0.6, 0.0)
    theta = fixed_point_theta(x, y, 1.0)
    assert theta == 0.0
    assert theta_objective(theta, x, y, 1.0) < theta_objective(1.0, x, y, 1.0)


def test_fixed_point_rejects_non_positive_gamma():
    with pytest.raises(ValueError):
        fixed_point_theta((1.0, 0.0), (0.0, 1.0), 0.0)


def test_fixed_point_random_instances_against_grid(rng):
    for _ in range(100):
        x = rng.uniform(-2, 2, 2)
        y = rng.uniform(-2, 2, 2)
        gamma = rng.uniform(math.sqrt(0.1), 4.0)
        theta = fixed_point_theta(x, y, gamma, FP)
        grid = np.arange(0.0, 4 * np.linalg.norm(x) + 4 * gamma, 1e-3)
        v = grid[:, None] * x + gamma * y
        brute = np.min(0.5 * grid**2 - np.hypot(v[:, 0], v[:, 1]))
        assert theta >= 0.0
        assert theta_objective(theta, x, y, gamma) <= brute + 1e-4


def test_projection_of_zero_input():
    q, mu = project_pointwise(np.zeros((1, 2)), np.zeros((1, 2)), np.array([1.0]), FP)
    assert not q.any() and not mu.any()


def test_projection_keeps_feasible_pair():
    x = np.array([[1.2, 0.0]])
    y = np.array([[1.0, 0.0]])
    q, mu = project_pointwise(x, y, np.array([1.0]), FP)
    assert np.allclose(q, x)
    assert np.allclose(mu, y)


def test_projection_takes_zero_branch_when_cheaper():
    # tiny x opposite to a unit y: q = 0 with mu = y costs |x|^2 only
    x = np.array([[-1e-3, 0.0]])
    y = np.array([[1.0, 0.0]])
    q, mu = project_pointwise(x, y, np.array([4.0]), FP)
    assert not q.any()
    assert np.allclose(mu, y)


def test_project_constraint_feasibility(random_vector_field):
    p = random_vector_field(7, 6)
    lam = random_vector_field(7, 6, 1.5)
    gamma = compute_gamma(p, 0.1)
    q, mu = project_constraint(p, lam, gamma, FP)
    assert np.max(mu.collocated_norm()) <= 1.0 + 1e-12
    dot = q.c1 * mu.c1 + q.c2 * mu.c2
    assert np.max(np.abs(dot - q.collocated_norm())) <= 1e-10


def test_project_constraint_rejects_non_positive_gamma():
    p = StaggeredVectorField.zeros(3, 3)
    bad = GammaField(pointwise=np.zeros((3, 3)), fft=1.0)
    with pytest.raises(ValueError, match="gamma"):
        project_constraint(p, p, bad, FP)


def test_helmholtz_rhs_at_unit_mesh(random_vector_field, random_field):
    p = random_vector_field(5, 5)
    f = random_field(5, 5)
    g = helmholtz_rhs(p, f, PARAMS)
    assert np.allclose(g.values, div_minus(p).values - PARAMS.tau * f.values)


def test_update_u_conserves_mean(random_vector_field, random_field):
    p = random_vector_field(6, 9)
    f = random_field(6, 9)
    u, p_next = update_u(p, f, PARAMS)
    assert u.mean() == pytest.approx(f.mean(), abs=1e-12)
    g = grad_plus(u)
    assert np.array_equal(p_next.c1, g.c1)
    assert np.array_equal(p_next.c2, g.c2)


def test_update_u_of_consistent_gradient_returns_image(random_field):
    f = random_field(8, 6)
    u, _ = update_u(grad_plus(f), f, PARAMS)
    assert np.allclose(u.values, f.values, atol=1e-12)
    assert isinstance(u, ScalarField)


@pytest.mark.parametrize("h", [1.0, 0.5])
def test_lambda_diffusion_satisfies_frozen_coefficient_equation(random_vector_field, h):
    params = ModelParams(a=0.1, b=1.0, tau=0.1, h=h)
    lam = random_vector_field(8, 8, scale=0.5)
    p = random_vector_field(8, 8)
    gamma = 0.7

    out = solve_lambda_diffusion(lam, p, gamma, params)

    magnitude = magnitude_at_bullet(p).values
    c_star = (2 * params.tau * params.b * magnitude).max()
    div_old = divergence_at_bullet(lam, h).values
    div_new = divergence_at_bullet(out, h).values
    flux = c_star * h * (div_new - div_old) + 2 * params.tau * params.b * h * magnitude * div_old

    gh2 = gamma * h * h
    for axis, new, old in ((0, out.c1, lam.c1), (1, out.c2, lam.c2)):
        residual = gh2 * (new - old) - (shift_plus(flux, axis) - flux)
        assert np.max(np.abs(residual)) <= 1e-10 * np.max(np.abs(gh2 * old))
