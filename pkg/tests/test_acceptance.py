#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

"""End-to-end checks on generated images at the sizes used for reporting."""

import math

import numpy as np
import pytest

from src import config
from src.helpers import (
    FixedPointConfig,
    ModelParams,
    NoiseSpec,
    RofConfig,
    ScalarField,
    SolverConfig,
    add_noise,
    generate_test_image,
    rof_energy,
    run,
    solve_rof,
)
from src.helpers._subproblems import fixed_point_theta, project_pointwise, theta_objective

FP = FixedPointConfig(fp_tol=1e-3, fp_max_iter=100)


def test_mean_conserved_on_random_inputs(rng):
    cfg = SolverConfig(tol=1e-14, max_iter=50)
    for _ in range(20):
        f = ScalarField(rng.random((16, 16)))
        target = f.mean()
        errors = []
        run(f, cfg, callback=lambda n, it: errors.append(abs(it.u.mean() - target)))
        assert len(errors) == 50
        assert max(errors) <= 1e-12


def _brute_projection(x, y, gamma, angles):
    """min over q = 0 and over q = theta mu, |mu| = 1, theta >= 0 (best theta per angle)."""
    y_norm = np.hypot(y[:, 0], y[:, 1])
    j0 = np.sum(x**2, axis=1) + gamma * np.maximum(0.0, y_norm - 1.0) ** 2

    mu = np.stack((np.cos(angles), np.sin(angles)), axis=1)  # (A, 2)
    theta = np.maximum(0.0, x @ mu.T)  # (N, A)
    q_minus_x = theta[:, :, None] * mu[None, :, :] - x[:, None, :]
    mu_minus_y = mu[None, :, :] - y[:, None, :]
    j1 = np.sum(q_minus_x**2, axis=2) + gamma[:, None] * np.sum(mu_minus_y**2, axis=2)
    return np.minimum(j0, j1.min(axis=1))


def test_projection_matches_brute_force(rng):
    n = 1000
    x = rng.uniform(-2.0, 2.0, (n, 2))
    y = rng.uniform(-2.0, 2.0, (n, 2))
    gamma = rng.uniform(math.sqrt(0.1), 4.0, n)

    q, mu = project_pointwise(x, y, gamma, FP)
    ours = np.sum((q - x) ** 2, axis=1) + gamma * np.sum((mu - y) ** 2, axis=1)

    angles = np.linspace(0.0, 2.0 * np.pi, 2048, endpoint=False)
    brute = np.concatenate(
        [
            _brute_projection(x[k : k + 100], y[k : k + 100], gamma[k : k + 100], angles)
            for k in range(0, n, 100)
        ]
    )
    assert np.max(np.abs(ours - brute)) <= 1e-3


def test_fixed_point_matches_brute_force(rng):
    for _ in range(1000):
        x = rng.uniform(-2.0, 2.0, 2)
        y = rng.uniform(-2.0, 2.0, 2)
        gamma = rng.uniform(math.sqrt(0.1), 4.0)
        theta = fixed_point_theta(x, y, gamma, FP)

        grid = np.arange(0.0, 4 * np.linalg.norm(x) + 4 * gamma, 1e-3)
        v = grid[:, None] * x + gamma * y
        brute = np.min(0.5 * grid**2 - np.hypot(v[:, 0], v[:, 1]))
        assert theta_objective(theta, x, y, gamma) <= brute + 1e-4


@pytest.mark.slow
def test_rof_cross_validation():
    f = add_noise(generate_test_image("disk", 64), NoiseSpec(std=config.NOISE_STD_20, seed=2))
    a = 0.1
    cfg = SolverConfig(
        params=ModelParams(a=a, b=0.0, tau=0.1),
        tol=1e-5,
        gamma_exponent=config.ROF_GAMMA_EXPONENT,
    )
    elastica = run(f, cfg)
    oracle = solve_rof(f, RofConfig(weight=a, tol=1e-7, max_iter=100000))
    assert elastica.converged

    e_elastica = rof_energy(elastica.u, f, a)
    e_oracle = rof_energy(oracle.u, f, a)
    assert abs(e_oracle - e_elastica) / e_oracle <= 0.01


@pytest.fixture(scope="module")
def square_run():
    f = add_noise(generate_test_image("square", 60), NoiseSpec(std=config.NOISE_STD_20, seed=1))
    feasibility = {"lam": 0.0, "dot": 0.0}

    def monitor(n, it):
        mu, q = it.lam_twothirds, it.p_twothirds
        feasibility["lam"] = max(feasibility["lam"], float(mu.collocated_norm().max()))
        gap = np.abs(q.c1 * mu.c1 + q.c2 * mu.c2 - q.collocated_norm()).max()
        feasibility["dot"] = max(feasibility["dot"], float(gap))

    result = run(f, SolverConfig(tol=1e-5, max_iter=5000), callback=monitor)
    return result, feasibility


@pytest.mark.slow
def test_square_energy_decreases(square_run):
    result, _ = square_run
    totals = np.array(result.trace.totals)
    non_increasing = np.mean(np.diff(totals) <= 0)
    assert non_increasing >= 0.95
    assert totals[-1] < 0.5 * result.initial_energy


@pytest.mark.slow
def test_square_converges_in_order_of_hundreds(square_run):
    result, _ = square_run
    assert result.converged
    assert result.iterations <= 5000


@pytest.mark.slow
def test_square_run_stays_feasible(square_run):
    _, feasibility = square_run
    assert feasibility["lam"] <= 1.0 + 1e-12
    assert feasibility["dot"] <= 1e-10
