#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

import math
import time
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from src.logger import LOGGER
from ._dataclass import EnergyTrace, SolverConfig, TraceRecord
from ._energy import (
    elastica_energy,
    fidelity_energy,
    lambda_energy,
    projection_energy,
    shrink_energy,
    total_energy,
    update_energy,
)
from ._grid import ScalarField, StaggeredVectorField, check_same_shape, grad_plus
from ._subproblems import (
    GammaField,
    compute_gamma,
    project_constraint,
    shrink_p,
    solve_lambda_diffusion,
    update_u,
)


@dataclass(frozen=True)
class SolverState:
    u: ScalarField
    p: StaggeredVectorField
    lam: StaggeredVectorField
    iter: int = 0
    last_rel_err: float = math.inf

    def __post_init__(self) -> None:
        check_same_shape(self.u.shape, self.p.shape, self.lam.shape)


@dataclass(frozen=True)
class StepIterates:
    """Intermediate fractional-step iterates of one outer iteration."""

    p_third: StaggeredVectorField
    lam_third: StaggeredVectorField
    gamma: GammaField
    p_twothirds: StaggeredVectorField
    lam_twothirds: StaggeredVectorField
    u: ScalarField
    p_next: StaggeredVectorField


@dataclass(frozen=True)
class RunResult:
    u: ScalarField
    trace: EnergyTrace
    iterations: int
    converged: bool
    seconds: float
    initial_energy: float
    state: SolverState

    @property
    def seconds_per_iter(self) -> float:
        return self.seconds / self.iterations if self.iterations else 0.0


StepCallback = Callable[[int, StepIterates], None]


def rel_err(u_new: ScalarField, u_old: ScalarField) -> float:
    """||u_new - u_old||_2 / ||u_new||_2, +inf when u_new vanishes but u_old does not."""
    check_same_shape(u_new.shape, u_old.shape)
    diff = float(np.linalg.norm(u_new.values - u_old.values))
    if diff == 0.0:
        return 0.0
    norm = float(np.linalg.norm(u_new.values))
    if norm == 0.0:
        return math.inf
    return diff / norm


def init_state(f: ScalarField, cfg: SolverConfig) -> SolverState:
    """u0 = f, p0 = grad+ f, lambda0 = p0 / |p0| where p0 != 0 (index-paired), else 0."""
    p = grad_plus(f, cfg.params.h)
    norm = p.collocated_norm()
    nonzero = norm > 0
    safe = np.where(nonzero, norm, 1.0)
    lam = StaggeredVectorField(
        np.where(nonzero, p.c1 / safe, 0.0), np.where(nonzero, p.c2 / safe, 0.0)
    )
    return SolverState(u=f, p=p, lam=lam)


def advance(
    state: SolverState, f: ScalarField, cfg: SolverConfig
) -> tuple[SolverState, StepIterates]:
    params = cfg.params
    p_third = shrink_p(state.p, state.lam, params)
    gamma = compute_gamma(p_third, params.tau, cfg.gamma_exponent)
    lam_third = solve_lambda_diffusion(state.lam, p_third, gamma.fft, params)
    p_twothirds, lam_twothirds = project_constraint(p_third, lam_third, gamma, cfg.fp)
    u, p_next = update_u(p_twothirds, f, params)

    iterates = StepIterates(
        p_third=p_third,
        lam_third=lam_third,
        gamma=gamma,
        p_twothirds=p_twothirds,
        lam_twothirds=lam_twothirds,
        u=u,
        p_next=p_next,
    )
    new_state = replace(
        state,
        u=u,
        p=p_next,
        lam=lam_twothirds,
        iter=state.iter + 1,
        last_rel_err=rel_err(u, state.u),
    )
    return new_state, iterates


def step(state: SolverState, f: ScalarField, cfg: SolverConfig) -> SolverState:
    return advance(state, f, cfg)[0]


def _trace_record(
    prev: SolverState,
    new: SolverState,
    it: StepIterates,
    f: ScalarField,
    cfg: SolverConfig,
) -> TraceRecord:
    params = cfg.params
    e_elastica = elastica_energy(new.p, new.lam, params)
    e_fidelity = fidelity_energy(new.u, f, params.h)
    return TraceRecord(
        iter=new.iter,
        e_total=e_elastica + e_fidelity,
        e_elastica=e_elastica,
        e_fidelity=e_fidelity,
        e_p13=shrink_energy(it.p_third, prev.p, prev.lam, params),
        e_lam13=lambda_energy(it.lam_third, prev.lam, it.p_third, it.gamma.fft, params),
        e_proj23=projection_energy(
            it.p_twothirds,
            it.lam_twothirds,
            it.p_third,
            it.lam_third,
            it.gamma.pointwise,
            params.h,
        ),
        e_u=update_energy(it.p_next, it.p_twothirds, it.u, f, params),
        rel_err=new.last_rel_err,
    )


def run(
    f: ScalarField,
    cfg: SolverConfig,
    callback: Optional[StepCallback] = None,
) -> RunResult:
    """
    Iterate the three fractional steps until ReErr < tol or max_iter is reached.

    Args:
        f: The input image.
        cfg: Solver configuration.
        callback: Optional hook called after every iteration with the
            iteration number and the fractional-step iterates.

    Returns:
        RunResult: final image, energy trace, iteration count, convergence flag
        and timing.
    """
    params = cfg.params
    LOGGER.info(
        "Elastica run on %dx%d grid (a=%g, b=%g, tau=%g, h=%g, tol=%g, max_iter=%d)",
        f.width,
        f.height,
        params.a,
        params.b,
        params.tau,
        params.h,
        cfg.tol,
        cfg.max_iter,
    )
    start = time.perf_counter()
    state = init_state(f, cfg)
    initial_energy = total_energy(state.u, state.p, state.lam, f, params)
    trace = EnergyTrace()
    converged = False

    while state.iter < cfg.max_iter:
        prev = state
        state, iterates = advance(prev, f, cfg)
        if callback is not None:
            callback(state.iter, iterates)

        converged = state.last_rel_err < cfg.tol
        last = converged or state.iter == cfg.max_iter
        if last or state.iter % cfg.trace_every == 0:
            record = trace.append(_trace_record(prev, state, iterates, f, cfg))
            LOGGER.debug(
                "iter %d: E=%.10g ReErr=%.3e", record.iter, record.e_total, record.rel_err
            )
        if converged:
            break

    seconds = time.perf_counter() - start
    if converged:
        LOGGER.info(
            "Converged after %d iterations (ReErr %.3e) in %.2fs",
            state.iter,
            state.last_rel_err,
            seconds,
        )
    else:
        LOGGER.warning(
            "Stopped at max_iter=%d without reaching tol=%g (ReErr %.3e)",
            cfg.max_iter,
            cfg.tol,
            state.last_rel_err,
        )

    return RunResult(
        u=state.u,
        trace=trace,
        iterations=state.iter,
        converged=converged,
        seconds=seconds,
        initial_energy=initial_energy,
        state=state,
    )
