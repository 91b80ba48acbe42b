#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

from ._cacher import symbol_cache
from ._dataclass import (
    BenchCase,
    BenchResult,
    EnergyTrace,
    FixedPointConfig,
    GridGeometry,
    ModelParams,
    NoiseSpec,
    RofConfig,
    SolverConfig,
    TraceRecord,
)
from ._energy import elastica_energy, fidelity_energy, total_energy
from ._grid import ScalarField, StaggeredVectorField, div_minus, grad_plus
from ._imaging import (
    TEST_IMAGE_KINDS,
    ImageFormatError,
    add_noise,
    generate_test_image,
    load_image,
    psnr,
    save_image,
)
from ._rof import RofResult, rof_energy, solve_rof
from ._solver import RunResult, SolverState, StepIterates, init_state, rel_err, run, step

__all__ = [
    "symbol_cache",
    "BenchCase",
    "BenchResult",
    "EnergyTrace",
    "FixedPointConfig",
    "GridGeometry",
    "ModelParams",
    "NoiseSpec",
    "RofConfig",
    "SolverConfig",
    "TraceRecord",
    "elastica_energy",
    "fidelity_energy",
    "total_energy",
    "ScalarField",
    "StaggeredVectorField",
    "div_minus",
    "grad_plus",
    "TEST_IMAGE_KINDS",
    "ImageFormatError",
    "add_noise",
    "generate_test_image",
    "load_image",
    "psnr",
    "save_image",
    "RofResult",
    "rof_energy",
    "solve_rof",
    "RunResult",
    "SolverState",
    "StepIterates",
    "init_state",
    "rel_err",
    "run",
    "step",
]
