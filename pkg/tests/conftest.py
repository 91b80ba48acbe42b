#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

import numpy as np
import pytest

from src.helpers import ScalarField, StaggeredVectorField


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_field(rng):
    def make(width: int = 8, height: int = 8) -> ScalarField:
        return ScalarField(rng.random((width, height)))

    return make


@pytest.fixture
def random_vector_field(rng):
    def make(width: int = 8, height: int = 8, scale: float = 1.0) -> StaggeredVectorField:
        return StaggeredVectorField(
            scale * rng.standard_normal((width, height)),
            scale * rng.standard_normal((width, height)),
        )

    return make
