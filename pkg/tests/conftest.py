from __future__ import annotations

import numpy as np
import pytest

from trichrome.color_space import IlluminantAxis
from trichrome.structure import TriangularStructure


@pytest.fixture
def gray_axis():
    return IlluminantAxis.gray()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_axis(rng) -> IlluminantAxis:
    while True:
        a = rng.uniform(-0.2, 0.4, 3)
        b = rng.uniform(0.6, 1.2, 3)
        if np.linalg.norm(b - a) > 0.3:
            return IlluminantAxis(a, b)


def random_structure(rng, k: int, axis: IlluminantAxis | None = None) -> TriangularStructure:
    from trichrome.color_space import from_cylindrical

    axis = axis or random_axis(rng)
    while True:
        thetas = np.sort(rng.uniform(-np.pi, np.pi, k))
        gaps = np.diff(np.concatenate([thetas, [thetas[0] + 2 * np.pi]]))
        if k == 1 or np.min(gaps) > 0.2:
            break
    r = rng.uniform(0.2, 0.8, k)
    h = rng.uniform(0.2, 0.8, k)
    return TriangularStructure(axis, from_cylindrical(thetas, r, h, axis))
