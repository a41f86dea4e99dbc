"""Shared fixtures. Scenes are immutable, so session scope is safe."""

import numpy as np
import pytest

from gbake import build_bvh, random_scene


@pytest.fixture(scope="session")
def scene_1k():
    return random_scene(count=1000, seed=42)


@pytest.fixture(scope="session")
def bvh_1k(scene_1k):
    return build_bvh(scene_1k)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240916)
