"""Seeded synthetic scenes for tests, demos, and benchmarks.

Three flavors:

* ``random_scene``: an unstructured particle cloud, the workhorse for
  determinism and equivalence checks.
* ``smooth_scene``: few, large, soft particles whose renders vary
  slowly everywhere, giving seam metrics a meaningful interior
  baseline.
* ``seam_stress_scene``: highly anisotropic particles draped across
  the cube-edge directions of a probe, built to maximize the
  disagreement between per-face linearized splatting and ray tracing
  at face boundaries.

All generators take an integer seed and are deterministic for a given
numpy version.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.transform import Rotation

from .scene import GaussianScene
from .seams import _AXIS_OF, EDGES
from .sh import N_COEFFS, rgb_to_dc


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _quat_from_matrix(mats: np.ndarray) -> np.ndarray:
    """Rotation matrices (N, 3, 3) -> scalar-first unit quaternions."""
    q = Rotation.from_matrix(mats).as_quat()  # scalar-last
    q = np.roll(np.atleast_2d(q), 1, axis=1)
    # Canonical sign: nonnegative scalar part.
    q[q[:, 0] < 0.0] *= -1.0
    return q


def _dc_coeffs(rgb: np.ndarray) -> np.ndarray:
    """(N, 3) linear colors -> (N, 3, 16) coefficients, view-independent."""
    sh = np.zeros((rgb.shape[0], 3, N_COEFFS), dtype=np.float64)
    sh[:, :, 0] = rgb_to_dc(rgb)
    return sh


def random_scene(count: int = 1000, seed: int = 0, extent: float = 3.0,
                 scale_range: tuple[float, float] = (0.05, 0.4),
                 opacity_range: tuple[float, float] = (0.2, 1.0),
                 sh_degree: int = 3) -> GaussianScene:
    """Uniform particle cloud in [-extent, extent]^3 around the origin."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    means = rng.uniform(-extent, extent, size=(count, 3))
    quats = rng.standard_normal((count, 4))
    quats /= np.linalg.norm(quats, axis=1, keepdims=True)
    lo, hi = scale_range
    scales = np.exp(rng.uniform(np.log(lo), np.log(hi), size=(count, 3)))
    opacities = rng.uniform(*opacity_range, size=count)
    sh = _dc_coeffs(rng.uniform(0.0, 1.0, size=(count, 3)))
    if sh_degree > 0:
        n_rest = (sh_degree + 1) ** 2 - 1
        sh[:, :, 1:1 + n_rest] = 0.05 * rng.standard_normal((count, 3, n_rest))
    return GaussianScene(means=means, rotations=quats, scales=scales,
                         opacities=opacities, sh_coeffs=sh,
                         sh_degree=sh_degree)


def smooth_scene(count: int = 48, seed: int = 11, radius: float = 5.0,
                 center=(0.0, 0.0, 0.0)) -> GaussianScene:
    """Large soft particles surrounding ``center``; renders are smooth.

    Particle extents overlap heavily, so radiance varies slowly in
    every direction and edge texels differ from their neighbors no
    more than interior ones do.
    """
    rng = np.random.default_rng(seed)
    center = np.asarray(center, dtype=np.float64)
    dirs = rng.standard_normal((count, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    means = center + dirs * rng.uniform(0.5 * radius, radius, size=(count, 1))
    quats = rng.standard_normal((count, 4))
    quats /= np.linalg.norm(quats, axis=1, keepdims=True)
    base = rng.uniform(1.5, 3.0, size=(count, 1))
    scales = base * rng.uniform(0.8, 1.25, size=(count, 3))
    opacities = rng.uniform(0.3, 0.7, size=count)
    sh = _dc_coeffs(rng.uniform(0.3, 0.9, size=(count, 3)))
    return GaussianScene(means=means, rotations=quats, scales=scales,
                         opacities=opacities, sh_coeffs=sh, sh_degree=0)


def seam_stress_scene(count: int = 200, seed: int = 7,
                      radius: tuple[float, float] = (2.5, 4.0),
                      center=(0.0, 0.0, 0.0)) -> GaussianScene:
    """Anisotropic particles crossing the cube-edge directions.

    Each particle sits within 8 degrees of one of the 12 edge planes
    of a cube centered on ``center`` (where a probe is meant to be
    placed) and more than 20 degrees off both adjacent face axes, with
    its long axis in the tangent plane at roughly 45 degrees to the
    edge and a 3:1 or stronger axis ratio. A per-face splatter
    linearizes each particle's projection around the two face centers
    separately, and elongated footprints at a slant make those two
    linearizations disagree most where the faces meet; a ray tracer
    renders the same particles seamlessly.
    """
    rng = np.random.default_rng(seed)
    center = np.asarray(center, dtype=np.float64)
    means = np.empty((count, 3))
    mats = np.empty((count, 3, 3))
    scales = np.empty((count, 3))
    axes = np.eye(3)

    for i in range(count):
        edge = EDGES[rng.integers(len(EDGES))]
        axis_a, sign_a = _AXIS_OF[edge.face_a]
        axis_b, sign_b = _AXIS_OF[edge.face_b]
        axis_c = 3 - axis_a - axis_b
        d0 = np.zeros(3)
        d0[axis_a] = sign_a
        d0[axis_b] = sign_b
        d0[axis_c] = rng.uniform(-0.7, 0.7)
        d0 = _unit(d0)
        # Tilt off the edge plane by at most 8 degrees; both face axes
        # then stay at least (45 - 8) degrees away from the center.
        n = _unit(sign_b * axes[axis_a] - sign_a * axes[axis_b])
        psi = np.deg2rad(rng.uniform(-8.0, 8.0))
        d = np.cos(psi) * d0 + np.sin(psi) * n

        # Tangent frame: tau along the edge, b completing it.
        tau = _unit(axes[axis_c] - np.dot(axes[axis_c], d) * d)
        b = _unit(np.cross(d, tau))
        phi = rng.choice([-1.0, 1.0]) * np.deg2rad(45.0 + rng.uniform(-10, 10))
        long_axis = np.cos(phi) * tau + np.sin(phi) * b
        short_axis = -np.sin(phi) * tau + np.cos(phi) * b

        means[i] = center + rng.uniform(*radius) * d
        mats[i] = np.column_stack(
            [long_axis, short_axis, np.cross(long_axis, short_axis)])
        s_long = rng.uniform(0.5, 0.9)
        ratio = rng.uniform(3.0, 6.0)
        scales[i] = (s_long, s_long / ratio, rng.uniform(0.08, 0.15))

    quats = _quat_from_matrix(mats)
    opacities = rng.uniform(0.6, 0.95, size=count)
    sh = _dc_coeffs(rng.uniform(0.2, 1.0, size=(count, 3)))
    return GaussianScene(means=means, rotations=quats, scales=scales,
                         opacities=opacities, sh_coeffs=sh, sh_degree=0)


SCENE_KINDS = {
    "random": random_scene,
    "smooth": smooth_scene,
    "seam-stress": seam_stress_scene,
}


def make_scene(kind: str, count: int | None = None,
               seed: int | None = None) -> GaussianScene:
    """Build one of the named synthetic scenes; None keeps defaults."""
    if kind not in SCENE_KINDS:
        raise ValueError(
            f"unknown scene kind {kind!r}; expected one of {sorted(SCENE_KINDS)}")
    kwargs = {}
    if count is not None:
        kwargs["count"] = count
    if seed is not None:
        kwargs["seed"] = seed
    return SCENE_KINDS[kind](**kwargs)
