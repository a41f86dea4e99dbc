"""Ray-traced volume rendering of a Gaussian scene.

Each particle contributes its maximum opacity along the ray: the peak
depth has the closed form t* = ((mu - o)^T S^-1 d) / (d^T S^-1 d) for
inverse covariance S^-1, and alpha is the Gaussian evaluated there
times the particle opacity. Hits are composited front to back in
(t_peak, particle index) order. A pixel's color is a function of the
ray alone, never of the camera basis that produced it, which is what
makes cubemap faces meet seamlessly.

Rendering is embarrassingly parallel over pixels: a worker pool splits
rows across threads running the nogil compiled kernels, and since each
ray is computed independently the image bits never depend on the
worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bvh import Bvh
from .camera import Camera, pixel_directions
from .scene import GaussianScene

DEFAULT_T_MIN = 1e-4  # keeps particles straddling the origin from peaking backward


@dataclass(frozen=True, eq=False)
class Ray:
    """Origin + unit direction + minimum depth."""

    origin: np.ndarray
    direction: np.ndarray
    t_min: float = DEFAULT_T_MIN

    def __post_init__(self):
        o = np.ascontiguousarray(self.origin, dtype=np.float64)
        d = np.ascontiguousarray(self.direction, dtype=np.float64)
        if o.shape != (3,) or d.shape != (3,):
            raise ValueError("ray origin and direction must be 3-vectors")
        if abs(np.linalg.norm(d) - 1.0) > 1e-9:
            raise ValueError("ray direction must be unit-norm")
        if self.t_min < 0.0:
            raise ValueError("t_min must be >= 0")
        object.__setattr__(self, "origin", o)
        object.__setattr__(self, "direction", d)


@dataclass(frozen=True)
class HitRecord:
    """One particle's peak response to a ray."""

    particle_index: int
    t_peak: float
    alpha: float
    rgb: tuple[float, float, float]


@dataclass(frozen=True)
class RenderSettings:
    """Compositing constants shared by both renderers."""

    transmittance_floor: float = 1e-4
    alpha_floor: float = 1.0 / 255.0
    background: tuple[float, float, float] = (0.0, 0.0, 0.0)
    sigma_cut: float = 3.0

    def __post_init__(self):
        if not 0.0 < self.transmittance_floor < 1.0:
            raise ValueError("transmittance_floor must be in (0, 1)")
        if not 0.0 < self.alpha_floor < 1.0:
            raise ValueError("alpha_floor must be in (0, 1)")
        if self.sigma_cut <= 0.0:
            raise ValueError("sigma_cut must be positive")
        object.__setattr__(self, "background", tuple(float(c) for c in self.background))

    @property
    def background_array(self) -> np.ndarray:
        return np.array(self.background, dtype=np.float64)


def particle_response(ray: Ray, scene: GaussianScene, index: int,
                      settings: RenderSettings = RenderSettings()) -> HitRecord | None:
    """Peak response of one particle, or None when it contributes nothing.

    The record depends only on the ray's (origin, direction); no camera
    is involved anywhere downstream of ray construction.
    """
    o, d = ray.origin, ray.direction
    ok, t_peak, alpha = _kernels.response(
        o[0], o[1], o[2], d[0], d[1], d[2],
        scene.means, scene.inv_cov, scene.opacities, index,
        ray.t_min, settings.alpha_floor, settings.sigma_cut * settings.sigma_cut,
    )
    if not ok:
        return None
    basis = np.empty(16, dtype=np.float64)
    _kernels.sh_basis16(d[0], d[1], d[2], basis)
    rgb = _kernels.sh_rgb16(scene.sh_coeffs, index, basis)
    return HitRecord(particle_index=index, t_peak=float(t_peak),
                     alpha=float(alpha), rgb=rgb)


def _check_cut(settings: RenderSettings, bvh: Bvh) -> None:
    if settings.sigma_cut > bvh.sigma_cut:
        raise ValueError(
            f"settings.sigma_cut={settings.sigma_cut} exceeds the BVH's "
            f"box cut {bvh.sigma_cut}; boxes would no longer cover the "
            f"response region"
        )


def trace_rays(origins: np.ndarray, dirs: np.ndarray, scene: GaussianScene,
               bvh: Bvh | None, settings: RenderSettings = RenderSettings(),
               t_min: float = DEFAULT_T_MIN,
               workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Trace a batch of rays; returns (R,3) linear RGB and (R,) transmittance.

    ``bvh`` may be None only for an empty scene, which needs no tree:
    every ray escapes to the background at full transmittance.
    """
    origins = np.ascontiguousarray(origins, dtype=np.float64)
    dirs = np.ascontiguousarray(dirs, dtype=np.float64)
    n_rays = origins.shape[0]
    if len(scene) == 0:
        return (np.tile(settings.background_array, (n_rays, 1)),
                np.ones(n_rays))
    if bvh is None:
        raise ValueError("a BVH is required for a non-empty scene")
    _check_cut(settings, bvh)
    out_rgb = np.empty((n_rays, 3), dtype=np.float64)
    out_trans = np.empty(n_rays, dtype=np.float64)
    sigma_cut2 = settings.sigma_cut * settings.sigma_cut
    bg = settings.background_array

    def run(lo: int, hi: int) -> None:
        _kernels.trace_batch_bvh(
            origins[lo:hi], dirs[lo:hi], t_min,
            bvh.bounds_min, bvh.bounds_max, bvh.left, bvh.right,
            bvh.leaf_start, bvh.leaf_count, bvh.prim_index,
            scene.means, scene.inv_cov, scene.opacities, scene.sh_coeffs,
            settings.alpha_floor, sigma_cut2, settings.transmittance_floor,
            bg, out_rgb[lo:hi], out_trans[lo:hi])

    _run_chunked(run, n_rays, workers)
    return out_rgb, out_trans


def trace_rays_bruteforce(origins: np.ndarray, dirs: np.ndarray,
                          scene: GaussianScene,
                          settings: RenderSettings = RenderSettings(),
                          t_min: float = DEFAULT_T_MIN) -> tuple[np.ndarray, np.ndarray]:
    """Reference path: same responses and compositing, no acceleration."""
    origins = np.ascontiguousarray(origins, dtype=np.float64)
    dirs = np.ascontiguousarray(dirs, dtype=np.float64)
    n_rays = origins.shape[0]
    out_rgb = np.empty((n_rays, 3), dtype=np.float64)
    out_trans = np.empty(n_rays, dtype=np.float64)
    _kernels.trace_batch_brute(
        origins, dirs, t_min,
        scene.means, scene.inv_cov, scene.opacities, scene.sh_coeffs,
        settings.alpha_floor, settings.sigma_cut * settings.sigma_cut,
        settings.transmittance_floor, settings.background_array,
        out_rgb, out_trans)
    return out_rgb, out_trans


def trace(ray: Ray, scene: GaussianScene, bvh: Bvh | None,
          settings: RenderSettings = RenderSettings()) -> tuple[np.ndarray, float]:
    """Trace one ray; returns (linear RGB (3,), final transmittance)."""
    rgb, trans = trace_rays(ray.origin[None, :], ray.direction[None, :],
                            scene, bvh, settings, t_min=ray.t_min)
    return rgb[0], float(trans[0])


def trace_bruteforce(ray: Ray, scene: GaussianScene,
                     settings: RenderSettings = RenderSettings()) -> tuple[np.ndarray, float]:
    """Brute-force counterpart of :func:`trace` for oracle comparisons."""
    rgb, trans = trace_rays_bruteforce(ray.origin[None, :],
                                       ray.direction[None, :],
                                       scene, settings, t_min=ray.t_min)
    return rgb[0], float(trans[0])


def render_view(camera: Camera, fres: int, scene: GaussianScene,
                bvh: Bvh | None,
                settings: RenderSettings = RenderSettings(),
                workers: int = 1) -> np.ndarray:
    """Render an F x F linear RGB view (90-degree square frustum)."""
    if fres < 1:
        raise ValueError(f"face resolution must be >= 1, got {fres}")
    dirs = pixel_directions(camera, fres).reshape(-1, 3)
    origins = np.broadcast_to(camera.origin, dirs.shape)
    rgb, _ = trace_rays(np.ascontiguousarray(origins), dirs, scene, bvh,
                        settings, workers=workers)
    return rgb.reshape(fres, fres, 3)


def _run_chunked(run, n: int, workers: int) -> None:
    """Split [0, n) into contiguous chunks and execute, possibly threaded."""
    if workers <= 1 or n < 2:
        run(0, n)
        return
    n_chunks = min(workers, n)
    bounds = np.linspace(0, n, n_chunks + 1, dtype=np.int64)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run, int(bounds[k]), int(bounds[k + 1]))
                   for k in range(n_chunks)]
        for fut in futures:
            fut.result()
