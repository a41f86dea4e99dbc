"""EWA splatting rasterizer used as the seam comparator.

Projects each 3D Gaussian to a 2D image-plane footprint through the
perspective Jacobian evaluated at the particle mean (the classic local
affine approximation), then alpha-blends footprints in depth order.
That per-camera linearization is exactly what makes footprints of one
particle disagree between two cameras that share an origin, so faces
rasterized this way show discontinuities along cube edges that the ray
tracer does not.

This is a correctness comparator, not a speed contender: one global
depth sort per view, no tiling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .camera import Camera
from .raytrace import RenderSettings
from .scene import GaussianParticle, GaussianScene, covariance, quat_to_rotmat
from . import sh as _sh

DEFAULT_DILATION = 0.3  # px^2 added to the footprint diagonal (low-pass)
DEFAULT_NEAR = 0.01
ALPHA_CLIP = 0.999  # guard against one splat fully occluding everything behind


@dataclass(frozen=True, eq=False)
class ProjectedSplat:
    """One particle's 2D footprint in a specific view."""

    center_px: np.ndarray     # (2,) pixel coordinates
    cov2d: np.ndarray         # (2, 2) pixels^2, includes dilation
    depth: float              # camera-space z
    alpha_peak: float
    rgb: np.ndarray           # (3,) linear RGB toward the particle


def _to_camera(camera: Camera, points: np.ndarray) -> np.ndarray:
    """World points -> camera frame (x right, y up, z forward)."""
    rel = points - camera.origin
    basis = np.stack([camera.right, camera.up, camera.forward])
    return rel @ basis.T


def project_particle(particle: GaussianParticle, camera: Camera, fres: int,
                     dilation: float = DEFAULT_DILATION,
                     near: float = DEFAULT_NEAR) -> ProjectedSplat | None:
    """Project one particle; None when it lies at or behind the near plane."""
    if fres < 1:
        raise ValueError(f"face resolution must be >= 1, got {fres}")
    p_cam = _to_camera(camera, particle.mean[None, :])[0]
    x, y, z = p_cam
    if z <= near:
        return None
    focal = fres / 2.0  # tan(FOV/2) = 1
    center = np.array([fres / 2.0 + focal * x / z,
                       fres / 2.0 - focal * y / z])
    # Jacobian of the pixel map at the mean; rows are d(px)/d(cam xyz).
    jac = np.array([
        [focal / z, 0.0, -focal * x / (z * z)],
        [0.0, -focal / z, focal * y / (z * z)],
    ])
    basis = np.stack([camera.right, camera.up, camera.forward])
    cov_cam = basis @ covariance(particle.rotation, particle.scale) @ basis.T
    cov2d = jac @ cov_cam @ jac.T + dilation * np.eye(2)
    view_dir = particle.mean - camera.origin
    view_dir = view_dir / np.linalg.norm(view_dir)
    return ProjectedSplat(
        center_px=center,
        cov2d=cov2d,
        depth=float(z),
        alpha_peak=float(particle.opacity),
        rgb=_sh.sh_color(particle.sh_coeffs, view_dir),
    )


def _project_scene(scene: GaussianScene, camera: Camera, fres: int,
                   dilation: float, near: float):
    """Vectorized projection of every particle; returns arrays + keep mask."""
    p_cam = _to_camera(camera, scene.means)
    z = p_cam[:, 2]
    keep = z > near
    x, y, zk = p_cam[keep, 0], p_cam[keep, 1], z[keep]
    focal = fres / 2.0
    centers = np.stack([fres / 2.0 + focal * x / zk,
                        fres / 2.0 - focal * y / zk], axis=1)
    jac = np.zeros((zk.shape[0], 2, 3))
    jac[:, 0, 0] = focal / zk
    jac[:, 0, 2] = -focal * x / (zk * zk)
    jac[:, 1, 1] = -focal / zk
    jac[:, 1, 2] = focal * y / (zk * zk)
    basis = np.stack([camera.right, camera.up, camera.forward])
    rot = quat_to_rotmat(scene.rotations[keep])
    m = (basis @ rot) * scene.scales[keep][:, None, :]  # B R S
    cov_cam = m @ m.transpose(0, 2, 1)
    cov2d = jac @ cov_cam @ jac.transpose(0, 2, 1)
    cov2d[:, 0, 0] += dilation
    cov2d[:, 1, 1] += dilation
    view = scene.means[keep] - camera.origin
    view /= np.linalg.norm(view, axis=1, keepdims=True)
    rgb = _sh.sh_color(scene.sh_coeffs[keep], view)
    return np.flatnonzero(keep), centers, cov2d, zk, scene.opacities[keep], rgb


def rasterize_view(camera: Camera, fres: int, scene: GaussianScene,
                   settings: RenderSettings = RenderSettings(),
                   dilation: float = DEFAULT_DILATION,
                   near: float = DEFAULT_NEAR) -> np.ndarray:
    """Rasterize an F x F linear RGB view by splatting.

    Splats are blended front to back in (depth, particle index) order;
    each splat touches the pixels inside its 3-sigma footprint
    rectangle. Compositing matches the ray tracer's transmittance
    behavior: pixels whose transmittance fell below the floor accept no
    further contributions, and the background is composited last.
    """
    if fres < 1:
        raise ValueError(f"face resolution must be >= 1, got {fres}")
    indices, centers, cov2d, depth, alpha_peak, rgb = _project_scene(
        scene, camera, fres, dilation, near)
    order = np.lexsort((indices, depth))

    color = np.zeros((fres, fres, 3))
    trans = np.ones((fres, fres))
    half = np.arange(fres) + 0.5  # pixel centers

    for k in order:
        cx, cy = centers[k]
        a, b_, c = cov2d[k, 0, 0], cov2d[k, 0, 1], cov2d[k, 1, 1]
        det = a * c - b_ * b_
        if det <= 0.0 or a <= 0.0:
            continue  # degenerate footprint (possible only with zero dilation)
        rx = 3.0 * np.sqrt(a)
        ry = 3.0 * np.sqrt(c)
        i0 = max(int(np.ceil(cx - rx - 0.5)), 0)
        i1 = min(int(np.floor(cx + rx - 0.5)), fres - 1)
        j0 = max(int(np.ceil(cy - ry - 0.5)), 0)
        j1 = min(int(np.floor(cy + ry - 0.5)), fres - 1)
        if i0 > i1 or j0 > j1:
            continue
        dx = half[i0:i1 + 1] - cx
        dy = half[j0:j1 + 1] - cy
        # quadratic form delta^T cov2d^-1 delta via the adjugate
        qf = (c * dx[None, :] ** 2
              - 2.0 * b_ * dy[:, None] * dx[None, :]
              + a * dy[:, None] ** 2) / det
        alpha = alpha_peak[k] * np.exp(-0.5 * qf)
        np.minimum(alpha, ALPHA_CLIP, out=alpha)
        t_sub = trans[j0:j1 + 1, i0:i1 + 1]
        live = (alpha >= settings.alpha_floor) & (t_sub >= settings.transmittance_floor)
        if not live.any():
            continue
        w = np.where(live, alpha * t_sub, 0.0)
        color[j0:j1 + 1, i0:i1 + 1] += w[:, :, None] * rgb[k]
        trans[j0:j1 + 1, i0:i1 + 1] = np.where(live, t_sub * (1.0 - alpha), t_sub)

    color += trans[:, :, None] * settings.background_array
    return color
