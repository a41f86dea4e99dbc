"""Gaussian scene container: activations, covariances, bounds.

A scene is a structure-of-arrays collection of anisotropic 3D Gaussians.
Each particle carries a mean, a scalar-first unit quaternion, positive
per-axis standard deviations, an opacity in (0, 1], and 16 SH color
coefficients per channel (zero-padded below degree 3). The inverse
covariances used by the renderers are precomputed at construction as
R diag(1/s^2) R^T, which is stable for any anisotropy; the covariance
itself is never inverted numerically.

Scenes are immutable after construction (arrays are write-protected) so
render workers can share them freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np
from scipy.special import expit

from . import sh as _sh
from .errors import EmptySceneError
from . import plyio

MIN_OPACITY = 1.0 / 255.0  # below output quantization; culled at load


@dataclass(frozen=True)
class GaussianParticle:
    """One anisotropic Gaussian: mean, orientation, scale, opacity, color."""

    mean: np.ndarray          # (3,)
    rotation: np.ndarray      # (4,) unit quaternion, scalar first
    scale: np.ndarray         # (3,) positive standard deviations
    opacity: float            # in (0, 1]
    sh_coeffs: np.ndarray     # (3, 16)


def quat_to_rotmat(q: np.ndarray) -> np.ndarray:
    """Rotation matrices from scalar-first unit quaternions; (..., 4) -> (..., 3, 3)."""
    q = np.asarray(q, dtype=np.float64)
    w, x, y, z = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    m = np.empty(q.shape[:-1] + (3, 3), dtype=np.float64)
    m[..., 0, 0] = 1.0 - 2.0 * (y * y + z * z)
    m[..., 0, 1] = 2.0 * (x * y - w * z)
    m[..., 0, 2] = 2.0 * (x * z + w * y)
    m[..., 1, 0] = 2.0 * (x * y + w * z)
    m[..., 1, 1] = 1.0 - 2.0 * (x * x + z * z)
    m[..., 1, 2] = 2.0 * (y * z - w * x)
    m[..., 2, 0] = 2.0 * (x * z - w * y)
    m[..., 2, 1] = 2.0 * (y * z + w * x)
    m[..., 2, 2] = 1.0 - 2.0 * (x * x + y * y)
    return m


def covariance(rotation: np.ndarray, scale: np.ndarray) -> np.ndarray:
    """3x3 covariance R diag(s^2) R^T of one particle.

    ``rotation`` must be unit-norm and ``scale`` strictly positive.
    """
    rotation = np.asarray(rotation, dtype=np.float64)
    scale = np.asarray(scale, dtype=np.float64)
    if abs(np.linalg.norm(rotation) - 1.0) > 1e-6:
        raise ValueError("rotation quaternion must be unit-norm")
    if np.any(scale <= 0.0):
        raise ValueError("scale components must be positive")
    r = quat_to_rotmat(rotation)
    return (r * scale**2) @ r.T


def _inverse_covariances(rotations: np.ndarray, scales: np.ndarray) -> np.ndarray:
    """Batched R diag(1/s^2) R^T; (N,4), (N,3) -> (N,3,3)."""
    r = quat_to_rotmat(rotations)
    inv_s2 = 1.0 / scales**2
    return np.einsum("nij,nj,nkj->nik", r, inv_s2, r)


def _sigma_diagonals(rotations: np.ndarray, scales: np.ndarray) -> np.ndarray:
    """Diagonal of each covariance without forming the full matrix; (N,3)."""
    r = quat_to_rotmat(rotations)
    return np.einsum("nij,nj->ni", r**2, scales**2)


class GaussianScene:
    """Immutable structure-of-arrays collection of Gaussian particles.

    Attributes
    ----------
    means : (N,3) float64
    rotations : (N,4) float64, normalized
    scales : (N,3) float64, positive
    opacities : (N,) float64 in (0, 1]
    sh_coeffs : (N,3,16) float64, zero-padded per channel
    sh_degree : int in [0,3]
    inv_cov : (N,3,3) float64 precomputed inverse covariances
    world_aabb : (2,3) float64 bounds of all mean +- 3 sigma boxes
    dropped_low_opacity : particles culled at load for opacity < 1/255
    """

    def __init__(
        self,
        means: np.ndarray,
        rotations: np.ndarray,
        scales: np.ndarray,
        opacities: np.ndarray,
        sh_coeffs: np.ndarray,
        sh_degree: int,
        dropped_low_opacity: int = 0,
    ):
        means = np.ascontiguousarray(means, dtype=np.float64)
        rotations = np.ascontiguousarray(rotations, dtype=np.float64)
        scales = np.ascontiguousarray(scales, dtype=np.float64)
        opacities = np.ascontiguousarray(opacities, dtype=np.float64)
        sh_coeffs = np.ascontiguousarray(sh_coeffs, dtype=np.float64)

        n = means.shape[0]
        if means.shape != (n, 3) or rotations.shape != (n, 4) \
                or scales.shape != (n, 3) or opacities.shape != (n,) \
                or sh_coeffs.shape != (n, 3, 16):
            raise ValueError("inconsistent scene array shapes")
        if not 0 <= sh_degree <= 3:
            raise ValueError(f"sh_degree must be in [0, 3], got {sh_degree}")

        norms = np.linalg.norm(rotations, axis=1)
        if np.any(norms == 0.0) or not np.all(np.isfinite(norms)):
            raise ValueError("rotation quaternions must be nonzero and finite")
        rotations = rotations / norms[:, None]
        if np.any(scales <= 0.0):
            raise ValueError("scale components must be positive")
        if np.any(opacities <= 0.0) or np.any(opacities > 1.0):
            raise ValueError("opacities must lie in (0, 1]")

        self.means = means
        self.rotations = rotations
        self.scales = scales
        self.opacities = opacities
        self.sh_coeffs = sh_coeffs
        self.sh_degree = int(sh_degree)
        self.dropped_low_opacity = int(dropped_low_opacity)

        self.inv_cov = _inverse_covariances(rotations, scales)
        half = 3.0 * np.sqrt(_sigma_diagonals(rotations, scales))
        if n > 0:
            self.world_aabb = np.stack(
                [(means - half).min(axis=0), (means + half).max(axis=0)]
            )
        else:
            # Zero-particle scenes are legal in memory (renderers emit
            # pure background); only file loading insists on content.
            self.world_aabb = np.zeros((2, 3))

        for arr in (self.means, self.rotations, self.scales, self.opacities,
                    self.sh_coeffs, self.inv_cov, self.world_aabb):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return self.means.shape[0]

    def particle(self, i: int) -> GaussianParticle:
        """Materialize one particle as a standalone value."""
        return GaussianParticle(
            mean=self.means[i].copy(),
            rotation=self.rotations[i].copy(),
            scale=self.scales[i].copy(),
            opacity=float(self.opacities[i]),
            sh_coeffs=self.sh_coeffs[i].copy(),
        )

    def __iter__(self) -> Iterator[GaussianParticle]:
        return (self.particle(i) for i in range(len(self)))

    @classmethod
    def from_particles(cls, particles: list[GaussianParticle],
                       sh_degree: int = 3) -> "GaussianScene":
        if not particles:
            raise EmptySceneError("scene has no particles")
        return cls(
            means=np.stack([p.mean for p in particles]),
            rotations=np.stack([p.rotation for p in particles]),
            scales=np.stack([p.scale for p in particles]),
            opacities=np.array([p.opacity for p in particles]),
            sh_coeffs=np.stack([p.sh_coeffs for p in particles]),
            sh_degree=sh_degree,
        )


def load_ply(path: str | Path) -> GaussianScene:
    """Load a trained scene from its PLY checkpoint.

    Applies the storage activations (logistic opacity, exp scale,
    quaternion normalization) and culls particles whose activated
    opacity falls below 1/255; the culled count is kept on the scene.
    """
    raw = plyio.read_gaussian_ply(path)
    opacities = expit(raw["opacities"])
    scales = np.exp(raw["scales"])
    keep = opacities >= MIN_OPACITY
    dropped = int(np.count_nonzero(~keep))
    if not np.any(keep):
        raise EmptySceneError(f"{path}: no particles remain after opacity culling")
    return GaussianScene(
        means=raw["means"][keep],
        rotations=raw["rotations"][keep],
        scales=scales[keep],
        opacities=opacities[keep],
        sh_coeffs=raw["sh_coeffs"][keep],
        sh_degree=raw["sh_degree"],
        dropped_low_opacity=dropped,
    )


def save_ply(scene: GaussianScene, path: str | Path) -> None:
    """Persist a scene in the standard checkpoint layout (inverse activations)."""
    # Clip away the closed upper endpoint: logit(1) is infinite and the
    # file stores float32.
    p = np.clip(scene.opacities, 1e-7, 1.0 - 1e-7)
    logit = np.log(p) - np.log1p(-p)
    plyio.write_gaussian_ply(
        path,
        means=scene.means,
        rotations=scene.rotations,
        scales_log=np.log(scene.scales),
        opacities_logit=logit,
        sh_coeffs=scene.sh_coeffs,
        sh_degree=scene.sh_degree,
    )


def sh_color(sh_coeffs: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """View-dependent linear RGB at unit directions (see :mod:`gbake.sh`)."""
    return _sh.sh_color(sh_coeffs, dirs)
