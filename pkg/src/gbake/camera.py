"""Pinhole cameras with a 90-degree square frustum and the six cube-face bases.

All views use tan(FOV/2) = 1 on both axes, so six faces sharing an
origin tile the full sphere exactly. Pixel (i, j) of an F x F view maps
to the direction ``normalize(u * right + v * up + forward)`` with

    u = (2*i + 1 - F) / F        (u right, column index i)
    v = (F - 2*j - 1) / F        (v up, row index j counts down)

The numerators are exact integers, so u and v negate exactly under
index reflection; rolled or re-based cameras that address the same
direction therefore produce bit-identical rays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FACE_KEYS = ("px", "nx", "py", "ny", "pz", "nz")

# Conventional cube-texture bases: forward, up, right per face.
_FACE_BASES: dict[str, tuple[tuple[float, float, float], ...]] = {
    #        right            up               forward
    "px": ((0.0, 0.0, -1.0), (0.0, 1.0, 0.0), (1.0, 0.0, 0.0)),
    "nx": ((0.0, 0.0, 1.0), (0.0, 1.0, 0.0), (-1.0, 0.0, 0.0)),
    "py": ((1.0, 0.0, 0.0), (0.0, 0.0, -1.0), (0.0, 1.0, 0.0)),
    "ny": ((1.0, 0.0, 0.0), (0.0, 0.0, 1.0), (0.0, -1.0, 0.0)),
    "pz": ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),
    "nz": ((-1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, -1.0)),
}


def face_basis(key: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthonormal (right, up, forward) for one cube face key."""
    try:
        r, u, f = _FACE_BASES[key]
    except KeyError:
        raise ValueError(f"unknown cube face key {key!r}; expected one of {FACE_KEYS}")
    return np.array(r), np.array(u), np.array(f)


@dataclass(frozen=True, eq=False)
class Camera:
    """Origin plus a right-handed orthonormal basis (right x up = forward)."""

    origin: np.ndarray
    right: np.ndarray
    up: np.ndarray
    forward: np.ndarray

    def __post_init__(self):
        for name in ("origin", "right", "up", "forward"):
            v = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            if v.shape != (3,):
                raise ValueError(f"camera {name} must be a 3-vector")
            object.__setattr__(self, name, v)
        b = np.stack([self.right, self.up, self.forward])
        if not np.allclose(b @ b.T, np.eye(3), atol=1e-9):
            raise ValueError("camera basis must be orthonormal")

    @classmethod
    def for_face(cls, origin: np.ndarray, key: str) -> "Camera":
        r, u, f = face_basis(key)
        return cls(origin=np.asarray(origin, dtype=np.float64),
                   right=r, up=u, forward=f)


def pixel_coords(fres: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel (u, v) frustum coordinates for an F x F view.

    Returns ``u`` (F,) indexed by column and ``v`` (F,) indexed by row.
    """
    if fres < 1:
        raise ValueError(f"face resolution must be >= 1, got {fres}")
    idx = np.arange(fres, dtype=np.float64)
    u = (2.0 * idx + 1.0 - fres) / fres
    v = (fres - 2.0 * idx - 1.0) / fres
    return u, v


def pixel_directions(camera: Camera, fres: int) -> np.ndarray:
    """Unit ray directions of every pixel; returns (F, F, 3), row-major."""
    u, v = pixel_coords(fres)
    d = (u[None, :, None] * camera.right
         + v[:, None, None] * camera.up
         + camera.forward)
    return normalize_dirs(d)


def normalize_dirs(d: np.ndarray) -> np.ndarray:
    """Normalize direction vectors along the last axis."""
    norms = np.linalg.norm(d, axis=-1, keepdims=True)
    if not np.all(norms > 0.0):
        raise ValueError("cannot normalize a zero-length direction")
    return d / norms
