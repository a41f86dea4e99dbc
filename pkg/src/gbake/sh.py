"""Real spherical harmonics up to degree 3 for view-dependent radiance.

Coefficients are stored degree-major: index 0 is the DC term, 1..3 are
degree 1, 4..8 degree 2, 9..15 degree 3. Colors decode as
``0.5 + sum(c_k * Y_k(dir))`` per channel, clamped below at zero; the
upper clamp to [0, 1] happens only at image quantization.
"""

from __future__ import annotations

import numpy as np

# Normalization constants of the real SH basis, degree 0 through 3.
C0 = 0.28209479177387814
C1 = 0.4886025119029199
C2 = (
    1.0925484305920792,
    -1.0925484305920792,
    0.31539156525252005,
    -1.0925484305920792,
    0.5462742152960396,
)
C3 = (
    -0.5900435899266435,
    2.890611442640554,
    -0.4570457994644658,
    0.3731763325901154,
    -0.4570457994644658,
    1.445305721320277,
    -0.5900435899266435,
)

N_COEFFS = 16  # (3 + 1)^2


def num_coeffs(degree: int) -> int:
    """Number of basis functions for a maximum degree in [0, 3]."""
    if not 0 <= degree <= 3:
        raise ValueError(f"SH degree must be in [0, 3], got {degree}")
    return (degree + 1) ** 2


def sh_basis(dirs: np.ndarray) -> np.ndarray:
    """Evaluate all 16 basis functions at unit directions.

    dirs: (..., 3) unit vectors. Returns (..., 16).
    """
    dirs = np.asarray(dirs, dtype=np.float64)
    x = dirs[..., 0]
    y = dirs[..., 1]
    z = dirs[..., 2]
    out = np.empty(dirs.shape[:-1] + (N_COEFFS,), dtype=np.float64)
    out[..., 0] = C0
    out[..., 1] = -C1 * y
    out[..., 2] = C1 * z
    out[..., 3] = -C1 * x
    xx, yy, zz = x * x, y * y, z * z
    xy, yz, xz = x * y, y * z, x * z
    out[..., 4] = C2[0] * xy
    out[..., 5] = C2[1] * yz
    out[..., 6] = C2[2] * (2.0 * zz - xx - yy)
    out[..., 7] = C2[3] * xz
    out[..., 8] = C2[4] * (xx - yy)
    out[..., 9] = C3[0] * y * (3.0 * xx - yy)
    out[..., 10] = C3[1] * xy * z
    out[..., 11] = C3[2] * y * (4.0 * zz - xx - yy)
    out[..., 12] = C3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy)
    out[..., 13] = C3[4] * x * (4.0 * zz - xx - yy)
    out[..., 14] = C3[5] * z * (xx - yy)
    out[..., 15] = C3[6] * x * (xx - 3.0 * yy)
    return out


def sh_color(sh_coeffs: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Decode linear RGB radiance from SH coefficients at unit directions.

    sh_coeffs: (..., 3, 16), zero-padded beyond the scene's actual degree.
    dirs: (..., 3) unit vectors, broadcast-compatible with the coefficient
    batch dims. Returns (..., 3) linear RGB, clamped below at 0 and
    unclamped above.
    """
    sh_coeffs = np.asarray(sh_coeffs, dtype=np.float64)
    basis = sh_basis(dirs)
    rgb = 0.5 + np.einsum("...ck,...k->...c", sh_coeffs, basis)
    return np.maximum(rgb, 0.0)


def rgb_to_dc(rgb: np.ndarray) -> np.ndarray:
    """Inverse of the DC-only decode: coefficients that reproduce ``rgb``."""
    return (np.asarray(rgb, dtype=np.float64) - 0.5) / C0
