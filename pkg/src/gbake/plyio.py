"""Binary PLY I/O for trained Gaussian-splat scenes.

Reads and writes the de-facto export layout of 3DGS training runs:
binary little-endian, a single ``vertex`` element with float properties
x, y, z, nx, ny, nz, f_dc_0..2, f_rest_0..N, opacity (raw logit),
scale_0..2 (raw log), rot_0..3 (unnormalized scalar-first quaternion).
``f_rest`` holds the higher-degree SH coefficients channel-major (all
of channel 0, then 1, then 2) and may be absent for DC-only scenes.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .errors import PlyFormatError, SceneDataError

_PLY_TYPES = {
    "float": "<f4",
    "float32": "<f4",
    "double": "<f8",
    "float64": "<f8",
    "uchar": "u1",
    "uint8": "u1",
    "char": "i1",
    "int8": "i1",
    "short": "<i2",
    "int16": "<i2",
    "ushort": "<u2",
    "uint16": "<u2",
    "int": "<i4",
    "int32": "<i4",
    "uint": "<u4",
    "uint32": "<u4",
}

REQUIRED_PROPERTIES = (
    "x",
    "y",
    "z",
    "f_dc_0",
    "f_dc_1",
    "f_dc_2",
    "opacity",
    "scale_0",
    "scale_1",
    "scale_2",
    "rot_0",
    "rot_1",
    "rot_2",
    "rot_3",
)

# f_rest property counts for SH degrees 0..3 (3 channels x ((d+1)^2 - 1)).
_REST_COUNTS = {0: 0, 9: 1, 24: 2, 45: 3}


def _parse_header(fh: io.BufferedReader, path: Path) -> tuple[int, list[str], np.dtype]:
    line = fh.readline()
    if line.strip() != b"ply":
        raise PlyFormatError(f"{path}: not a PLY file (missing 'ply' magic)")
    fmt = None
    vertex_count = None
    names: list[str] = []
    fields: list[tuple[str, str]] = []
    in_vertex = False
    while True:
        line = fh.readline()
        if not line:
            raise PlyFormatError(f"{path}: unexpected EOF in header")
        tokens = line.decode("ascii", errors="replace").strip().split()
        if not tokens or tokens[0] == "comment":
            continue
        if tokens[0] == "format":
            fmt = tokens[1]
        elif tokens[0] == "element":
            if tokens[1] == "vertex":
                if vertex_count is not None:
                    raise PlyFormatError(f"{path}: duplicate vertex element")
                vertex_count = int(tokens[2])
                in_vertex = True
            else:
                if vertex_count is None:
                    raise PlyFormatError(
                        f"{path}: vertex must be the first element, found "
                        f"'{tokens[1]}'"
                    )
                in_vertex = False
        elif tokens[0] == "property" and in_vertex:
            if tokens[1] == "list":
                raise PlyFormatError(f"{path}: list properties are not supported")
            ply_type, name = tokens[1], tokens[2]
            if ply_type not in _PLY_TYPES:
                raise PlyFormatError(f"{path}: unsupported property type '{ply_type}'")
            names.append(name)
            fields.append((name, _PLY_TYPES[ply_type]))
        elif tokens[0] == "end_header":
            break
    if fmt != "binary_little_endian":
        raise PlyFormatError(
            f"{path}: format '{fmt}' not supported (binary_little_endian only)"
        )
    if vertex_count is None:
        raise PlyFormatError(f"{path}: no vertex element")
    if not fields:
        raise PlyFormatError(f"{path}: vertex element has no properties")
    return vertex_count, names, np.dtype(fields)


def read_gaussian_ply(path: str | Path) -> dict[str, np.ndarray]:
    """Read raw (pre-activation) Gaussian parameters from a PLY file.

    Returns a dict with float64 arrays: ``means`` (N,3), ``rotations``
    (N,4), ``scales`` (N,3), ``opacities`` (N,), ``sh_coeffs`` (N,3,16)
    zero-padded, and ``sh_degree`` (int). Raises PlyFormatError for
    structural problems and SceneDataError for non-finite values.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        count, names, dtype = _parse_header(fh, path)
        data = np.fromfile(fh, dtype=dtype, count=count)
    if data.shape[0] != count:
        raise PlyFormatError(
            f"{path}: truncated payload ({data.shape[0]} of {count} vertices)"
        )

    present = set(names)
    for prop in REQUIRED_PROPERTIES:
        if prop not in present:
            raise PlyFormatError(f"{path}: missing required property '{prop}'")

    rest_names = [n for n in names if n.startswith("f_rest_")]
    n_rest = len(rest_names)
    if n_rest not in _REST_COUNTS:
        raise PlyFormatError(
            f"{path}: f_rest property count {n_rest} does not match any "
            f"SH degree (expected one of {sorted(_REST_COUNTS)})"
        )
    for k in range(n_rest):
        if f"f_rest_{k}" not in present:
            raise PlyFormatError(f"{path}: missing required property 'f_rest_{k}'")
    degree = _REST_COUNTS[n_rest]

    def col(name: str) -> np.ndarray:
        return np.asarray(data[name], dtype=np.float64)

    def stack(prefix: str, n: int) -> np.ndarray:
        return np.stack([col(f"{prefix}{k}") for k in range(n)], axis=1)

    means = np.stack([col("x"), col("y"), col("z")], axis=1)
    rotations = stack("rot_", 4)
    scales = stack("scale_", 3)
    opacities = col("opacity")
    sh = np.zeros((count, 3, 16), dtype=np.float64)
    sh[:, :, 0] = stack("f_dc_", 3)
    if n_rest:
        per_channel = n_rest // 3
        rest = stack("f_rest_", n_rest).reshape(count, 3, per_channel)
        sh[:, :, 1 : 1 + per_channel] = rest

    for label, arr in (
        ("position", means),
        ("rotation", rotations),
        ("scale", scales),
        ("opacity", opacities),
        ("sh", sh),
    ):
        finite = np.isfinite(arr).reshape(count, -1).all(axis=1)
        if not finite.all():
            idx = int(np.flatnonzero(~finite)[0])
            raise SceneDataError(
                f"{path}: non-finite {label} value at vertex {idx}"
            )

    return {
        "means": means,
        "rotations": rotations,
        "scales": scales,
        "opacities": opacities,
        "sh_coeffs": sh,
        "sh_degree": degree,
    }


def write_gaussian_ply(
    path: str | Path,
    means: np.ndarray,
    rotations: np.ndarray,
    scales_log: np.ndarray,
    opacities_logit: np.ndarray,
    sh_coeffs: np.ndarray,
    sh_degree: int,
) -> None:
    """Write raw Gaussian parameters in the standard 3DGS binary layout.

    Parameters are the *stored* (pre-activation) values: log scales and
    logit opacities. ``sh_coeffs`` is (N, 3, 16); only the coefficients
    of ``sh_degree`` are written.
    """
    path = Path(path)
    n = means.shape[0]
    per_channel = (sh_degree + 1) ** 2 - 1
    n_rest = 3 * per_channel

    fields = [("x", "<f4"), ("y", "<f4"), ("z", "<f4"),
              ("nx", "<f4"), ("ny", "<f4"), ("nz", "<f4")]
    fields += [(f"f_dc_{k}", "<f4") for k in range(3)]
    fields += [(f"f_rest_{k}", "<f4") for k in range(n_rest)]
    fields += [("opacity", "<f4")]
    fields += [(f"scale_{k}", "<f4") for k in range(3)]
    fields += [(f"rot_{k}", "<f4") for k in range(4)]

    rec = np.zeros(n, dtype=np.dtype(fields))
    for k, name in enumerate(("x", "y", "z")):
        rec[name] = means[:, k]
    for k in range(3):
        rec[f"f_dc_{k}"] = sh_coeffs[:, k, 0]
    if n_rest:
        rest = sh_coeffs[:, :, 1 : 1 + per_channel].reshape(n, n_rest)
        for k in range(n_rest):
            rec[f"f_rest_{k}"] = rest[:, k]
    rec["opacity"] = opacities_logit
    for k in range(3):
        rec[f"scale_{k}"] = scales_log[:, k]
    for k in range(4):
        rec[f"rot_{k}"] = rotations[:, k]

    header = ["ply", "format binary_little_endian 1.0", f"element vertex {n}"]
    header += [f"property float {name}" for name, _ in fields]
    header.append("end_header")
    with open(path, "wb") as fh:
        fh.write(("\n".join(header) + "\n").encode("ascii"))
        rec.tofile(fh)
