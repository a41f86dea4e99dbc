"""Probe grids, cubemap baking, PNG export, and the bake manifest.

Probes sit at the cell centers of a regular grid inside a user box, so
every probe is strictly interior at any resolution. Each probe's
cubemap is six 90-degree views sharing the probe origin, one per cube
face; influence volumes are the cell size stretched by an artist
overlap so neighboring probes blend as objects move between cells.

A finished bake is six PNGs per probe plus ``probes.json``, written
last so a crashed bake never leaves a manifest pointing at missing
faces. Values are stored linearly (no gamma tag); the manifest carries
a coordinate-convention tag instead of guessing any engine handedness.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .bvh import Bvh, build_bvh
from .camera import FACE_KEYS, Camera
from .errors import (ManifestCountError, ManifestError, ManifestPathError,
                     ManifestVersionError)
from .raytrace import RenderSettings, render_view
from .scene import GaussianScene
from .splat import DEFAULT_DILATION, rasterize_view

MANIFEST_VERSION = 1
MANIFEST_NAME = "probes.json"
COORDINATE_CONVENTION = "scene_native"
RENDERERS = ("raytrace", "splat")


@dataclass(frozen=True)
class ProbeGrid:
    """Regular probe lattice: bounding box, per-axis resolution, overlap."""

    bbox_min: tuple[float, float, float]
    bbox_max: tuple[float, float, float]
    resolution: tuple[int, int, int]
    overlap: float = 0.25

    def __post_init__(self):
        object.__setattr__(self, "bbox_min", tuple(float(c) for c in self.bbox_min))
        object.__setattr__(self, "bbox_max", tuple(float(c) for c in self.bbox_max))
        object.__setattr__(self, "resolution", tuple(int(n) for n in self.resolution))
        if len(self.bbox_min) != 3 or len(self.bbox_max) != 3:
            raise ValueError("bbox_min and bbox_max must be 3-vectors")
        if len(self.resolution) != 3:
            raise ValueError("resolution must have three components")
        if not all(lo < hi for lo, hi in zip(self.bbox_min, self.bbox_max)):
            raise ValueError("bbox_min must be strictly below bbox_max componentwise")
        if any(n < 1 for n in self.resolution):
            raise ValueError("grid resolution components must be >= 1")
        if self.overlap < 0.0:
            raise ValueError("overlap must be >= 0")

    @property
    def count(self) -> int:
        nx, ny, nz = self.resolution
        return nx * ny * nz

    @property
    def cell_size(self) -> np.ndarray:
        lo = np.array(self.bbox_min)
        hi = np.array(self.bbox_max)
        return (hi - lo) / np.array(self.resolution, dtype=np.float64)


@dataclass(frozen=True)
class Probe:
    """One grid probe: position and the full extents of its influence box."""

    id: int
    position: tuple[float, float, float]
    influence_extents: tuple[float, float, float]


@dataclass(frozen=True, eq=False)
class Cubemap:
    """Six F x F linear RGB faces keyed px, nx, py, ny, pz, nz."""

    faces: dict[str, np.ndarray]
    resolution: int

    def __post_init__(self):
        if set(self.faces) != set(FACE_KEYS):
            raise ValueError(f"cubemap must have exactly the faces {FACE_KEYS}")
        for key in FACE_KEYS:
            img = self.faces[key]
            if img.shape != (self.resolution, self.resolution, 3):
                raise ValueError(
                    f"face '{key}' has shape {img.shape}, expected "
                    f"({self.resolution}, {self.resolution}, 3)")


@dataclass(frozen=True)
class ManifestProbe:
    id: int
    position: tuple[float, float, float]
    influence_extents: tuple[float, float, float]
    faces: dict[str, str]  # face key -> path relative to the manifest


@dataclass(frozen=True)
class BakeManifest:
    version: int
    coordinate_convention: str
    grid: ProbeGrid
    face_resolution: int
    probes: tuple[ManifestProbe, ...]


def probe_positions(grid: ProbeGrid) -> np.ndarray:
    """Cell-center positions, ordered k-major, then j, then i; (P, 3)."""
    nx, ny, nz = grid.resolution
    lo = np.array(grid.bbox_min)
    span = np.array(grid.bbox_max) - lo
    out = np.empty((grid.count, 3), dtype=np.float64)
    p = 0
    for k in range(nz):
        for j in range(ny):
            for i in range(nx):
                frac = np.array([(i + 0.5) / nx, (j + 0.5) / ny, (k + 0.5) / nz])
                out[p] = lo + frac * span
                p += 1
    return out


def influence_extents(grid: ProbeGrid) -> np.ndarray:
    """Full influence box dimensions: cell size times (1 + overlap)."""
    return grid.cell_size * (1.0 + grid.overlap)


def make_probes(grid: ProbeGrid) -> list[Probe]:
    """Probes for every grid cell with shared influence extents."""
    extents = tuple(float(e) for e in influence_extents(grid))
    return [
        Probe(id=i, position=tuple(float(c) for c in pos),
              influence_extents=extents)
        for i, pos in enumerate(probe_positions(grid))
    ]


def bake_probe(position: np.ndarray, scene: GaussianScene, fres: int,
               renderer: str = "raytrace",
               settings: RenderSettings = RenderSettings(),
               bvh: Bvh | None = None, workers: int = 1,
               splat_dilation: float = DEFAULT_DILATION) -> Cubemap:
    """Render the six cube faces of one probe with the chosen renderer."""
    if renderer not in RENDERERS:
        raise ValueError(f"unknown renderer {renderer!r}; expected one of {RENDERERS}")
    if renderer == "raytrace" and bvh is None and len(scene) > 0:
        bvh = build_bvh(scene, sigma_cut=settings.sigma_cut)
    faces = {}
    for key in FACE_KEYS:
        cam = Camera.for_face(position, key)
        if renderer == "raytrace":
            faces[key] = render_view(cam, fres, scene, bvh, settings,
                                     workers=workers)
        else:
            faces[key] = rasterize_view(cam, fres, scene, settings,
                                        dilation=splat_dilation)
    return Cubemap(faces=faces, resolution=fres)


def quantize_image(img: np.ndarray) -> np.ndarray:
    """Linear [0,1] floats -> bytes: scale by 255, round half up, clamp."""
    return np.floor(np.clip(img, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def write_face_png(path: str | Path, img: np.ndarray) -> None:
    """Write one face as 8-bit RGB PNG, no alpha, no interlacing."""
    Image.fromarray(quantize_image(img), mode="RGB").save(path, format="PNG")


def read_face_png(path: str | Path) -> np.ndarray:
    """Read a face PNG back as uint8 (F, F, 3)."""
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"))


def face_filename(probe_id: int, face: str) -> str:
    return f"probe_{probe_id}_{face}.png"


def export_bake(probes, cubemaps, out_dir: str | Path, grid: ProbeGrid,
                face_resolution: int) -> BakeManifest:
    """Write face PNGs and then the manifest.

    ``cubemaps`` may be any iterable aligned with ``probes`` (a lazy
    generator keeps memory flat during large bakes). The manifest is
    written only after every face landed; a failed bake leaves no
    manifest behind.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries: list[ManifestProbe] = []
    for probe, cubemap in zip(probes, cubemaps):
        if cubemap.resolution != face_resolution:
            raise ValueError(
                f"probe {probe.id}: cubemap resolution {cubemap.resolution} "
                f"!= declared face resolution {face_resolution}")
        paths = {}
        for key in FACE_KEYS:
            name = face_filename(probe.id, key)
            write_face_png(out_dir / name, cubemap.faces[key])
            paths[key] = name
        entries.append(ManifestProbe(
            id=probe.id, position=probe.position,
            influence_extents=probe.influence_extents, faces=paths))
    if len(entries) != grid.count:
        raise ValueError(
            f"exported {len(entries)} probes but the grid declares "
            f"{grid.count}; probes and cubemaps must align with the grid")
    manifest = BakeManifest(
        version=MANIFEST_VERSION,
        coordinate_convention=COORDINATE_CONVENTION,
        grid=grid,
        face_resolution=face_resolution,
        probes=tuple(entries),
    )
    save_manifest(manifest, out_dir / MANIFEST_NAME)
    return manifest


def manifest_to_dict(manifest: BakeManifest) -> dict:
    return {
        "version": manifest.version,
        "coordinate_convention": manifest.coordinate_convention,
        "grid": {
            "bbox_min": list(manifest.grid.bbox_min),
            "bbox_max": list(manifest.grid.bbox_max),
            "resolution": list(manifest.grid.resolution),
            "overlap": manifest.grid.overlap,
        },
        "face_resolution": manifest.face_resolution,
        "probes": [
            {
                "id": p.id,
                "position": list(p.position),
                "influence_extents": list(p.influence_extents),
                "faces": {key: p.faces[key] for key in FACE_KEYS},
            }
            for p in manifest.probes
        ],
    }


def save_manifest(manifest: BakeManifest, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest_to_dict(manifest), fh, indent=2)
        fh.write("\n")


def load_manifest(path: str | Path, check_files: bool = False) -> BakeManifest:
    """Read and validate ``probes.json``.

    Checks the format version, the presence of all six face paths per
    probe, and that the probe count matches the declared grid
    resolution; with ``check_files`` the referenced PNGs must exist on
    disk too. Each failure raises its own error type.
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{path}: not valid JSON ({exc})") from exc

    version = raw.get("version")
    if version != MANIFEST_VERSION:
        raise ManifestVersionError(
            f"{path}: unsupported manifest version {version!r} "
            f"(expected {MANIFEST_VERSION})")
    try:
        grid = ProbeGrid(
            bbox_min=tuple(raw["grid"]["bbox_min"]),
            bbox_max=tuple(raw["grid"]["bbox_max"]),
            resolution=tuple(raw["grid"]["resolution"]),
            overlap=raw["grid"]["overlap"],
        )
        face_resolution = int(raw["face_resolution"])
        convention = str(raw["coordinate_convention"])
        raw_probes = raw["probes"]
    except (KeyError, TypeError) as exc:
        raise ManifestError(f"{path}: malformed manifest ({exc!r})") from exc

    if len(raw_probes) != grid.count:
        raise ManifestCountError(
            f"{path}: manifest lists {len(raw_probes)} probes but the grid "
            f"resolution {grid.resolution} implies {grid.count}")

    probes = []
    for entry in raw_probes:
        faces = entry.get("faces", {})
        for key in FACE_KEYS:
            if key not in faces:
                raise ManifestPathError(
                    f"{path}: probe {entry.get('id')} is missing the "
                    f"'{key}' face path")
        probes.append(ManifestProbe(
            id=int(entry["id"]),
            position=tuple(float(c) for c in entry["position"]),
            influence_extents=tuple(float(c) for c in entry["influence_extents"]),
            faces={key: str(faces[key]) for key in FACE_KEYS},
        ))

    manifest = BakeManifest(
        version=int(version),
        coordinate_convention=convention,
        grid=grid,
        face_resolution=face_resolution,
        probes=tuple(probes),
    )
    if check_files:
        base = path.parent
        for probe in manifest.probes:
            for key in FACE_KEYS:
                face_path = base / probe.faces[key]
                if not face_path.is_file():
                    raise ManifestPathError(
                        f"{path}: probe {probe.id} face '{key}' file "
                        f"missing: {face_path}")
    return manifest


def bake_grid(scene: GaussianScene, grid: ProbeGrid, out_dir: str | Path,
              fres: int, renderer: str = "raytrace",
              settings: RenderSettings = RenderSettings(),
              workers: int = 1,
              splat_dilation: float = DEFAULT_DILATION) -> BakeManifest:
    """Bake every probe of a grid to ``out_dir`` and return the manifest.

    Cubemaps are baked and written one probe at a time; the renderer
    choice affects pixels only, never the manifest geometry.
    """
    probes = make_probes(grid)
    bvh = build_bvh(scene, sigma_cut=settings.sigma_cut) \
        if renderer == "raytrace" and len(scene) > 0 else None

    def baked():
        for probe in probes:
            yield bake_probe(np.array(probe.position), scene, fres,
                             renderer=renderer, settings=settings, bvh=bvh,
                             workers=workers, splat_dilation=splat_dilation)

    return export_bake(probes, baked(), out_dir, grid, fres)
