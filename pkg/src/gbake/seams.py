"""Cubemap seam analysis.

A cubemap is continuous in radiance but not in parameterization: at
each of the 12 cube edges two faces meet, and whether their pixels
agree there depends entirely on the renderer. Rays through a shared
edge direction are the same ray no matter which face parameterized
them, so a ray tracer is seam-free by construction. A screen-space
splatter is not: its projection Jacobian is linearized per face, so
the same particle receives a different planar approximation on each
side of an edge and the boundary texels disagree.

Two measurements quantify this:

* ``adjacent_texel_metric`` pairs the boundary texel strips of each
  adjacent face pair by nearest direction and reports the RGB mismatch
  across every edge. It works on any rendered cubemap.
* ``exact_edge_check`` parameterizes directions lying exactly on a
  shared edge through both faces and renders each; for the ray tracer
  the two parameterizations reconstruct bit-identical rays, so the
  discrepancy is exactly zero before quantization.

``interior_gradient`` gives the scale of normal texel-to-texel
variation away from any edge, so seam numbers can be read as a ratio
against ordinary image content rather than as bare magnitudes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bvh import Bvh, build_bvh
from .camera import FACE_KEYS, Camera, face_basis, pixel_coords
from .probes import Cubemap, quantize_image
from .raytrace import RenderSettings, trace_rays
from .scene import GaussianScene

_AXIS_OF = {"px": (0, 1.0), "nx": (0, -1.0), "py": (1, 1.0), "ny": (1, -1.0),
            "pz": (2, 1.0), "nz": (2, -1.0)}


@dataclass(frozen=True)
class Edge:
    """One cube edge, named by the two faces that meet there."""

    face_a: str
    face_b: str

    @property
    def key(self) -> str:
        return f"{self.face_a}|{self.face_b}"


def _enumerate_edges() -> tuple[Edge, ...]:
    # Faces are adjacent iff their axes differ (opposite faces never touch).
    edges = []
    for i, a in enumerate(FACE_KEYS):
        for b in FACE_KEYS[i + 1:]:
            if _AXIS_OF[a][0] != _AXIS_OF[b][0]:
                edges.append(Edge(a, b))
    return tuple(edges)


EDGES = _enumerate_edges()


def boundary_strip(face: str, toward: str, fres: int):
    """Texels of ``face`` bordering the edge shared with ``toward``.

    Returns (rows, cols, dirs): index arrays of the strip's texels and
    their normalized world directions, ordered along the edge.
    """
    axis_b, sign_b = _AXIS_OF[toward]
    if _AXIS_OF[face][0] == axis_b:
        raise ValueError(f"faces '{face}' and '{toward}' do not share an edge")
    right, up, forward = face_basis(face)
    u, v = pixel_coords(fres)
    uu, vv = np.meshgrid(u, v, indexing="xy")
    # Component toward the neighbor is linear in u or v alone, so the
    # maximizing texels form exactly one border row or column.
    toward_coord = sign_b * (uu * right[axis_b] + vv * up[axis_b])
    mask = toward_coord == toward_coord.max()
    rows, cols = np.nonzero(mask)
    dirs = (uu[rows, cols, None] * right
            + vv[rows, cols, None] * up + forward)
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return rows, cols, dirs


def _mutual_pairs(dirs_a: np.ndarray, dirs_b: np.ndarray):
    """Indices (ia, ib) of mutually nearest direction pairs."""
    dots = dirs_a @ dirs_b.T
    best_b = dots.argmax(axis=1)
    best_a = dots.argmax(axis=0)
    ia = np.arange(dirs_a.shape[0])
    mutual = best_a[best_b] == ia
    return ia[mutual], best_b[mutual]


def _as_float(img: np.ndarray) -> np.ndarray:
    if np.issubdtype(img.dtype, np.integer):
        return img.astype(np.float64) / 255.0
    return np.asarray(img, dtype=np.float64)


@dataclass(frozen=True)
class EdgeSeamStat:
    edge: str
    face_a: str
    face_b: str
    mean_abs: float
    max_abs: float
    sample_count: int


@dataclass(frozen=True)
class SeamReport:
    """Per-edge and pooled RGB mismatch across all 12 cubemap edges."""

    edges: tuple[EdgeSeamStat, ...]
    mean_abs: float
    max_abs: float

    def to_dict(self) -> dict:
        return {
            "mean_abs": self.mean_abs,
            "max_abs": self.max_abs,
            "edges": [
                {
                    "edge": e.edge, "face_a": e.face_a, "face_b": e.face_b,
                    "mean_abs": e.mean_abs, "max_abs": e.max_abs,
                    "sample_count": e.sample_count,
                }
                for e in self.edges
            ],
        }

    def write_json(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["edge", "face_a", "face_b", "mean_abs",
                             "max_abs", "sample_count"])
            for e in self.edges:
                writer.writerow([e.edge, e.face_a, e.face_b,
                                 repr(e.mean_abs), repr(e.max_abs),
                                 e.sample_count])


def adjacent_texel_metric(cubemap: Cubemap) -> SeamReport:
    """RGB mismatch between paired boundary texels of every edge.

    For each edge the two faces' border strips are matched by mutual
    nearest direction; per pair the metric is the absolute RGB
    difference. uint8 faces are rescaled to [0, 1] so reports from
    saved PNGs and in-memory floats are comparable.
    """
    fres = cubemap.resolution
    stats = []
    all_diffs = []
    for edge in EDGES:
        ra, ca, dirs_a = boundary_strip(edge.face_a, edge.face_b, fres)
        rb, cb, dirs_b = boundary_strip(edge.face_b, edge.face_a, fres)
        ia, ib = _mutual_pairs(dirs_a, dirs_b)
        img_a = _as_float(cubemap.faces[edge.face_a])
        img_b = _as_float(cubemap.faces[edge.face_b])
        diffs = np.abs(img_a[ra[ia], ca[ia]] - img_b[rb[ib], cb[ib]])
        all_diffs.append(diffs)
        stats.append(EdgeSeamStat(
            edge=edge.key, face_a=edge.face_a, face_b=edge.face_b,
            mean_abs=float(diffs.mean()), max_abs=float(diffs.max()),
            sample_count=int(diffs.shape[0])))
    pooled = np.concatenate(all_diffs, axis=0)
    return SeamReport(edges=tuple(stats), mean_abs=float(pooled.mean()),
                      max_abs=float(pooled.max()))


def _strip_inward(rows: np.ndarray, cols: np.ndarray, fres: int):
    """Shift a border strip one texel toward the face center."""
    if rows[0] == rows[-1]:  # strip is one row
        r = 1 if rows[0] == 0 else fres - 2
        return np.full_like(rows, r), cols
    c = 1 if cols[0] == 0 else fres - 2
    return rows, np.full_like(cols, c)


def interior_gradient(cubemap: Cubemap) -> float:
    """Tangential texel gradient one texel inside each face boundary.

    For every edge's two border strips, step one texel into the face
    and measure the mean absolute difference between consecutive
    texels along the strip. This is the natural image variation right
    next to each seam, so seam metrics can be judged as a ratio
    against it rather than as bare magnitudes.
    """
    fres = cubemap.resolution
    if fres < 3:
        raise ValueError("interior gradient needs a face resolution >= 3")
    diffs = []
    for edge in EDGES:
        for face, toward in ((edge.face_a, edge.face_b),
                             (edge.face_b, edge.face_a)):
            rows, cols, _ = boundary_strip(face, toward, fres)
            rows, cols = _strip_inward(rows, cols, fres)
            vals = _as_float(cubemap.faces[face])[rows, cols]
            diffs.append(np.abs(np.diff(vals, axis=0)).ravel())
    return float(np.concatenate(diffs).mean())


@dataclass(frozen=True)
class EdgeIdentityStat:
    edge: str
    max_abs: float
    max_abs_quantized: int


@dataclass(frozen=True)
class EdgeIdentityReport:
    edges: tuple[EdgeIdentityStat, ...]
    max_abs: float
    max_abs_quantized: int


def edge_directions(edge: Edge, k: int = 256) -> np.ndarray:
    """k unnormalized directions lying exactly on the shared cube edge.

    Components are +-1 on the two face axes and (2i+1-k)/k on the free
    axis; the free parameter never hits 0 or the corners, so every
    direction is strictly inside the edge and exactly representable.
    """
    axis_a, sign_a = _AXIS_OF[edge.face_a]
    axis_b, sign_b = _AXIS_OF[edge.face_b]
    axis_c = 3 - axis_a - axis_b
    t = (2.0 * np.arange(k) + 1.0 - k) / k
    dirs = np.empty((k, 3), dtype=np.float64)
    dirs[:, axis_a] = sign_a
    dirs[:, axis_b] = sign_b
    dirs[:, axis_c] = t
    return dirs


def _render_through_face(face: str, dirs: np.ndarray, position: np.ndarray,
                         scene: GaussianScene, bvh: Bvh,
                         settings: RenderSettings,
                         workers: int) -> np.ndarray:
    """Route directions through one face's (u, v) plane and trace them.

    Reconstructing u = (d.right)/(d.forward) and v = (d.up)/(d.forward)
    and then re-assembling u*right + v*up + forward is algebraically the
    identity; doing it explicitly exercises the face parameterization
    the same way rendering that face does.
    """
    right, up, forward = face_basis(face)
    denom = dirs @ forward
    u = (dirs @ right) / denom
    v = (dirs @ up) / denom
    routed = u[:, None] * right + v[:, None] * up + forward
    routed /= np.linalg.norm(routed, axis=1, keepdims=True)
    origins = np.broadcast_to(position, routed.shape)
    colors, _ = trace_rays(origins, routed, scene, bvh, settings,
                           workers=workers)
    return colors


def exact_edge_check(scene: GaussianScene, position, k: int = 256,
                     settings: RenderSettings = RenderSettings(),
                     bvh: Bvh | None = None,
                     workers: int = 1) -> EdgeIdentityReport:
    """Trace edge directions through both adjacent faces and compare.

    For every cube edge, k directions exactly on the edge are routed
    through each face's parameterization and ray traced. The two
    routings reconstruct the same direction vector bit for bit (every
    arithmetic step is exact on these inputs), so the radiance
    difference is exactly 0.0 before quantization; the report carries
    the measured values rather than asserting that.
    """
    position = np.asarray(position, dtype=np.float64)
    if bvh is None and len(scene) > 0:
        bvh = build_bvh(scene, sigma_cut=settings.sigma_cut)
    stats = []
    for edge in EDGES:
        dirs = edge_directions(edge, k)
        col_a = _render_through_face(edge.face_a, dirs, position, scene,
                                     bvh, settings, workers)
        col_b = _render_through_face(edge.face_b, dirs, position, scene,
                                     bvh, settings, workers)
        pre = float(np.abs(col_a - col_b).max())
        qa = quantize_image(col_a).astype(np.int64)
        qb = quantize_image(col_b).astype(np.int64)
        post = int(np.abs(qa - qb).max())
        stats.append(EdgeIdentityStat(edge=edge.key, max_abs=pre,
                                      max_abs_quantized=post))
    return EdgeIdentityReport(
        edges=tuple(stats),
        max_abs=max(s.max_abs for s in stats),
        max_abs_quantized=max(s.max_abs_quantized for s in stats))


@dataclass(frozen=True)
class EdgeRatio:
    """Seam magnitude of renderer A relative to renderer B on one edge."""

    edge: str
    seam_a: float
    seam_b: float
    ratio: float | None  # None when seam_b is zero


def compare_renderers(cubemap_a: Cubemap, cubemap_b: Cubemap) -> list[EdgeRatio]:
    """Per-edge seam ratio between two renderings of the same probe."""
    if cubemap_a.resolution != cubemap_b.resolution:
        raise ValueError(
            f"cannot compare seams across resolutions "
            f"({cubemap_a.resolution} vs {cubemap_b.resolution}); the "
            f"metric scales with texel size")
    report_a = adjacent_texel_metric(cubemap_a)
    report_b = adjacent_texel_metric(cubemap_b)
    out = []
    for ea, eb in zip(report_a.edges, report_b.edges):
        ratio = ea.mean_abs / eb.mean_abs if eb.mean_abs > 0.0 else None
        out.append(EdgeRatio(edge=ea.edge, seam_a=ea.mean_abs,
                             seam_b=eb.mean_abs, ratio=ratio))
    return out


def comparison_to_dict(ratios: list[EdgeRatio]) -> dict:
    return {
        "edges": [
            {"edge": r.edge, "seam_a": r.seam_a, "seam_b": r.seam_b,
             "ratio": r.ratio}
            for r in ratios
        ],
    }


def write_comparison_json(ratios: list[EdgeRatio], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(comparison_to_dict(ratios), fh, indent=2)
        fh.write("\n")


def write_comparison_csv(ratios: list[EdgeRatio], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["edge", "seam_a", "seam_b", "ratio"])
        for r in ratios:
            writer.writerow([r.edge, repr(r.seam_a), repr(r.seam_b),
                             "n/a" if r.ratio is None else repr(r.ratio)])
