"""Bake Gaussian-splatting scenes into cubemap reflection probe grids.

The pipeline: load a trained scene (binary PLY), place probes at the
cell centers of a regular grid, ray trace six 90-degree faces per
probe, and export 8-bit PNGs plus a JSON manifest. A screen-space
splatting renderer and seam metrics are included to quantify why the
faces are ray traced rather than rasterized.
"""

from .bvh import Bvh, build_bvh, particle_boxes
from .camera import FACE_KEYS, Camera, face_basis, pixel_directions
from .errors import (EmptySceneError, GbakeError, ManifestCountError,
                     ManifestError, ManifestPathError, ManifestVersionError,
                     PlyFormatError, SceneDataError)
from .plyio import read_gaussian_ply, write_gaussian_ply
from .probes import (BakeManifest, COORDINATE_CONVENTION, Cubemap,
                     ManifestProbe, Probe, ProbeGrid, bake_grid, bake_probe,
                     export_bake, influence_extents, load_manifest,
                     make_probes, probe_positions, quantize_image,
                     read_face_png, save_manifest, write_face_png)
from .raytrace import (HitRecord, Ray, RenderSettings, particle_response,
                       render_view, trace, trace_bruteforce, trace_rays,
                       trace_rays_bruteforce)
from .scene import (GaussianParticle, GaussianScene, covariance, load_ply,
                    quat_to_rotmat, save_ply)
from .seams import (EDGES, Edge, EdgeIdentityReport, EdgeRatio, SeamReport,
                    adjacent_texel_metric, boundary_strip, compare_renderers,
                    edge_directions, exact_edge_check, interior_gradient)
from .sh import sh_basis, sh_color
from .splat import ProjectedSplat, project_particle, rasterize_view
from .synth import random_scene, seam_stress_scene, smooth_scene

__version__ = "0.1.0"

__all__ = [
    "BakeManifest", "Bvh", "COORDINATE_CONVENTION", "Camera", "Cubemap",
    "EDGES", "Edge", "EdgeIdentityReport", "EdgeRatio", "EmptySceneError",
    "FACE_KEYS", "GaussianParticle", "GaussianScene", "GbakeError",
    "HitRecord", "ManifestCountError", "ManifestError", "ManifestPathError",
    "ManifestProbe", "ManifestVersionError", "PlyFormatError", "Probe",
    "ProbeGrid", "ProjectedSplat", "Ray", "RenderSettings", "SceneDataError",
    "SeamReport", "adjacent_texel_metric", "bake_grid", "bake_probe",
    "boundary_strip", "build_bvh", "compare_renderers", "covariance",
    "edge_directions", "exact_edge_check", "export_bake", "face_basis",
    "influence_extents", "interior_gradient", "load_manifest", "load_ply",
    "make_probes", "particle_boxes", "particle_response", "pixel_directions",
    "probe_positions", "project_particle", "quantize_image", "quat_to_rotmat",
    "random_scene", "rasterize_view", "read_face_png", "read_gaussian_ply",
    "render_view", "save_manifest", "save_ply", "seam_stress_scene",
    "sh_basis", "sh_color", "smooth_scene", "trace", "trace_bruteforce",
    "trace_rays", "trace_rays_bruteforce", "write_face_png",
    "write_gaussian_ply",
]
