"""Command-line interface.

Subcommands:

* ``bake``: bake a probe grid from a trained scene to PNGs + manifest.
* ``render``: render a single view of a scene to one PNG.
* ``seams``: rasterize and ray trace the same probe, report per-edge
  seam ratios.
* ``info``: print scene statistics.
* ``gen``: write a synthetic scene for testing.

Worker count comes from --workers, else the GBAKE_WORKERS environment
variable, else the CPU count. Results are bit-identical regardless.
"""

from __future__ import annotations

import csv
import functools
import json
import os
import sys
import time
from pathlib import Path

import click
import numpy as np

from .bvh import build_bvh
from .camera import FACE_KEYS, Camera
from .errors import GbakeError
from .probes import (MANIFEST_NAME, ProbeGrid, RENDERERS, bake_grid,
                     bake_probe, load_manifest, write_face_png)
from .raytrace import RenderSettings, render_view
from .scene import load_ply, save_ply
from .seams import comparison_to_dict, compare_renderers, exact_edge_check
from .splat import DEFAULT_DILATION, rasterize_view
from .synth import SCENE_KINDS, make_scene


class _Triple(click.ParamType):
    """Comma-separated triple, e.g. ``5,5,5`` or ``-1.5,0,2.5``."""

    def __init__(self, cast, name):
        self.cast = cast
        self.name = name

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        parts = str(value).split(",")
        if len(parts) != 3:
            self.fail(f"{value!r} is not a comma-separated triple", param, ctx)
        try:
            return tuple(self.cast(p) for p in parts)
        except ValueError:
            self.fail(f"{value!r} has a non-{self.cast.__name__} component",
                      param, ctx)


FLOAT3 = _Triple(float, "x,y,z")
INT3 = _Triple(int, "nx,ny,nz")


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return workers


def _cli_errors(fn):
    """Turn domain and I/O failures into a one-line message and exit 1."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (GbakeError, ValueError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


workers_option = click.option(
    "--workers", type=int, default=None, envvar="GBAKE_WORKERS",
    help="Render worker threads (default: GBAKE_WORKERS or CPU count). "
         "Output bytes do not depend on this.")
renderer_option = click.option(
    "--renderer", type=click.Choice(RENDERERS), default="raytrace",
    show_default=True, help="Rendering backend.")
background_option = click.option(
    "--background", type=FLOAT3, default=(0.0, 0.0, 0.0),
    show_default=True, help="Background color composited behind the scene.")


@click.group()
def main():
    """Bake Gaussian-splatting scenes into cubemap reflection probes."""


@main.command()
@click.argument("scene_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              required=True, help="Output directory for PNGs and manifest.")
@click.option("--grid", type=INT3, default=(5, 5, 5), show_default=True,
              help="Probes per axis, nx,ny,nz.")
@click.option("--bbox-min", type=FLOAT3, default=None,
              help="Grid box lower corner (default: scene bounds).")
@click.option("--bbox-max", type=FLOAT3, default=None,
              help="Grid box upper corner (default: scene bounds).")
@click.option("--overlap", type=float, default=0.25, show_default=True,
              help="Influence overlap fraction per cell.")
@click.option("--face-res", type=int, default=800, show_default=True,
              help="Cubemap face resolution in pixels.")
@renderer_option
@background_option
@workers_option
@_cli_errors
def bake(scene_path, out_dir, grid, bbox_min, bbox_max, overlap, face_res,
         renderer, background, workers):
    """Bake a grid of cubemap probes from SCENE_PATH."""
    workers = _resolve_workers(workers)
    scene = load_ply(scene_path)
    if bbox_min is None or bbox_max is None:
        lo, hi = scene.world_aabb
        bbox_min = bbox_min or tuple(lo)
        bbox_max = bbox_max or tuple(hi)
    probe_grid = ProbeGrid(bbox_min=bbox_min, bbox_max=bbox_max,
                           resolution=grid, overlap=overlap)
    settings = RenderSettings(background=background)
    click.echo(f"scene: {len(scene)} gaussians from {scene_path}")
    start = time.perf_counter()
    manifest = bake_grid(scene, probe_grid, out_dir, face_res,
                         renderer=renderer, settings=settings,
                         workers=workers)
    elapsed = time.perf_counter() - start
    n_faces = len(manifest.probes) * len(FACE_KEYS)
    click.echo(f"baked {len(manifest.probes)} probes ({n_faces} faces) "
               f"at {face_res}x{face_res} in {elapsed:.2f} s")
    # Re-read what was written; exit 0 only if it validates completely.
    load_manifest(Path(out_dir) / MANIFEST_NAME, check_files=True)
    click.echo(f"manifest: {Path(out_dir) / MANIFEST_NAME}")


@main.command()
@click.argument("scene_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              required=True, help="Output PNG path.")
@click.option("--position", type=FLOAT3, default=(0.0, 0.0, 0.0),
              show_default=True, help="Camera position.")
@click.option("--face", type=click.Choice(FACE_KEYS), default=None,
              help="Cube-face view direction (alternative to --forward/--up).")
@click.option("--forward", type=FLOAT3, default=None,
              help="Camera forward vector (used with --up).")
@click.option("--up", type=FLOAT3, default=None,
              help="Camera up vector (used with --forward).")
@click.option("--face-res", type=int, default=256, show_default=True,
              help="Image resolution in pixels.")
@renderer_option
@background_option
@workers_option
@_cli_errors
def render(scene_path, out_path, position, face, forward, up, face_res,
           renderer, background, workers):
    """Render one 90-degree view of SCENE_PATH to a PNG."""
    workers = _resolve_workers(workers)
    if (forward is None) != (up is None):
        raise ValueError("--forward and --up must be given together")
    if face is not None and forward is not None:
        raise ValueError("pass either --face or --forward/--up, not both")
    position = np.asarray(position, dtype=np.float64)
    if forward is not None:
        fwd = np.asarray(forward, dtype=np.float64)
        fwd = fwd / np.linalg.norm(fwd)
        upv = np.asarray(up, dtype=np.float64)
        upv = upv - np.dot(upv, fwd) * fwd
        norm = np.linalg.norm(upv)
        if norm < 1e-12:
            raise ValueError("--up must not be parallel to --forward")
        upv = upv / norm
        camera = Camera(origin=position, forward=fwd, up=upv,
                        right=np.cross(upv, fwd))
    else:
        camera = Camera.for_face(position, face or "pz")
    scene = load_ply(scene_path)
    settings = RenderSettings(background=background)
    start = time.perf_counter()
    if renderer == "raytrace":
        bvh = build_bvh(scene, sigma_cut=settings.sigma_cut)
        img = render_view(camera, face_res, scene, bvh, settings,
                          workers=workers)
    else:
        img = rasterize_view(camera, face_res, scene, settings)
    elapsed = time.perf_counter() - start
    write_face_png(out_path, img)
    click.echo(f"wrote {out_path} ({elapsed:.2f} s)")


@main.command()
@click.argument("scene_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--position", type=FLOAT3, default=(0.0, 0.0, 0.0),
              show_default=True, help="Probe position.")
@click.option("--face-res", type=int, default=128, show_default=True,
              help="Cubemap face resolution.")
@click.option("--renderer", type=click.Choice(("both", "raytrace")),
              default="both", show_default=True,
              help="'raytrace' skips the splat comparison and reports only "
                   "the exact-edge identity check.")
@click.option("--dilation", type=float, default=DEFAULT_DILATION,
              show_default=True, help="Screen-space dilation for splatting.")
@click.option("--out-json", type=click.Path(dir_okay=False), default=None,
              help="Write the per-edge report as JSON.")
@click.option("--out-csv", type=click.Path(dir_okay=False), default=None,
              help="Write the per-edge report as CSV.")
@background_option
@workers_option
@_cli_errors
def seams(scene_path, position, face_res, renderer, dilation, out_json,
          out_csv, background, workers):
    """Compare splatting and ray tracing seams for one probe."""
    workers = _resolve_workers(workers)
    scene = load_ply(scene_path)
    settings = RenderSettings(background=background)
    position = np.asarray(position, dtype=np.float64)

    identity = exact_edge_check(scene, position, settings=settings,
                                workers=workers)
    ratios = None
    if renderer == "both":
        splat_map = bake_probe(position, scene, face_res, renderer="splat",
                               settings=settings, splat_dilation=dilation)
        ray_map = bake_probe(position, scene, face_res, renderer="raytrace",
                             settings=settings, workers=workers)
        ratios = compare_renderers(splat_map, ray_map)
        click.echo(f"{'edge':8s} {'splat':>12s} {'raytrace':>12s} {'ratio':>8s}")
        for r in ratios:
            shown = "n/a" if r.ratio is None else f"{r.ratio:.2f}"
            click.echo(f"{r.edge:8s} {r.seam_a:12.6f} {r.seam_b:12.6f} "
                       f"{shown:>8s}")
    click.echo(f"exact shared-edge rays (raytrace): max |delta| = "
               f"{identity.max_abs} pre-quantization, "
               f"{identity.max_abs_quantized}/255 quantized")

    if out_json:
        payload = {"exact_edge": {
            "max_abs": identity.max_abs,
            "max_abs_quantized": identity.max_abs_quantized,
            "edges": [{"edge": e.edge, "max_abs": e.max_abs,
                       "max_abs_quantized": e.max_abs_quantized}
                      for e in identity.edges],
        }}
        if ratios is not None:
            payload["comparison"] = comparison_to_dict(ratios)["edges"]
        with open(out_json, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        click.echo(f"wrote {out_json}")
    if out_csv:
        with open(out_csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["edge", "splat_mean", "raytrace_mean", "ratio",
                             "exact_max_abs", "exact_max_abs_quantized"])
            by_edge = {r.edge: r for r in ratios} if ratios else {}
            for e in identity.edges:
                r = by_edge.get(e.edge)
                writer.writerow([
                    e.edge,
                    repr(r.seam_a) if r else "n/a",
                    repr(r.seam_b) if r else "n/a",
                    ("n/a" if r is None or r.ratio is None else repr(r.ratio)),
                    repr(e.max_abs), e.max_abs_quantized,
                ])
        click.echo(f"wrote {out_csv}")


@main.command()
@click.argument("scene_path", type=click.Path(exists=True, dir_okay=False))
@_cli_errors
def info(scene_path):
    """Print statistics about SCENE_PATH."""
    scene = load_ply(scene_path)
    lo, hi = scene.world_aabb
    click.echo(f"particles:  {len(scene)}")
    click.echo(f"sh degree:  {scene.sh_degree}")
    click.echo(f"bounds min: {lo[0]:.4f} {lo[1]:.4f} {lo[2]:.4f}")
    click.echo(f"bounds max: {hi[0]:.4f} {hi[1]:.4f} {hi[2]:.4f}")
    counts, edges = np.histogram(scene.opacities, bins=10, range=(0.0, 1.0))
    click.echo("opacity histogram:")
    for n, a, b in zip(counts, edges[:-1], edges[1:]):
        click.echo(f"  {a:.1f}-{b:.1f}: {n}")


@main.command()
@click.argument("kind", type=click.Choice(sorted(SCENE_KINDS)))
@click.option("--count", type=int, default=None,
              help="Particle count (default: the kind's own default).")
@click.option("--seed", type=int, default=None,
              help="RNG seed (default: the kind's own default).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              required=True, help="Output PLY path.")
@_cli_errors
def gen(kind, count, seed, out_path):
    """Write a synthetic KIND scene as a binary PLY."""
    scene = make_scene(kind, count=count, seed=seed)
    save_ply(scene, out_path)
    click.echo(f"wrote {len(scene)} particles to {out_path}")
