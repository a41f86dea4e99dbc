"""
Why ray tracing: cubemap seams under splatting
==============================================

Rasterizing a cubemap face-by-face treats each face as its own camera.
A gaussian that crosses a cube edge is projected twice, with two
different linearizations of the projection, so its footprint disagrees
between the two faces and the edge shows a visible seam. Tracing rays
through the same pixel grid has no per-face projection at all: a
direction on the edge gives the same radiance from either face.

This demo renders one probe of an adversarial scene both ways and
prints the per-edge seam metric (mean absolute difference between the
texels on either side of each cube edge).
"""

from pathlib import Path

import numpy as np

from gbake.probes import bake_probe, write_face_png
from gbake.raytrace import RenderSettings
from gbake.seams import (adjacent_texel_metric, compare_renderers,
                         interior_gradient)
from gbake.synth import seam_stress_scene

out_dir = Path("demo_out/seams")
out_dir.mkdir(parents=True, exist_ok=True)

# Long thin gaussians lying across the cube-edge directions, tilted off
# both adjacent optical axes: the worst case for per-face projection.
scene = seam_stress_scene(count=200, seed=7)
position = np.zeros(3)
settings = RenderSettings()

splat_map = bake_probe(position, scene, 128, renderer="splat",
                       settings=settings)
ray_map = bake_probe(position, scene, 128, renderer="raytrace",
                     settings=settings, workers=1)

# Seam magnitude per edge, for each renderer, plus their ratio.
ratios = compare_renderers(splat_map, ray_map)
print(f"{'edge':8s} {'splat':>10s} {'raytrace':>10s} {'ratio':>8s}")
for r in ratios:
    shown = "inf" if r.ratio is None else f"{r.ratio:.1f}"
    print(f"{r.edge:8s} {r.seam_a:10.6f} {r.seam_b:10.6f} {shown:>8s}")

worst = max(ratios, key=lambda r: -1 if r.ratio is None else r.ratio)
print(f"\nworst edge for splatting: {worst.edge} "
      f"({worst.ratio:.1f}x the raytraced seam)")

# The raytraced seams are not zero, but they sit at the level of the
# ordinary texel-to-texel gradient inside a face: nothing marks the
# edge as special. For splatting the edge clearly stands out.
splat_seams = adjacent_texel_metric(splat_map)
ray_seams = adjacent_texel_metric(ray_map)
print(f"mean seam across all edges: splat {splat_seams.mean_abs:.6f}, "
      f"raytrace {ray_seams.mean_abs:.6f}")
print(f"interior gradient for scale: splat {interior_gradient(splat_map):.6f}, "
      f"raytrace {interior_gradient(ray_map):.6f}")

# Write the two +x faces side by side for eyeballing; the seam runs
# along the face borders of the splat version.
write_face_png(out_dir / "splat_px.png", splat_map.faces["px"])
write_face_png(out_dir / "raytrace_px.png", ray_map.faces["px"])
print("wrote", out_dir / "splat_px.png", "and", out_dir / "raytrace_px.png")
