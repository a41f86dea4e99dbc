import type { BakeManifest } from "./manifest.js";
import type { EditorScene } from "./scene.js";
import { transformPoint, type Mat3, IDENTITY } from "./transform.js";
import { maxVec, minVec, scale, type Vec3 } from "./vec.js";

export interface BoxGizmo {
  kind: "probe-influence" | "grid-bounds";
  color: string;
  center: Vec3;
  size: Vec3;
}

export const PROBE_GIZMO_COLOR = "#d2b48c";
export const GRID_GIZMO_COLOR = "#ffd700";

/**
 * Wireframe boxes for the current probes: one influence box per probe,
 * plus the grid's bounding box in a distinct color. With the toggle
 * off, nothing is drawn.
 */
export function volumeGizmos(
  scene: EditorScene,
  manifest: BakeManifest,
  on: boolean,
  axisTransform: Mat3 = IDENTITY,
  scaleFactor = 1,
): BoxGizmo[] {
  if (!on) {
    return [];
  }
  const gizmos: BoxGizmo[] = scene.all().map((probe) => ({
    kind: "probe-influence",
    color: PROBE_GIZMO_COLOR,
    center: probe.position,
    size: probe.boxSize,
  }));

  // the grid box corners may swap per axis under the transform
  const a = transformPoint(axisTransform, manifest.grid.bboxMin, scaleFactor);
  const b = transformPoint(axisTransform, manifest.grid.bboxMax, scaleFactor);
  const lo = minVec(a, b);
  const hi = maxVec(a, b);
  gizmos.push({
    kind: "grid-bounds",
    color: GRID_GIZMO_COLOR,
    center: scale([lo[0] + hi[0], lo[1] + hi[1], lo[2] + hi[2]], 0.5),
    size: [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]],
  });
  return gizmos;
}

/**
 * True when every probe gizmo's center lies inside the grid-bounds
 * gizmo. Probe centers are grid cell centers, so this holds for any
 * import of an unedited bake; influence boxes themselves may poke past
 * the grid bounds by the overlap margin, which is why the check is on
 * centers.
 */
export function gridEnclosesProbeCenters(gizmos: BoxGizmo[]): boolean {
  const grid = gizmos.find((g) => g.kind === "grid-bounds");
  if (grid === undefined) {
    return false;
  }
  const eps = 1e-12;
  return gizmos
    .filter((g) => g.kind === "probe-influence")
    .every((g) =>
      [0, 1, 2].every((axis) => {
        const lo = grid.center[axis] - grid.size[axis] / 2 - eps;
        const hi = grid.center[axis] + grid.size[axis] / 2 + eps;
        return g.center[axis] >= lo && g.center[axis] <= hi;
      }),
    );
}
