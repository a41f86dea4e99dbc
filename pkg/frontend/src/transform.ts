import type { Vec3 } from "./vec.js";

/**
 * Row-major 3x3 matrix. Import transforms are restricted to signed
 * permutations: every row and every column has exactly one entry, and
 * that entry is +1 or -1. That covers all handedness and axis-order
 * conversions between the baked scene and an engine without ever
 * shearing or rescaling the layout (scaling is a separate uniform
 * factor on ImportSettings).
 */
export type Mat3 = readonly [Vec3, Vec3, Vec3];

export const IDENTITY: Mat3 = [
  [1, 0, 0],
  [0, 1, 0],
  [0, 0, 1],
];

export class AxisTransformError extends Error {}

function det3(m: Mat3): number {
  return (
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
    m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
    m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
  );
}

/** Throws unless the matrix is a signed permutation (determinant +-1). */
export function validateAxisTransform(m: Mat3): void {
  const colCounts = [0, 0, 0];
  for (let r = 0; r < 3; r++) {
    let rowCount = 0;
    for (let c = 0; c < 3; c++) {
      const v = m[r][c];
      if (v === 0) continue;
      if (v !== 1 && v !== -1) {
        throw new AxisTransformError(
          `axis transform entry [${r}][${c}] is ${v}; only 0, +1, -1 are allowed`,
        );
      }
      rowCount++;
      colCounts[c]++;
    }
    if (rowCount !== 1) {
      throw new AxisTransformError(
        `axis transform row ${r} has ${rowCount} nonzero entries; a signed permutation needs exactly one`,
      );
    }
  }
  for (let c = 0; c < 3; c++) {
    if (colCounts[c] !== 1) {
      throw new AxisTransformError(
        `axis transform column ${c} has ${colCounts[c]} nonzero entries; a signed permutation needs exactly one`,
      );
    }
  }
  const d = det3(m);
  if (d !== 1 && d !== -1) {
    throw new AxisTransformError(`axis transform determinant is ${d}, expected +-1`);
  }
}

/** Engine position of a baked point: matrix times point, then scale. */
export function transformPoint(m: Mat3, p: Vec3, factor = 1): Vec3 {
  return [
    (m[0][0] * p[0] + m[0][1] * p[1] + m[0][2] * p[2]) * factor,
    (m[1][0] * p[0] + m[1][1] * p[1] + m[1][2] * p[2]) * factor,
    (m[2][0] * p[0] + m[2][1] * p[1] + m[2][2] * p[2]) * factor,
  ];
}

/**
 * Engine size of a baked box: the permutation reorders the axes and the
 * sign flips drop out, because a box size is a magnitude per axis.
 */
export function transformExtents(m: Mat3, e: Vec3, factor = 1): Vec3 {
  const abs: Mat3 = [
    [Math.abs(m[0][0]), Math.abs(m[0][1]), Math.abs(m[0][2])],
    [Math.abs(m[1][0]), Math.abs(m[1][1]), Math.abs(m[1][2])],
    [Math.abs(m[2][0]), Math.abs(m[2][1]), Math.abs(m[2][2])],
  ];
  return transformPoint(abs, e, factor);
}

export interface ImportSettings {
  manifestPath: string;
  /** Signed permutation applied to positions and extents. */
  axisTransform?: Mat3;
  /** Uniform scale applied after the axis transform. */
  scale?: number;
  /** Intensity stored on every created probe. */
  intensity?: number;
  /** Whether created probes use box projection. */
  boxProjection?: boolean;
}

export interface ResolvedImportSettings {
  manifestPath: string;
  axisTransform: Mat3;
  scale: number;
  intensity: number;
  boxProjection: boolean;
}

export function resolveSettings(settings: ImportSettings): ResolvedImportSettings {
  const axisTransform = settings.axisTransform ?? IDENTITY;
  validateAxisTransform(axisTransform);
  const scale = settings.scale ?? 1;
  if (!(scale > 0)) {
    throw new AxisTransformError(`scale must be positive, got ${scale}`);
  }
  return {
    manifestPath: settings.manifestPath,
    axisTransform,
    scale,
    intensity: settings.intensity ?? 1,
    boxProjection: settings.boxProjection ?? false,
  };
}
