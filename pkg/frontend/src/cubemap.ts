import { join } from "node:path";

import { FACE_KEYS, type FaceKey, type ManifestProbe } from "./manifest.js";
import { readFacePng, FacePngError } from "./png.js";
import type { Vec3 } from "./vec.js";

/**
 * Orthonormal (right, up, forward) basis per cube face, matching the
 * baker's camera convention: pixel (i, j) of a face samples direction
 * u * right + v * up + forward with u right-increasing and v
 * down-decreasing. Each basis is right-handed (right x up = forward).
 */
export const FACE_BASES: Record<FaceKey, { right: Vec3; up: Vec3; forward: Vec3 }> = {
  px: { right: [0, 0, -1], up: [0, 1, 0], forward: [1, 0, 0] },
  nx: { right: [0, 0, 1], up: [0, 1, 0], forward: [-1, 0, 0] },
  py: { right: [1, 0, 0], up: [0, 0, -1], forward: [0, 1, 0] },
  ny: { right: [1, 0, 0], up: [0, 0, 1], forward: [0, -1, 0] },
  pz: { right: [1, 0, 0], up: [0, 1, 0], forward: [0, 0, 1] },
  nz: { right: [-1, 0, 0], up: [0, 1, 0], forward: [0, 0, -1] },
};

export class CubemapAssemblyError extends Error {
  constructor(
    message: string,
    readonly file: string,
  ) {
    super(message);
  }
}

export interface CubemapTexture {
  faceSize: number;
  /** Face key to row-major RGB bytes, in the FACE_BASES orientation. */
  faces: Record<FaceKey, Uint8Array>;
}

/**
 * Load the six face PNGs of one manifest probe into a single texture.
 *
 * Faces are stored in manifest order and orientation; the per-face
 * bases above say how each maps to directions, so a renderer can bind
 * them without re-flipping. All six faces must be square and share one
 * resolution.
 */
export function assembleCubemap(
  probe: ManifestProbe,
  baseDir: string,
  expectedSize?: number,
): CubemapTexture {
  const faces = {} as Record<FaceKey, Uint8Array>;
  let faceSize = expectedSize;
  for (const key of FACE_KEYS) {
    const file = join(baseDir, probe.faces[key]);
    let image;
    try {
      image = readFacePng(file);
    } catch (exc) {
      if (exc instanceof FacePngError) {
        throw new CubemapAssemblyError(exc.message, file);
      }
      throw exc;
    }
    if (image.width !== image.height) {
      throw new CubemapAssemblyError(
        `${file}: cubemap faces must be square, got ${image.width}x${image.height}`,
        file,
      );
    }
    if (faceSize === undefined) {
      faceSize = image.width;
    } else if (image.width !== faceSize) {
      throw new CubemapAssemblyError(
        `${file}: face is ${image.width}px but the cubemap is ${faceSize}px`,
        file,
      );
    }
    faces[key] = image.rgb;
  }
  return { faceSize: faceSize as number, faces };
}
