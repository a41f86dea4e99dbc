import { readFileSync, existsSync } from "node:fs";
import { dirname, join } from "node:path";

import type { Vec3 } from "./vec.js";

export const MANIFEST_VERSION = 1;
export const FACE_KEYS = ["px", "nx", "py", "ny", "pz", "nz"] as const;
export type FaceKey = (typeof FACE_KEYS)[number];

export class ManifestError extends Error {}
export class ManifestVersionError extends ManifestError {}
export class ManifestCountError extends ManifestError {}
export class ManifestPathError extends ManifestError {}

export interface ManifestGrid {
  bboxMin: Vec3;
  bboxMax: Vec3;
  resolution: readonly [number, number, number];
  overlap: number;
}

export interface ManifestProbe {
  id: number;
  position: Vec3;
  influenceExtents: Vec3;
  /** Face key to PNG path, relative to the manifest file. */
  faces: Record<FaceKey, string>;
}

export interface BakeManifest {
  version: number;
  coordinateConvention: string;
  grid: ManifestGrid;
  faceResolution: number;
  probes: ManifestProbe[];
  /** Directory the face paths are relative to. */
  baseDir: string;
}

function asVec3(value: unknown, what: string): Vec3 {
  if (!Array.isArray(value) || value.length !== 3 || value.some((c) => typeof c !== "number")) {
    throw new ManifestError(`${what} must be an array of three numbers`);
  }
  return [value[0], value[1], value[2]];
}

/**
 * Read and validate probes.json.
 *
 * The rules mirror the baker's own loader: the version must match, the
 * probe count must equal the product of the grid resolution, and every
 * probe must carry all six face paths. With checkFiles, every
 * referenced PNG must exist next to the manifest.
 */
export function loadManifest(path: string, checkFiles = false): BakeManifest {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8"));
  } catch (exc) {
    if (exc instanceof SyntaxError) {
      throw new ManifestError(`${path}: not valid JSON (${exc.message})`);
    }
    throw exc;
  }
  if (typeof raw !== "object" || raw === null) {
    throw new ManifestError(`${path}: manifest must be a JSON object`);
  }
  const doc = raw as Record<string, unknown>;

  if (doc.version !== MANIFEST_VERSION) {
    throw new ManifestVersionError(
      `${path}: unsupported manifest version ${JSON.stringify(doc.version)} (expected ${MANIFEST_VERSION})`,
    );
  }

  const gridRaw = doc.grid as Record<string, unknown> | undefined;
  if (gridRaw === undefined || typeof doc.face_resolution !== "number" ||
      typeof doc.coordinate_convention !== "string" || !Array.isArray(doc.probes)) {
    throw new ManifestError(`${path}: malformed manifest (missing grid, face_resolution, coordinate_convention, or probes)`);
  }
  const resolutionRaw = asVec3(gridRaw.resolution, `${path}: grid.resolution`);
  if (resolutionRaw.some((n) => !Number.isInteger(n) || n < 1)) {
    throw new ManifestError(`${path}: grid.resolution must be positive integers`);
  }
  if (typeof gridRaw.overlap !== "number") {
    throw new ManifestError(`${path}: grid.overlap must be a number`);
  }
  const grid: ManifestGrid = {
    bboxMin: asVec3(gridRaw.bbox_min, `${path}: grid.bbox_min`),
    bboxMax: asVec3(gridRaw.bbox_max, `${path}: grid.bbox_max`),
    resolution: [resolutionRaw[0], resolutionRaw[1], resolutionRaw[2]],
    overlap: gridRaw.overlap,
  };

  const expected = grid.resolution[0] * grid.resolution[1] * grid.resolution[2];
  if (doc.probes.length !== expected) {
    throw new ManifestCountError(
      `${path}: manifest lists ${doc.probes.length} probes but the grid resolution ` +
        `(${grid.resolution.join(", ")}) implies ${expected}`,
    );
  }

  const baseDir = dirname(path);
  const probes: ManifestProbe[] = doc.probes.map((entryRaw) => {
    const entry = entryRaw as Record<string, unknown>;
    const facesRaw = (entry.faces ?? {}) as Record<string, unknown>;
    const faces = {} as Record<FaceKey, string>;
    for (const key of FACE_KEYS) {
      const face = facesRaw[key];
      if (typeof face !== "string") {
        throw new ManifestPathError(
          `${path}: probe ${entry.id} is missing the '${key}' face path`,
        );
      }
      faces[key] = face;
    }
    if (typeof entry.id !== "number" || !Number.isInteger(entry.id)) {
      throw new ManifestError(`${path}: probe id must be an integer`);
    }
    return {
      id: entry.id,
      position: asVec3(entry.position, `${path}: probe ${entry.id} position`),
      influenceExtents: asVec3(entry.influence_extents, `${path}: probe ${entry.id} influence_extents`),
      faces,
    };
  });

  const manifest: BakeManifest = {
    version: doc.version,
    coordinateConvention: doc.coordinate_convention,
    grid,
    faceResolution: doc.face_resolution,
    probes,
    baseDir,
  };

  if (checkFiles) {
    for (const probe of probes) {
      for (const key of FACE_KEYS) {
        const full = join(baseDir, probe.faces[key]);
        if (!existsSync(full)) {
          throw new ManifestPathError(`${path}: probe ${probe.id} references missing file ${full}`);
        }
      }
    }
  }
  return manifest;
}
