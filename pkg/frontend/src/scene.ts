import { assembleCubemap, CubemapAssemblyError, type CubemapTexture } from "./cubemap.js";
import { loadManifest, type BakeManifest } from "./manifest.js";
import {
  resolveSettings,
  transformExtents,
  transformPoint,
  type ImportSettings,
  type ResolvedImportSettings,
} from "./transform.js";
import type { Vec3 } from "./vec.js";

/**
 * One reflection probe as an editor object. Probes are always created
 * custom-baked: the texture comes from the bake, the engine never
 * re-renders it.
 */
export interface ReflectionProbe {
  id: number;
  name: string;
  position: Vec3;
  /** Full influence box size per axis, in engine units. */
  boxSize: Vec3;
  mode: "custom";
  intensity: number;
  boxProjection: boolean;
  texture: CubemapTexture;
}

export interface ProbeImportError {
  probeId: number;
  file: string;
  message: string;
}

/** What a summary dialog would show after an import. */
export interface ImportSummary {
  created: number;
  replaced: number;
  errors: ProbeImportError[];
}

/** A minimal stand-in for the open editor scene: probes keyed by id. */
export class EditorScene {
  private probes = new Map<number, ReflectionProbe>();

  get count(): number {
    return this.probes.size;
  }

  get(id: number): ReflectionProbe | undefined {
    return this.probes.get(id);
  }

  all(): ReflectionProbe[] {
    return [...this.probes.values()].sort((a, b) => a.id - b.id);
  }

  put(probe: ReflectionProbe): boolean {
    const replaced = this.probes.has(probe.id);
    this.probes.set(probe.id, probe);
    return replaced;
  }
}

/**
 * Import every probe of a manifest into the scene.
 *
 * Manifest-level problems (bad version, wrong count, missing face
 * paths) throw before anything is created. Per-probe texture problems
 * (a missing or corrupt PNG) are collected in the summary and the
 * remaining probes still import. Re-importing replaces probes by id,
 * never duplicates; a probe whose texture fails on re-import keeps its
 * previous version.
 */
export function importManifest(
  settings: ImportSettings,
  scene: EditorScene = new EditorScene(),
): { scene: EditorScene; manifest: BakeManifest; summary: ImportSummary } {
  const resolved = resolveSettings(settings);
  const manifest = loadManifest(resolved.manifestPath);
  const summary: ImportSummary = { created: 0, replaced: 0, errors: [] };

  for (const entry of manifest.probes) {
    let texture: CubemapTexture;
    try {
      texture = assembleCubemap(entry, manifest.baseDir, manifest.faceResolution);
    } catch (exc) {
      if (exc instanceof CubemapAssemblyError) {
        summary.errors.push({ probeId: entry.id, file: exc.file, message: exc.message });
        continue;
      }
      throw exc;
    }
    const probe = buildProbe(entry.id, entry.position, entry.influenceExtents, texture, resolved);
    if (scene.put(probe)) {
      summary.replaced++;
    } else {
      summary.created++;
    }
  }
  return { scene, manifest, summary };
}

function buildProbe(
  id: number,
  position: Vec3,
  extents: Vec3,
  texture: CubemapTexture,
  settings: ResolvedImportSettings,
): ReflectionProbe {
  return {
    id,
    name: `probe_${id}`,
    position: transformPoint(settings.axisTransform, position, settings.scale),
    boxSize: transformExtents(settings.axisTransform, extents, settings.scale),
    mode: "custom",
    intensity: settings.intensity,
    boxProjection: settings.boxProjection,
    texture,
  };
}
