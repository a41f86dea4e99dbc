import { readFileSync, writeFileSync, mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { expect, it } from "vitest";

import { ManifestVersionError } from "../src/manifest.js";
import { EditorScene, importManifest } from "../src/scene.js";
import { AxisTransformError, type Mat3 } from "../src/transform.js";
import { maxAbsDiff } from "../src/vec.js";
import { BROKEN555, GRID555 } from "./paths.js";

it("creates one probe per manifest entry", () => {
  const { scene, manifest, summary } = importManifest({ manifestPath: GRID555 });
  expect(summary).toEqual({ created: 125, replaced: 0, errors: [] });
  expect(scene.count).toBe(125);
  for (const entry of manifest.probes) {
    const probe = scene.get(entry.id)!;
    expect(probe.name).toBe(`probe_${entry.id}`);
    expect(probe.mode).toBe("custom");
    expect(probe.intensity).toBe(1);
    expect(probe.boxProjection).toBe(false);
    expect(probe.texture.faceSize).toBe(4);
    // identity transform: engine space is bake space
    expect(maxAbsDiff(probe.position, entry.position)).toBeLessThanOrEqual(1e-5);
    expect(probe.boxSize).toEqual(entry.influenceExtents);
  }
});

it("places probes at the grid cell centers", () => {
  // the fixture grid splits [0, 2] five ways per axis: cell 0.4, first
  // center at 0.2, last at 1.8; probes are ordered z, then y, then x
  const { scene } = importManifest({ manifestPath: GRID555 });
  expect(maxAbsDiff(scene.get(0)!.position, [0.2, 0.2, 0.2])).toBeLessThanOrEqual(1e-12);
  expect(maxAbsDiff(scene.get(124)!.position, [1.8, 1.8, 1.8])).toBeLessThanOrEqual(1e-12);
  expect(maxAbsDiff(scene.get(1)!.position, [0.6, 0.2, 0.2])).toBeLessThanOrEqual(1e-12);
  expect(maxAbsDiff(scene.get(5)!.position, [0.2, 0.6, 0.2])).toBeLessThanOrEqual(1e-12);
  expect(maxAbsDiff(scene.get(25)!.position, [0.2, 0.2, 0.6])).toBeLessThanOrEqual(1e-12);
});

it("replaces on re-import instead of duplicating", () => {
  const { scene } = importManifest({ manifestPath: GRID555 });
  const before = scene.get(42)!;
  const { summary } = importManifest({ manifestPath: GRID555 }, scene);
  expect(scene.count).toBe(125);
  expect(summary.created).toBe(0);
  expect(summary.replaced).toBe(125);
  const after = scene.get(42)!;
  expect(after).not.toBe(before); // a fresh object, same identity
  expect(after.id).toBe(42);
  expect(after.position).toEqual(before.position);
});

it("applies the axis transform and scale to positions and sizes", () => {
  const swapYz: Mat3 = [
    [1, 0, 0],
    [0, 0, 1],
    [0, -1, 0],
  ];
  const { scene, manifest } = importManifest({
    manifestPath: GRID555,
    axisTransform: swapYz,
    scale: 2,
  });
  for (const entry of manifest.probes.slice(0, 10)) {
    const probe = scene.get(entry.id)!;
    const [x, y, z] = entry.position;
    expect(maxAbsDiff(probe.position, [2 * x, 2 * z, -2 * y])).toBeLessThanOrEqual(1e-12);
    const [ex, ey, ez] = entry.influenceExtents;
    expect(maxAbsDiff(probe.boxSize, [2 * ex, 2 * ez, 2 * ey])).toBeLessThanOrEqual(1e-12);
  }
});

it("propagates intensity and box projection to every probe", () => {
  const { scene } = importManifest({
    manifestPath: GRID555,
    intensity: 0.5,
    boxProjection: true,
  });
  expect(scene.get(0)!.intensity).toBe(0.5);
  expect(scene.get(0)!.boxProjection).toBe(true);
});

it("continues past a probe whose face PNG is missing", () => {
  const { scene, summary } = importManifest({ manifestPath: BROKEN555 });
  expect(summary.created).toBe(124);
  expect(summary.errors).toHaveLength(1);
  expect(summary.errors[0].probeId).toBe(7);
  expect(summary.errors[0].file.endsWith("probe_7_py.png")).toBe(true);
  expect(scene.count).toBe(124);
  expect(scene.get(6)).toBeDefined();
  expect(scene.get(7)).toBeUndefined();
  expect(scene.get(8)).toBeDefined();
});

it("keeps the previous probe when its re-import fails", () => {
  const { scene } = importManifest({ manifestPath: GRID555 });
  const original = scene.get(7)!;
  const { summary } = importManifest({ manifestPath: BROKEN555 }, scene);
  expect(summary.errors).toHaveLength(1);
  expect(summary.replaced).toBe(124);
  expect(scene.count).toBe(125); // probe 7 survives from the first import
  expect(scene.get(7)).toBe(original);
});

it("creates nothing when the manifest itself is invalid", () => {
  const doc = JSON.parse(readFileSync(GRID555, "utf-8"));
  doc.version = 99;
  const path = join(mkdtempSync(join(tmpdir(), "import-")), "probes.json");
  writeFileSync(path, JSON.stringify(doc));

  const scene = new EditorScene();
  expect(() => importManifest({ manifestPath: path }, scene)).toThrow(ManifestVersionError);
  expect(scene.count).toBe(0);
});

it("rejects a bad transform before reading anything", () => {
  const bad: Mat3 = [
    [1, 0, 0],
    [0, 2, 0],
    [0, 0, 1],
  ];
  expect(() =>
    importManifest({ manifestPath: "/nonexistent/probes.json", axisTransform: bad }),
  ).toThrow(AxisTransformError);
});
