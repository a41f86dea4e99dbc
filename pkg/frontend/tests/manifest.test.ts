import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { expect, it } from "vitest";

import {
  loadManifest,
  ManifestCountError,
  ManifestError,
  ManifestPathError,
  ManifestVersionError,
} from "../src/manifest.js";
import { BROKEN555, GRID555 } from "./paths.js";

function writeTemp(content: string): string {
  const path = join(mkdtempSync(join(tmpdir(), "manifest-")), "probes.json");
  writeFileSync(path, content);
  return path;
}

/** The fixture manifest with one edit applied, written to a temp file. */
function editedManifest(edit: (doc: any) => void): string {
  const doc = JSON.parse(readFileSync(GRID555, "utf-8"));
  edit(doc);
  return writeTemp(JSON.stringify(doc));
}

it("loads a real bake manifest", () => {
  const manifest = loadManifest(GRID555);
  expect(manifest.version).toBe(1);
  expect(manifest.coordinateConvention).toBe("scene_native");
  expect(manifest.faceResolution).toBe(4);
  expect(manifest.grid.resolution).toEqual([5, 5, 5]);
  expect(manifest.grid.bboxMin).toEqual([0, 0, 0]);
  expect(manifest.grid.bboxMax).toEqual([2, 2, 2]);
  expect(manifest.probes).toHaveLength(125);
  expect(manifest.probes[0].id).toBe(0);
  expect(manifest.probes[0].faces.px).toBe("probe_0_px.png");
});

it("verifies referenced files on request", () => {
  expect(() => loadManifest(GRID555, true)).not.toThrow();
  expect(() => loadManifest(BROKEN555, true)).toThrow(ManifestPathError);
  expect(() => loadManifest(BROKEN555, true)).toThrow(/probe 7 references missing file/);
});

it("rejects invalid JSON", () => {
  const path = writeTemp("{not json");
  expect(() => loadManifest(path)).toThrow(ManifestError);
  expect(() => loadManifest(path)).toThrow(/not valid JSON/);
});

it("rejects an unsupported version", () => {
  const path = editedManifest((doc) => {
    doc.version = 99;
  });
  expect(() => loadManifest(path)).toThrow(ManifestVersionError);
  expect(() => loadManifest(path)).toThrow(/version 99/);
});

it("rejects a probe count that disagrees with the grid", () => {
  const path = editedManifest((doc) => {
    doc.probes.pop();
  });
  expect(() => loadManifest(path)).toThrow(ManifestCountError);
  expect(() => loadManifest(path)).toThrow(/124 probes .* implies 125/);
});

it("rejects a probe missing a face path", () => {
  const path = editedManifest((doc) => {
    delete doc.probes[3].faces.nz;
  });
  expect(() => loadManifest(path)).toThrow(ManifestPathError);
  expect(() => loadManifest(path)).toThrow(/probe 3 is missing the 'nz' face/);
});

it("rejects a structurally incomplete manifest", () => {
  const path = editedManifest((doc) => {
    delete doc.face_resolution;
  });
  expect(() => loadManifest(path)).toThrow(ManifestError);
  expect(() => loadManifest(path)).toThrow(/malformed manifest/);
});

it("rejects a malformed position triple", () => {
  const path = editedManifest((doc) => {
    doc.probes[0].position = [1, 2];
  });
  expect(() => loadManifest(path)).toThrow(/array of three numbers/);
});
