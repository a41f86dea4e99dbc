import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { expect, it } from "vitest";

import { loadManifest } from "../src/manifest.js";
import { FacePngError, readFacePng } from "../src/png.js";
import { BACKGROUND_BAKE } from "./paths.js";

it("decodes a baked face to exact quantized background bytes", () => {
  // the fixture probe sits far on +x with every particle behind it, so
  // its +x face is pure background (0.25, 0.5, 0.75). The baker
  // quantizes by floor(c * 255 + 0.5):
  //   0.25 * 255 + 0.5 = 64.25  -> 64
  //   0.50 * 255 + 0.5 = 128.0  -> 128
  //   0.75 * 255 + 0.5 = 191.75 -> 191
  const manifest = loadManifest(BACKGROUND_BAKE);
  const image = readFacePng(join(manifest.baseDir, manifest.probes[0].faces.px));
  expect(image.width).toBe(8);
  expect(image.height).toBe(8);
  expect(image.rgb).toHaveLength(8 * 8 * 3);
  for (let i = 0; i < image.rgb.length; i += 3) {
    expect([image.rgb[i], image.rgb[i + 1], image.rgb[i + 2]]).toEqual([64, 128, 191]);
  }
});

it("decodes a face looking at the scene to non-constant pixels", () => {
  const manifest = loadManifest(BACKGROUND_BAKE);
  const image = readFacePng(join(manifest.baseDir, manifest.probes[0].faces.nx));
  const first = [image.rgb[0], image.rgb[1], image.rgb[2]];
  let anyDifferent = false;
  for (let i = 0; i < image.rgb.length; i += 3) {
    if (image.rgb[i] !== first[0] || image.rgb[i + 1] !== first[1] || image.rgb[i + 2] !== first[2]) {
      anyDifferent = true;
      break;
    }
  }
  expect(anyDifferent).toBe(true);
});

it("fails cleanly on a missing file", () => {
  expect(() => readFacePng("/nonexistent/face.png")).toThrow(FacePngError);
  expect(() => readFacePng("/nonexistent/face.png")).toThrow(/cannot read/);
});

it("fails cleanly on a file that is not a PNG", () => {
  const path = join(mkdtempSync(join(tmpdir(), "png-")), "junk.png");
  writeFileSync(path, "definitely not a png");
  expect(() => readFacePng(path)).toThrow(FacePngError);
  expect(() => readFacePng(path)).toThrow(/not a valid PNG/);
});
