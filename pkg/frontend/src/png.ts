import { readFileSync } from "node:fs";

import { PNG } from "pngjs";

export class FacePngError extends Error {}

export interface FaceImage {
  width: number;
  height: number;
  /** Row-major RGB bytes, 3 per pixel (alpha stripped). */
  rgb: Uint8Array;
}

/** Decode one baked face PNG into raw 8-bit RGB. */
export function readFacePng(path: string): FaceImage {
  let buffer: Buffer;
  try {
    buffer = readFileSync(path);
  } catch (exc) {
    throw new FacePngError(`cannot read ${path}: ${(exc as Error).message}`);
  }
  let png: PNG;
  try {
    png = PNG.sync.read(buffer);
  } catch (exc) {
    throw new FacePngError(`${path} is not a valid PNG: ${(exc as Error).message}`);
  }
  // pngjs always decodes to RGBA; the bakes carry no alpha, drop it
  const pixels = png.width * png.height;
  const rgb = new Uint8Array(pixels * 3);
  for (let i = 0; i < pixels; i++) {
    rgb[i * 3] = png.data[i * 4];
    rgb[i * 3 + 1] = png.data[i * 4 + 1];
    rgb[i * 3 + 2] = png.data[i * 4 + 2];
  }
  return { width: png.width, height: png.height, rgb };
}
