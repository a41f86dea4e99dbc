import { execFileSync } from "node:child_process";
import { cpSync, mkdirSync, rmSync, unlinkSync } from "node:fs";
import { join } from "node:path";

import { FIXTURE_DIR } from "../paths.js";

// Fixtures are real bakes produced by the baker CLI, so the tests
// consume exactly the bytes an actual bake directory holds.
function gbake(...args: string[]): void {
  execFileSync("gbake", args, { stdio: "pipe" });
}

export default function setup(): void {
  rmSync(FIXTURE_DIR, { recursive: true, force: true });
  mkdirSync(FIXTURE_DIR, { recursive: true });

  const ply = join(FIXTURE_DIR, "scene.ply");
  gbake("gen", "smooth", "--count", "8", "--seed", "3", "--out", ply);

  // the 5x5x5 grid the import acceptance check runs against
  gbake(
    "bake", ply,
    "--out", join(FIXTURE_DIR, "grid555"),
    "--grid", "5,5,5",
    "--face-res", "4",
    "--bbox-min", "0,0,0",
    "--bbox-max", "2,2,2",
    "--workers", "1",
  );

  // a probe off to +x on a known background: its px face looks away
  // from every particle (pure quantized background), while its nx face
  // looks back at the whole scene
  gbake(
    "bake", ply,
    "--out", join(FIXTURE_DIR, "bg"),
    "--grid", "1,1,1",
    "--face-res", "8",
    "--bbox-min", "20,-1,-1",
    "--bbox-max", "22,1,1",
    "--background", "0.25,0.5,0.75",
    "--workers", "1",
  );

  // same bake with one face PNG deleted, for the error-continuation path
  const broken = join(FIXTURE_DIR, "broken555");
  cpSync(join(FIXTURE_DIR, "grid555"), broken, { recursive: true });
  unlinkSync(join(broken, "probe_7_py.png"));
}
