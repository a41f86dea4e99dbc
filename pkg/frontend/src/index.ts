export { FACE_KEYS, MANIFEST_VERSION, loadManifest, ManifestError, ManifestVersionError, ManifestCountError, ManifestPathError } from "./manifest.js";
export type { BakeManifest, ManifestGrid, ManifestProbe, FaceKey } from "./manifest.js";
export { readFacePng, FacePngError } from "./png.js";
export type { FaceImage } from "./png.js";
export { FACE_BASES, assembleCubemap, CubemapAssemblyError } from "./cubemap.js";
export type { CubemapTexture } from "./cubemap.js";
export { IDENTITY, validateAxisTransform, transformPoint, transformExtents, resolveSettings, AxisTransformError } from "./transform.js";
export type { Mat3, ImportSettings, ResolvedImportSettings } from "./transform.js";
export { EditorScene, importManifest } from "./scene.js";
export type { ReflectionProbe, ImportSummary, ProbeImportError } from "./scene.js";
export { volumeGizmos, gridEnclosesProbeCenters, PROBE_GIZMO_COLOR, GRID_GIZMO_COLOR } from "./gizmos.js";
export type { BoxGizmo } from "./gizmos.js";
export { vec3 } from "./vec.js";
export type { Vec3 } from "./vec.js";
