"""Exception types raised by the baking pipeline.

Argument-domain violations (non-positive scales, zero resolutions,
unknown face keys, ...) raise plain ``ValueError``; the classes here
cover file-format, data, and manifest failures that callers may want
to handle separately.
"""

from __future__ import annotations


class GbakeError(Exception):
    """Base class for pipeline errors."""


class PlyFormatError(GbakeError):
    """PLY file cannot be parsed against the expected layout."""


class SceneDataError(GbakeError):
    """A scene file parsed but contains invalid values (e.g. NaNs)."""


class EmptySceneError(GbakeError):
    """An operation requiring particles received a scene with none."""


class ManifestError(GbakeError):
    """Base class for bake-manifest validation failures."""


class ManifestVersionError(ManifestError):
    """Manifest format version is not supported."""


class ManifestCountError(ManifestError):
    """Probe count disagrees with the declared grid resolution."""


class ManifestPathError(ManifestError):
    """A face path is missing from the manifest or from disk."""
