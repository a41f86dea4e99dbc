"""Axis-aligned BVH over particle extent boxes.

Each particle's box is its mean +- sigma_cut * sqrt(diag(Sigma)), the
tight AABB of the sigma_cut confidence ellipsoid; any ray whose
peak response survives the tracer's Mahalanobis cut therefore passes
the slab test of the box, which makes accelerated and brute-force
traversal agree exactly. Construction is a median split over box
centroids along the widest centroid axis, with index-order tiebreaks
so rebuilding a scene always yields the same tree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySceneError
from .scene import GaussianScene, _sigma_diagonals

DEFAULT_LEAF_SIZE = 8


@dataclass(frozen=True, eq=False)
class Bvh:
    """Flat binary tree. Internal nodes have left/right >= 0; leaves
    carry [leaf_start, leaf_start + leaf_count) ranges into prim_index."""

    bounds_min: np.ndarray   # (M, 3)
    bounds_max: np.ndarray   # (M, 3)
    left: np.ndarray         # (M,) int64, -1 for leaves
    right: np.ndarray        # (M,) int64, -1 for leaves
    leaf_start: np.ndarray   # (M,) int64, -1 for internal nodes
    leaf_count: np.ndarray   # (M,) int64, 0 for internal nodes
    prim_index: np.ndarray   # (N,) int64 permutation of particle indices
    sigma_cut: float

    @property
    def n_nodes(self) -> int:
        return self.bounds_min.shape[0]


def particle_boxes(scene: GaussianScene, sigma_cut: float = 3.0) -> tuple[np.ndarray, np.ndarray]:
    """Per-particle AABBs of the sigma_cut ellipsoids; returns (lo, hi)."""
    half = sigma_cut * np.sqrt(_sigma_diagonals(scene.rotations, scene.scales))
    return scene.means - half, scene.means + half


def build_bvh(scene: GaussianScene, sigma_cut: float = 3.0,
              leaf_size: int = DEFAULT_LEAF_SIZE) -> Bvh:
    """Build the acceleration tree for a scene."""
    n = len(scene)
    if n == 0:
        raise EmptySceneError("cannot build a BVH over an empty scene")
    if sigma_cut <= 0.0:
        raise ValueError("sigma_cut must be positive")
    box_lo, box_hi = particle_boxes(scene, sigma_cut)
    centroids = scene.means  # box centroid coincides with the mean

    bounds_min: list[np.ndarray] = []
    bounds_max: list[np.ndarray] = []
    left: list[int] = []
    right: list[int] = []
    leaf_start: list[int] = []
    leaf_count: list[int] = []
    prim_order: list[np.ndarray] = []
    next_prim = 0

    def new_node(members: np.ndarray) -> int:
        node = len(left)
        bounds_min.append(box_lo[members].min(axis=0))
        bounds_max.append(box_hi[members].max(axis=0))
        left.append(-1)
        right.append(-1)
        leaf_start.append(-1)
        leaf_count.append(0)
        return node

    # Explicit stack; members arrays carry original particle indices.
    stack: list[tuple[int, np.ndarray]] = []
    root_members = np.arange(n, dtype=np.int64)
    stack.append((new_node(root_members), root_members))
    while stack:
        node, members = stack.pop()
        if members.shape[0] <= leaf_size:
            leaf_start[node] = next_prim
            leaf_count[node] = members.shape[0]
            prim_order.append(members)
            next_prim += members.shape[0]
            continue
        c = centroids[members]
        extent = c.max(axis=0) - c.min(axis=0)
        axis = int(np.argmax(extent))
        order = np.lexsort((members, c[:, axis]))
        mid = members.shape[0] // 2
        lo_members = members[order[:mid]]
        hi_members = members[order[mid:]]
        left[node] = new_node(lo_members)
        right[node] = new_node(hi_members)
        stack.append((left[node], lo_members))
        stack.append((right[node], hi_members))

    return Bvh(
        bounds_min=np.ascontiguousarray(np.stack(bounds_min)),
        bounds_max=np.ascontiguousarray(np.stack(bounds_max)),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        leaf_start=np.asarray(leaf_start, dtype=np.int64),
        leaf_count=np.asarray(leaf_count, dtype=np.int64),
        prim_index=np.ascontiguousarray(np.concatenate(prim_order)),
        sigma_cut=float(sigma_cut),
    )


def iter_leaf_particles(bvh: Bvh):
    """Yield (node, particle_index) for every leaf slot; test/debug helper."""
    for node in range(bvh.n_nodes):
        if bvh.left[node] < 0:
            s = bvh.leaf_start[node]
            for k in range(bvh.leaf_count[node]):
                yield node, int(bvh.prim_index[s + k])
