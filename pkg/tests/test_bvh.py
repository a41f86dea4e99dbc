"""BVH construction invariants over particle bounding boxes."""

import numpy as np
import pytest

from gbake.bvh import Bvh, build_bvh, iter_leaf_particles, particle_boxes
from gbake.errors import EmptySceneError
from gbake.scene import GaussianScene, covariance
from gbake.synth import random_scene


def single_particle_scene(mean, quat, scale):
    return GaussianScene(np.array([mean], dtype=float),
                         np.array([quat], dtype=float),
                         np.array([scale], dtype=float),
                         np.array([0.8]), np.zeros((1, 3, 16)), 0)


def leaf_members(bvh):
    """node -> list of particle indices, in stored order."""
    out = {}
    for node, idx in iter_leaf_particles(bvh):
        out.setdefault(node, []).append(idx)
    return out


def test_particle_boxes_axis_aligned_case():
    # axis-aligned particle: half extent is exactly sigma_cut * scale
    s = single_particle_scene([1.0, 2.0, 3.0], [1.0, 0, 0, 0], [0.5, 1.0, 2.0])
    lo, hi = particle_boxes(s, sigma_cut=3.0)
    np.testing.assert_allclose(lo[0], [1 - 1.5, 2 - 3.0, 3 - 6.0], atol=1e-12)
    np.testing.assert_allclose(hi[0], [1 + 1.5, 2 + 3.0, 3 + 6.0], atol=1e-12)


def test_particle_boxes_contain_cut_ellipsoid():
    # sample the 3-sigma ellipsoid surface; every point must be in the box
    scene = random_scene(count=50, seed=13)
    lo, hi = particle_boxes(scene, sigma_cut=3.0)
    rng = np.random.default_rng(0)
    sphere = rng.normal(size=(256, 3))
    sphere /= np.linalg.norm(sphere, axis=1, keepdims=True)
    for i in range(len(scene)):
        cov = covariance(scene.rotations[i], scene.scales[i])
        w, v = np.linalg.eigh(cov)
        pts = scene.means[i] + 3.0 * (sphere * np.sqrt(w)) @ v.T
        assert np.all(pts >= lo[i] - 1e-9) and np.all(pts <= hi[i] + 1e-9)


def test_box_touches_ellipsoid_along_principal_axes():
    # the AABB of the ellipsoid is tight: each face is attained
    s = single_particle_scene([0.0, 0.0, 0.0],
                              [np.sqrt(0.5), 0.0, 0.0, np.sqrt(0.5)],
                              [2.0, 1.0, 0.5])
    lo, hi = particle_boxes(s, sigma_cut=3.0)
    cov = covariance(s.rotations[0], s.scales[0])
    # max x over the ellipsoid x^T Sigma^-1 x = 9 is 3 sqrt(Sigma_xx)
    np.testing.assert_allclose(hi[0], 3.0 * np.sqrt(np.diag(cov)), atol=1e-12)
    np.testing.assert_allclose(lo[0], -hi[0], atol=1e-12)


def test_single_particle_tree_is_one_leaf():
    s = single_particle_scene([0.0, 0.0, 0.0], [1.0, 0, 0, 0], [1.0, 1.0, 1.0])
    bvh = build_bvh(s)
    assert bvh.n_nodes == 1
    lo, hi = particle_boxes(s)
    np.testing.assert_array_equal(bvh.bounds_min[0], lo[0])
    np.testing.assert_array_equal(bvh.bounds_max[0], hi[0])
    assert leaf_members(bvh) == {0: [0]}


def test_two_disjoint_particles_split():
    s = GaussianScene(np.array([[-10.0, 0, 0], [10.0, 0, 0]]),
                      np.tile([1.0, 0, 0, 0], (2, 1)), np.ones((2, 3)),
                      np.array([0.5, 0.5]), np.zeros((2, 3, 16)), 0)
    bvh = build_bvh(s, leaf_size=1)
    assert bvh.n_nodes == 3
    kids = (int(bvh.left[0]), int(bvh.right[0]))
    assert all(k > 0 for k in kids)
    # root box is the union of the children
    np.testing.assert_array_equal(
        bvh.bounds_min[0],
        np.minimum(bvh.bounds_min[kids[0]], bvh.bounds_min[kids[1]]))
    np.testing.assert_array_equal(
        bvh.bounds_max[0],
        np.maximum(bvh.bounds_max[kids[0]], bvh.bounds_max[kids[1]]))


def test_every_particle_in_exactly_one_leaf():
    scene = random_scene(count=10_000, seed=21)
    bvh = build_bvh(scene)
    seen = np.zeros(len(scene), dtype=int)
    for _, idx in iter_leaf_particles(bvh):
        seen[idx] += 1
    np.testing.assert_array_equal(seen, 1)


def test_leaves_respect_leaf_size():
    scene = random_scene(count=777, seed=3)
    for leaf_size in (1, 4, 8):
        bvh = build_bvh(scene, leaf_size=leaf_size)
        sizes = [len(m) for m in leaf_members(bvh).values()]
        assert max(sizes) <= leaf_size
        assert sum(sizes) == 777


def test_nodes_contain_their_descendants():
    scene = random_scene(count=500, seed=8)
    bvh = build_bvh(scene)
    lo, hi = particle_boxes(scene, sigma_cut=bvh.sigma_cut)

    def check(node):
        if bvh.left[node] < 0:  # leaf
            s = bvh.leaf_start[node]
            members = bvh.prim_index[s:s + bvh.leaf_count[node]]
            assert np.all(lo[members] >= bvh.bounds_min[node] - 1e-12)
            assert np.all(hi[members] <= bvh.bounds_max[node] + 1e-12)
            return
        for child in (int(bvh.left[node]), int(bvh.right[node])):
            assert np.all(bvh.bounds_min[node] <= bvh.bounds_min[child])
            assert np.all(bvh.bounds_max[node] >= bvh.bounds_max[child])
            check(child)

    check(0)


def test_build_is_deterministic():
    scene = random_scene(count=2000, seed=17)
    a = build_bvh(scene)
    b = build_bvh(scene)
    np.testing.assert_array_equal(a.bounds_min, b.bounds_min)
    np.testing.assert_array_equal(a.bounds_max, b.bounds_max)
    np.testing.assert_array_equal(a.prim_index, b.prim_index)
    np.testing.assert_array_equal(a.left, b.left)
    np.testing.assert_array_equal(a.right, b.right)


def test_duplicate_centroids_do_not_break_the_split():
    # 20 particles piled on one point still terminate at leaf size
    n = 20
    s = GaussianScene(np.zeros((n, 3)), np.tile([1.0, 0, 0, 0], (n, 1)),
                      np.full((n, 3), 0.3), np.full(n, 0.9),
                      np.zeros((n, 3, 16)), 0)
    bvh = build_bvh(s, leaf_size=8)
    sizes = [len(m) for m in leaf_members(bvh).values()]
    assert max(sizes) <= 8 and sum(sizes) == n


def test_empty_scene_rejected():
    s = GaussianScene(np.zeros((0, 3)), np.zeros((0, 4)), np.zeros((0, 3)),
                      np.zeros(0), np.zeros((0, 3, 16)), 0)
    with pytest.raises(EmptySceneError):
        build_bvh(s)


def test_invalid_arguments_rejected(scene_1k):
    with pytest.raises(ValueError):
        build_bvh(scene_1k, sigma_cut=0.0)
    with pytest.raises(ValueError):
        build_bvh(scene_1k, leaf_size=0)


def test_sigma_cut_recorded(scene_1k):
    bvh = build_bvh(scene_1k, sigma_cut=4.0)
    assert isinstance(bvh, Bvh)
    assert bvh.sigma_cut == 4.0
    # wider cut gives strictly larger root box on a generic scene
    tight = build_bvh(scene_1k, sigma_cut=3.0)
    assert np.all(bvh.bounds_min[0] < tight.bounds_min[0])
    assert np.all(bvh.bounds_max[0] > tight.bounds_max[0])
