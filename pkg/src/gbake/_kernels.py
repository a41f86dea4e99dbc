"""Compiled per-ray kernels shared by every tracing entry point.

Accelerated and brute-force traversal call the same response, sort, and
compositing routines, so the two paths produce bit-identical images;
the only difference is which particles get considered, and the box/
Mahalanobis-cut pairing guarantees the surviving sets match. All math
is float64 and branch-deterministic (no fastmath), so results do not
depend on chunking or thread count.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Real SH basis constants, degrees 0..3 (same values as gbake.sh).
_C0 = 0.28209479177387814
_C1 = 0.4886025119029199
_C2_0 = 1.0925484305920792
_C2_1 = -1.0925484305920792
_C2_2 = 0.31539156525252005
_C2_3 = -1.0925484305920792
_C2_4 = 0.5462742152960396
_C3_0 = -0.5900435899266435
_C3_1 = 2.890611442640554
_C3_2 = -0.4570457994644658
_C3_3 = 0.3731763325901154
_C3_4 = -0.4570457994644658
_C3_5 = 1.445305721320277
_C3_6 = -0.5900435899266435

_STACK_SIZE = 128  # DFS needs depth+1 slots; median split depth << 128


@njit(cache=True, nogil=True)
def sh_basis16(dx, dy, dz, out):
    out[0] = _C0
    out[1] = -_C1 * dy
    out[2] = _C1 * dz
    out[3] = -_C1 * dx
    xx = dx * dx
    yy = dy * dy
    zz = dz * dz
    xy = dx * dy
    yz = dy * dz
    xz = dx * dz
    out[4] = _C2_0 * xy
    out[5] = _C2_1 * yz
    out[6] = _C2_2 * (2.0 * zz - xx - yy)
    out[7] = _C2_3 * xz
    out[8] = _C2_4 * (xx - yy)
    out[9] = _C3_0 * dy * (3.0 * xx - yy)
    out[10] = _C3_1 * xy * dz
    out[11] = _C3_2 * dy * (4.0 * zz - xx - yy)
    out[12] = _C3_3 * dz * (2.0 * zz - 3.0 * xx - 3.0 * yy)
    out[13] = _C3_4 * dx * (4.0 * zz - xx - yy)
    out[14] = _C3_5 * dz * (xx - yy)
    out[15] = _C3_6 * dx * (xx - 3.0 * yy)


@njit(cache=True, nogil=True)
def sh_rgb16(sh, pi, basis):
    """Decode one particle's RGB against a precomputed basis vector."""
    r = 0.5
    g = 0.5
    b = 0.5
    for k in range(16):
        r += sh[pi, 0, k] * basis[k]
        g += sh[pi, 1, k] * basis[k]
        b += sh[pi, 2, k] * basis[k]
    if r < 0.0:
        r = 0.0
    if g < 0.0:
        g = 0.0
    if b < 0.0:
        b = 0.0
    return r, g, b


@njit(cache=True, nogil=True)
def response(ox, oy, oz, dx, dy, dz, means, inv_cov, opacities, pi,
             t_min, alpha_floor, sigma_cut2):
    """Peak response of one particle to one ray.

    Returns (ok, t_peak, alpha). The peak depth maximizes the Gaussian
    along the ray; the hit is kept only if it lies past t_min, within
    the Mahalanobis cut, and at or above the alpha floor.
    """
    mx = means[pi, 0] - ox
    my = means[pi, 1] - oy
    mz = means[pi, 2] - oz
    i00 = inv_cov[pi, 0, 0]
    i01 = inv_cov[pi, 0, 1]
    i02 = inv_cov[pi, 0, 2]
    i11 = inv_cov[pi, 1, 1]
    i12 = inv_cov[pi, 1, 2]
    i22 = inv_cov[pi, 2, 2]
    # A = Sigma^-1 d (symmetric matrix, upper triangle reused)
    ax = i00 * dx + i01 * dy + i02 * dz
    ay = i01 * dx + i11 * dy + i12 * dz
    az = i02 * dx + i12 * dy + i22 * dz
    denom = dx * ax + dy * ay + dz * az
    t = (mx * ax + my * ay + mz * az) / denom
    if t <= t_min:
        return False, 0.0, 0.0
    # displacement from the mean at the peak: x(t) - mu = t d - (mu - o)
    px = t * dx - mx
    py = t * dy - my
    pz = t * dz - mz
    q = (px * (i00 * px + i01 * py + i02 * pz)
         + py * (i01 * px + i11 * py + i12 * pz)
         + pz * (i02 * px + i12 * py + i22 * pz))
    if q > sigma_cut2:
        return False, 0.0, 0.0
    alpha = opacities[pi] * np.exp(-0.5 * q)
    if alpha < alpha_floor:
        return False, 0.0, 0.0
    return True, t, alpha


@njit(cache=True, nogil=True)
def _slab_hit(ox, oy, oz, dx, dy, dz, t_min, bmin, bmax):
    t0 = t_min
    t1 = np.inf
    for a in range(3):
        if a == 0:
            o = ox
            d = dx
        elif a == 1:
            o = oy
            d = dy
        else:
            o = oz
            d = dz
        if d == 0.0:
            if o < bmin[a] or o > bmax[a]:
                return False
        else:
            inv = 1.0 / d
            ta = (bmin[a] - o) * inv
            tb = (bmax[a] - o) * inv
            if ta > tb:
                ta, tb = tb, ta
            if ta > t0:
                t0 = ta
            if tb < t1:
                t1 = tb
            if t0 > t1:
                return False
    return True


@njit(cache=True, nogil=True)
def _gather_bvh(ox, oy, oz, dx, dy, dz, t_min,
                bounds_min, bounds_max, left, right, leaf_start, leaf_count,
                prim_index, means, inv_cov, opacities,
                alpha_floor, sigma_cut2, t_buf, a_buf, i_buf, stack):
    n = 0
    sp = 0
    stack[sp] = 0
    sp += 1
    while sp > 0:
        sp -= 1
        node = stack[sp]
        if not _slab_hit(ox, oy, oz, dx, dy, dz, t_min,
                         bounds_min[node], bounds_max[node]):
            continue
        if left[node] >= 0:
            stack[sp] = right[node]
            sp += 1
            stack[sp] = left[node]
            sp += 1
        else:
            s = leaf_start[node]
            for k in range(leaf_count[node]):
                pi = prim_index[s + k]
                ok, t, alpha = response(ox, oy, oz, dx, dy, dz,
                                        means, inv_cov, opacities, pi,
                                        t_min, alpha_floor, sigma_cut2)
                if ok:
                    t_buf[n] = t
                    a_buf[n] = alpha
                    i_buf[n] = pi
                    n += 1
    return n


@njit(cache=True, nogil=True)
def _gather_brute(ox, oy, oz, dx, dy, dz, t_min,
                  means, inv_cov, opacities,
                  alpha_floor, sigma_cut2, t_buf, a_buf, i_buf):
    n = 0
    for pi in range(means.shape[0]):
        ok, t, alpha = response(ox, oy, oz, dx, dy, dz,
                                means, inv_cov, opacities, pi,
                                t_min, alpha_floor, sigma_cut2)
        if ok:
            t_buf[n] = t
            a_buf[n] = alpha
            i_buf[n] = pi
            n += 1
    return n


@njit(cache=True, nogil=True)
def _order_hits(t_buf, i_buf, n):
    """Depth order with ascending-particle-index tiebreak.

    argsort gives the depth order; runs of exactly equal depth are then
    insertion-sorted by particle index, so the final order never depends
    on gathering order or sort stability.
    """
    order = np.argsort(t_buf[:n])
    i = 0
    while i < n - 1:
        if t_buf[order[i]] == t_buf[order[i + 1]]:
            j = i + 1
            while j < n and t_buf[order[j]] == t_buf[order[i]]:
                j += 1
            for a in range(i + 1, j):
                key = order[a]
                b = a - 1
                while b >= i and i_buf[order[b]] > i_buf[key]:
                    order[b + 1] = order[b]
                    b -= 1
                order[b + 1] = key
            i = j
        else:
            i += 1
    return order


@njit(cache=True, nogil=True)
def _composite(dx, dy, dz, t_buf, a_buf, i_buf, n, order, sh_coeffs,
               t_floor, bg, out_row):
    """Front-to-back alpha compositing of ordered hits over a background."""
    basis = np.empty(16, dtype=np.float64)
    sh_basis16(dx, dy, dz, basis)
    trans = 1.0
    r = 0.0
    g = 0.0
    b = 0.0
    for k in range(n):
        if trans < t_floor:
            break
        idx = order[k]
        cr, cg, cb = sh_rgb16(sh_coeffs, i_buf[idx], basis)
        w = a_buf[idx] * trans
        r += cr * w
        g += cg * w
        b += cb * w
        trans *= 1.0 - a_buf[idx]
    out_row[0] = r + trans * bg[0]
    out_row[1] = g + trans * bg[1]
    out_row[2] = b + trans * bg[2]
    return trans


@njit(cache=True, nogil=True)
def trace_batch_bvh(origins, dirs, t_min,
                    bounds_min, bounds_max, left, right, leaf_start,
                    leaf_count, prim_index,
                    means, inv_cov, opacities, sh_coeffs,
                    alpha_floor, sigma_cut2, t_floor, bg,
                    out_rgb, out_trans):
    n_particles = means.shape[0]
    t_buf = np.empty(n_particles, dtype=np.float64)
    a_buf = np.empty(n_particles, dtype=np.float64)
    i_buf = np.empty(n_particles, dtype=np.int64)
    stack = np.empty(_STACK_SIZE, dtype=np.int64)
    for rr in range(origins.shape[0]):
        ox, oy, oz = origins[rr, 0], origins[rr, 1], origins[rr, 2]
        dx, dy, dz = dirs[rr, 0], dirs[rr, 1], dirs[rr, 2]
        n = _gather_bvh(ox, oy, oz, dx, dy, dz, t_min,
                        bounds_min, bounds_max, left, right,
                        leaf_start, leaf_count, prim_index,
                        means, inv_cov, opacities,
                        alpha_floor, sigma_cut2, t_buf, a_buf, i_buf, stack)
        order = _order_hits(t_buf, i_buf, n)
        out_trans[rr] = _composite(dx, dy, dz, t_buf, a_buf, i_buf, n, order,
                                   sh_coeffs, t_floor, bg, out_rgb[rr])


@njit(cache=True, nogil=True)
def trace_batch_brute(origins, dirs, t_min,
                      means, inv_cov, opacities, sh_coeffs,
                      alpha_floor, sigma_cut2, t_floor, bg,
                      out_rgb, out_trans):
    n_particles = means.shape[0]
    t_buf = np.empty(n_particles, dtype=np.float64)
    a_buf = np.empty(n_particles, dtype=np.float64)
    i_buf = np.empty(n_particles, dtype=np.int64)
    for rr in range(origins.shape[0]):
        ox, oy, oz = origins[rr, 0], origins[rr, 1], origins[rr, 2]
        dx, dy, dz = dirs[rr, 0], dirs[rr, 1], dirs[rr, 2]
        n = _gather_brute(ox, oy, oz, dx, dy, dz, t_min,
                          means, inv_cov, opacities,
                          alpha_floor, sigma_cut2, t_buf, a_buf, i_buf)
        order = _order_hits(t_buf, i_buf, n)
        out_trans[rr] = _composite(dx, dy, dz, t_buf, a_buf, i_buf, n, order,
                                   sh_coeffs, t_floor, bg, out_rgb[rr])
