"""Spherical-harmonic basis and color evaluation."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import sph_harm_y

from gbake.sh import num_coeffs, rgb_to_dc, sh_basis, sh_color

# (l, m) order of the 16 basis slots: degree-major, m ascending.
LM_ORDER = [(0, 0),
            (1, -1), (1, 0), (1, 1),
            (2, -2), (2, -1), (2, 0), (2, 1), (2, 2),
            (3, -3), (3, -2), (3, -1), (3, 0), (3, 1), (3, 2), (3, 3)]

C0 = 0.28209479177387814  # 1 / (2 sqrt(pi))


def reference_basis(d):
    """Real SH from scipy's complex harmonics, in the splatting convention.

    scipy's Y_l^m includes the Condon-Shortley phase.  The graphics-style
    real basis is (m=0) Re Y_l^0, (m>0) sqrt2 (-1)^m Re Y_l^m, and (m<0)
    sqrt2 (-1)^m Im Y_l^|m|.  The splatting tables fold in one more factor
    (-1)^|m|, which cancels the phase above for every m != 0, leaving
        m = 0:  Re Y_l^0
        m > 0:  sqrt(2) Re Y_l^m
        m < 0:  sqrt(2) Im Y_l^|m|
    """
    x, y, z = d
    theta = np.arccos(np.clip(z, -1.0, 1.0))  # polar
    phi = np.arctan2(y, x)                    # azimuth
    out = np.empty(16)
    for k, (l, m) in enumerate(LM_ORDER):
        if m == 0:
            out[k] = sph_harm_y(l, 0, theta, phi).real
        elif m > 0:
            out[k] = np.sqrt(2.0) * sph_harm_y(l, m, theta, phi).real
        else:
            out[k] = np.sqrt(2.0) * sph_harm_y(l, -m, theta, phi).imag
    return out


def test_basis_matches_scipy_harmonics():
    rng = np.random.default_rng(7)
    dirs = rng.normal(size=(64, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    got = sh_basis(dirs)
    assert got.shape == (64, 16)
    for d, row in zip(dirs, got):
        np.testing.assert_allclose(row, reference_basis(d), atol=1e-12)


def test_basis_constant_term():
    dirs = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.6, 0.0, 0.8]])
    b = sh_basis(dirs)
    np.testing.assert_allclose(b[:, 0], C0, rtol=0, atol=1e-16)


def test_num_coeffs():
    # (degree+1)^2 slots per color channel
    assert [num_coeffs(d) for d in range(4)] == [1, 4, 9, 16]


def test_dc_color_is_direction_invariant():
    # Only the constant term set: color = 0.5 + C0 * dc, same for any dir.
    coeffs = np.zeros((1, 3, 16))
    coeffs[0, :, 0] = [0.25, -0.5, 1.0]
    dirs = np.array([[0.0, 0.0, 1.0], [-1.0, 0.0, 0.0],
                     [0.48, -0.6, 0.64]])
    for d in dirs:
        got = sh_color(coeffs, d[None, :])[0]
        expect = np.clip(0.5 + C0 * np.array([0.25, -0.5, 1.0]), 0.0, None)
        np.testing.assert_allclose(got, expect, atol=1e-14)


def test_rgb_to_dc_round_trip():
    rgb = np.array([[0.1, 0.5, 0.9], [1.0, 0.0, 0.3]])
    dc = rgb_to_dc(rgb)
    # dc = (rgb - 0.5) / C0, so 0.5 + C0 * dc recovers rgb exactly
    np.testing.assert_allclose(0.5 + C0 * dc, rgb, atol=1e-15)


def test_degree_one_offset_flips_with_direction():
    # A pure degree-1 band is an odd function: negating the view direction
    # negates the color offset around the 0.5 midpoint.
    rng = np.random.default_rng(11)
    coeffs = np.zeros((1, 3, 16))
    coeffs[0, :, 1:4] = 0.2 * rng.normal(size=(3, 3))
    d = rng.normal(size=3)
    d /= np.linalg.norm(d)
    plus = sh_color(coeffs, d[None, :])[0]
    minus = sh_color(coeffs, -d[None, :])[0]
    np.testing.assert_allclose(plus - 0.5, -(minus - 0.5), atol=1e-14)


def test_color_clamps_negative_lobes_to_zero():
    coeffs = np.zeros((1, 3, 16))
    coeffs[0, :, 0] = -10.0  # drives 0.5 + C0*dc far below zero
    got = sh_color(coeffs, np.array([[0.0, 0.0, 1.0]]))[0]
    np.testing.assert_array_equal(got, np.zeros(3))


def test_color_has_no_upper_clamp():
    coeffs = np.zeros((1, 3, 16))
    coeffs[0, :, 0] = 10.0
    got = sh_color(coeffs, np.array([[0.0, 0.0, 1.0]]))[0]
    np.testing.assert_allclose(got, 0.5 + C0 * 10.0, atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_color_nonnegative_for_any_coeffs(seed):
    rng = np.random.default_rng(seed)
    coeffs = rng.normal(scale=3.0, size=(4, 3, 16))
    dirs = rng.normal(size=(4, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    assert np.all(sh_color(coeffs, dirs) >= 0.0)


def test_batch_matches_single_evaluation():
    rng = np.random.default_rng(3)
    coeffs = rng.normal(size=(5, 3, 16))
    dirs = rng.normal(size=(5, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    batch = sh_color(coeffs, dirs)
    for i in range(5):
        single = sh_color(coeffs[i:i + 1], dirs[i:i + 1])[0]
        np.testing.assert_array_equal(batch[i], single)
