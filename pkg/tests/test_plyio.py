"""PLY header parsing, layout validation, and error reporting."""

import numpy as np
import pytest

from gbake.errors import PlyFormatError, SceneDataError
from gbake.plyio import read_gaussian_ply, write_gaussian_ply


def minimal_args(n=2, degree=1):
    rng = np.random.default_rng(n)
    return dict(
        means=rng.normal(size=(n, 3)),
        rotations=rng.normal(size=(n, 4)) + [2, 0, 0, 0],
        scales_log=rng.normal(size=(n, 3)),
        opacities_logit=rng.normal(size=n),
        sh_coeffs=rng.normal(size=(n, 3, 16)),
        sh_degree=degree,
    )


def test_write_read_round_trip_is_float32_exact(tmp_path):
    args = minimal_args(n=7, degree=3)
    path = tmp_path / "a.ply"
    write_gaussian_ply(path, **args)
    raw = read_gaussian_ply(path)
    assert raw["sh_degree"] == 3
    for key, src in (("means", args["means"]),
                     ("rotations", args["rotations"]),
                     ("scales", args["scales_log"]),
                     ("opacities", args["opacities_logit"]),
                     ("sh_coeffs", args["sh_coeffs"])):
        np.testing.assert_array_equal(raw[key], src.astype(np.float32))


@pytest.mark.parametrize("degree,n_rest", [(0, 0), (1, 9), (2, 24), (3, 45)])
def test_degree_inferred_from_rest_count(tmp_path, degree, n_rest):
    path = tmp_path / f"d{degree}.ply"
    write_gaussian_ply(path, **minimal_args(n=3, degree=degree))
    header = path.read_bytes().split(b"end_header")[0]
    assert header.count(b"f_rest_") == n_rest
    assert read_gaussian_ply(path)["sh_degree"] == degree


def test_higher_degree_coeffs_zero_padded(tmp_path):
    args = minimal_args(n=2, degree=1)
    path = tmp_path / "pad.ply"
    write_gaussian_ply(path, **args)
    raw = read_gaussian_ply(path)
    # degree 1 keeps slots 0..3; 4..15 must come back as zeros
    np.testing.assert_array_equal(raw["sh_coeffs"][:, :, 4:], 0.0)
    np.testing.assert_array_equal(
        raw["sh_coeffs"][:, :, :4],
        args["sh_coeffs"][:, :, :4].astype(np.float32))


def test_empty_file_is_a_format_error(tmp_path):
    path = tmp_path / "empty.ply"
    path.write_bytes(b"")
    with pytest.raises(PlyFormatError, match="magic"):
        read_gaussian_ply(path)


def test_ascii_format_rejected(tmp_path):
    path = tmp_path / "ascii.ply"
    path.write_text(
        "ply\nformat ascii 1.0\nelement vertex 0\n"
        "property float x\nend_header\n")
    with pytest.raises(PlyFormatError, match="binary_little_endian"):
        read_gaussian_ply(path)


def test_missing_property_is_named_in_error(tmp_path):
    path = tmp_path / "miss.ply"
    write_gaussian_ply(path, **minimal_args())
    data = path.read_bytes()
    # drop the rot_3 property line; the shrunken record still parses,
    # so the required-property check is what must fire
    data = data.replace(b"property float rot_3\n", b"")
    path.write_bytes(data)
    with pytest.raises(PlyFormatError, match="rot_3"):
        read_gaussian_ply(path)


def test_truncated_payload_detected(tmp_path):
    path = tmp_path / "trunc.ply"
    write_gaussian_ply(path, **minimal_args(n=4))
    data = path.read_bytes()
    path.write_bytes(data[:-16])
    with pytest.raises(PlyFormatError, match="truncated"):
        read_gaussian_ply(path)


def test_unsupported_rest_count_rejected(tmp_path):
    path = tmp_path / "odd.ply"
    write_gaussian_ply(path, **minimal_args(n=1, degree=1))
    data = path.read_bytes()
    # renaming f_rest_8 leaves 8 rest properties, matching no degree
    data = data.replace(b"property float f_rest_8\n",
                        b"property float f_bogus_8\n")
    path.write_bytes(data)
    with pytest.raises(PlyFormatError, match="f_rest"):
        read_gaussian_ply(path)


def test_list_property_rejected(tmp_path):
    path = tmp_path / "list.ply"
    path.write_text(
        "ply\nformat binary_little_endian 1.0\nelement vertex 1\n"
        "property list uchar int vertex_indices\nend_header\n")
    with pytest.raises(PlyFormatError, match="list"):
        read_gaussian_ply(path)


def test_non_finite_value_reports_vertex_index(tmp_path):
    args = minimal_args(n=5)
    args["means"][3, 1] = np.nan
    path = tmp_path / "nan.ply"
    write_gaussian_ply(path, **args)
    with pytest.raises(SceneDataError, match="vertex 3"):
        read_gaussian_ply(path)


def test_non_finite_opacity_reports_field(tmp_path):
    args = minimal_args(n=4)
    args["opacities_logit"][2] = np.inf
    path = tmp_path / "inf.ply"
    write_gaussian_ply(path, **args)
    with pytest.raises(SceneDataError, match="opacity"):
        read_gaussian_ply(path)


def test_comments_and_extra_properties_are_tolerated(tmp_path):
    path = tmp_path / "extra.ply"
    write_gaussian_ply(path, **minimal_args(n=2, degree=0))
    data = path.read_bytes()
    data = data.replace(b"element vertex 2\n",
                        b"comment exported by a trainer\nelement vertex 2\n")
    path.write_bytes(data)
    raw = read_gaussian_ply(path)
    assert raw["means"].shape == (2, 3)
