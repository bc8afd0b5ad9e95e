import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import qmc

from meshctrl.errors import DimensionError
from meshctrl.pointcloud import (
    DomainBox,
    PointCloud,
    fill_distance,
    halton_cloud,
    halton_sequence,
    radical_inverse,
    read_points_csv,
    scale_to_box,
    tensor_grid,
    unscale_from_box,
    write_points_csv,
)


def test_halton_base2_by_hand():
    np.testing.assert_array_equal(halton_sequence(3, 1), [[0.5], [0.25], [0.75]])


def test_halton_first_point_2d():
    np.testing.assert_allclose(halton_sequence(1, 2), [[0.5, 1 / 3]], rtol=0, atol=1e-15)


def test_halton_empty():
    assert halton_sequence(0, 3).shape == (0, 3)


@pytest.mark.parametrize("dim", [1, 2, 5, 20])
def test_halton_matches_scipy_unscrambled(dim):
    ours = halton_sequence(50, dim, skip=7)
    ref = qmc.Halton(d=dim, scramble=False).random(58)[8:]
    np.testing.assert_allclose(ours, ref, rtol=0, atol=1e-15)


def test_halton_skip_is_a_shift():
    np.testing.assert_array_equal(halton_sequence(10, 3, skip=5), halton_sequence(15, 3)[5:])


def test_halton_dimension_limit():
    with pytest.raises(DimensionError):
        halton_sequence(5, 21)


def test_radical_inverse_base3():
    np.testing.assert_allclose(radical_inverse(np.array([1, 2, 3, 4]), 3), [1 / 3, 2 / 3, 1 / 9, 4 / 9])


@pytest.mark.parametrize(
    "unit,lower,upper,expected",
    [
        ([0.5], [0.0], [2.0], [1.0]),
        ([0.0, 0.0], [-1.0, -1.0], [1.0, 1.0], [-1.0, -1.0]),
        ([0.25, 0.5], [0.0, 2.0], [4.0, 4.0], [1.0, 3.0]),
    ],
)
def test_scale_to_box(unit, lower, upper, expected):
    cloud = scale_to_box(np.array([unit]), DomainBox(lower, upper))
    np.testing.assert_allclose(cloud.points[0], expected)


def test_scale_dimension_mismatch():
    with pytest.raises(DimensionError):
        scale_to_box(np.zeros((2, 3)), DomainBox.unit(2))


@given(st.lists(st.floats(0, 0.999), min_size=2, max_size=2))
def test_scale_roundtrip(u):
    box = DomainBox([-2.0, 1.0], [3.0, 1.5])
    cloud = scale_to_box(np.array([u]), box)
    np.testing.assert_allclose(unscale_from_box(cloud.points, box), [u], atol=1e-14)
    assert box.contains(cloud.points).all()


def test_tensor_grid_examples():
    np.testing.assert_allclose(tensor_grid(3, DomainBox.unit(1)).points.ravel(), [0, 0.5, 1])
    corners = tensor_grid(2, DomainBox.unit(2)).points
    assert {tuple(p) for p in corners} == {(0, 0), (0, 1), (1, 0), (1, 1)}
    g = tensor_grid(9, DomainBox.unit(3))
    assert g.size == 729 and g.grid_shape == (9, 9, 9)


def test_tensor_grid_ordering_last_fastest():
    g = tensor_grid(3, DomainBox.unit(2)).points
    np.testing.assert_allclose(g[:3], [[0, 0], [0, 0.5], [0, 1]])


@pytest.mark.parametrize(
    "pts,expected",
    [([[0.0], [1.0]], 0.5), ([[0.0], [0.5], [1.0]], 0.25)],
)
def test_fill_distance_1d(pts, expected):
    cloud = PointCloud(np.array(pts), DomainBox.unit(1))
    assert fill_distance(cloud, 10_001) == pytest.approx(expected, abs=1e-12)


def test_fill_distance_two_corners():
    cloud = PointCloud(np.array([[0.0, 0.0], [1.0, 1.0]]), DomainBox.unit(2))
    assert fill_distance(cloud, 101 * 101) == pytest.approx(1.0, abs=1e-12)


def test_fill_distance_shrinks_with_refinement():
    box = DomainBox.unit(2)
    hs = [halton_cloud(m, box).with_fill_distance().fill_distance for m in (64, 256, 1024)]
    assert hs[0] > hs[1] > hs[2]


def test_fill_distance_empty():
    with pytest.raises(ValueError):
        fill_distance(PointCloud(np.zeros((0, 2)), DomainBox.unit(2)))


def test_box_expanded_and_clamp():
    box = DomainBox([0.0, 1.0], [1.0, 3.0]).expanded(0.1)
    np.testing.assert_allclose(box.lower, [-0.1, 0.8])
    np.testing.assert_allclose(box.upper, [1.1, 3.2])
    np.testing.assert_allclose(box.clamp(np.array([[5.0, -5.0]])), [[1.1, 0.8]])


def test_box_rejects_inverted_bounds():
    with pytest.raises(ValueError):
        DomainBox([1.0], [0.0])


def test_csv_roundtrip_bitwise(tmp_path):
    pts = halton_cloud(17, DomainBox([-1.0, 0.0, 2.0], [1.0, 1e-3, 7.0])).points
    path = tmp_path / "pts.csv"
    write_points_csv(path, pts)
    assert path.read_text().splitlines()[0] == "x1,x2,x3"
    np.testing.assert_array_equal(read_points_csv(path), pts)
