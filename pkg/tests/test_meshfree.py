import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meshctrl.errors import BackendMismatchError, ConditioningError, DimensionError, RadiusTooSmallError
from meshctrl.meshfree import (
    InterpConfig,
    MlsInterpolator,
    MlsParams,
    RbfInterpolator,
    RbfKernel,
    ShepardInterpolator,
    franke_little_weight,
    interp_field,
    make_interpolator,
    mls_eval,
    monomial_exponents,
    multilinear_eval,
    polynomial_space_dim,
    rbf_eval,
    rbf_fit,
    shepard_eval,
    wendland_weight,
)
from meshctrl.pointcloud import DomainBox, PointCloud, halton_cloud, tensor_grid


def sincos(x):
    return np.sin(x[..., 0]) * np.cos(x[..., 1])


@pytest.fixture(scope="module")
def cloud2d():
    return halton_cloud(200, DomainBox.unit(2)).with_fill_distance()


@pytest.fixture(scope="module")
def probes():
    return np.random.default_rng(3).uniform(0.05, 0.95, size=(300, 2))


# ---------------------------------------------------------------- basics


def test_monomials_graded():
    e = monomial_exponents(2, 2)
    assert e.tolist() == [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]
    assert polynomial_space_dim(3, 2) == 10 == monomial_exponents(3, 2).shape[0]


def test_wendland_weight():
    np.testing.assert_allclose(wendland_weight(np.array([0.0, 0.5, 1.0, 2.0])), [1.0, 0.1875, 0.0, 0.0])


def test_franke_little_weight():
    w = franke_little_weight(np.array([0.5, 1.0, 1.5]))
    np.testing.assert_allclose(w, [1.0, 0.0, 0.0])


def test_kernel_defaults_and_values():
    k2, k3 = RbfKernel.default(2), RbfKernel.default(3)
    assert (k2.power, k2.log, k2.tail_degree) == (4, True, 2)
    assert (k3.power, k3.log, k3.tail_degree) == (3, False, 1)
    r = np.array([0.0, 0.5, 2.0])
    np.testing.assert_allclose(k2(r), [0.0, 0.5**4 * np.log(0.5), 16 * np.log(2.0)])
    np.testing.assert_allclose(k3(r), r**3)


def test_kernel_order_validation():
    with pytest.raises(ValueError):
        RbfKernel(power=4, log=True, order=1)


def test_unknown_backend():
    with pytest.raises(ValueError):
        InterpConfig(backend="kriging")


# ---------------------------------------------------------------- MLS


def test_mls_linear_reproduction(cloud2d, probes):
    f = 2 * cloud2d.points[:, 0] - cloud2d.points[:, 1] + 3
    for x in probes[:20]:
        val, coef = mls_eval(cloud2d, f, x)
        assert val == pytest.approx(2 * x[0] - x[1] + 3, abs=1e-10)


def test_mls_partition_of_unity(cloud2d, probes):
    for x in probes[:20]:
        val, coef = mls_eval(cloud2d, np.full(cloud2d.size, 4.2), x)
        assert val == pytest.approx(4.2, abs=1e-12)
        assert sum(coef.values()) == pytest.approx(1.0, abs=1e-12)


def test_mls_quadratic_reproduction_degree2(cloud2d, probes):
    f = lambda x: x[..., 0] ** 2 - 3 * x[..., 0] * x[..., 1] + 0.5
    field = interp_field(cloud2d, f(cloud2d.points), InterpConfig("mls", mls=MlsParams(degree=2, radius_factor=4.0)))
    np.testing.assert_allclose(field(probes), f(probes), atol=1e-9)


def test_mls_radius_too_small_carries_count():
    cloud = PointCloud(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]), DomainBox.unit(2))
    with pytest.raises(RadiusTooSmallError) as exc:
        mls_eval(cloud, np.zeros(4), np.array([0.1, 0.1]), MlsParams(radius=0.5))
    assert exc.value.neighbor_count == 1


def test_mls_doubling_rescues_sparse_neighbourhood():
    cloud = PointCloud(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]), DomainBox.unit(2))
    f = np.array([0.0, 1.0, 2.0, 3.0])
    interp = MlsInterpolator(cloud, MlsParams(radius=0.5))
    val = interp.fit(f)(np.array([0.1, 0.1]))
    assert val == pytest.approx(0.1 + 2 * 0.1, abs=1e-10)


def test_mls_far_query_takes_nearest_value(cloud2d):
    f = sincos(cloud2d.points)
    out = interp_field(cloud2d, f, InterpConfig("mls"))(np.array([[10.0, 10.0]]))
    nearest = np.argmin(np.sum((cloud2d.points - 10.0) ** 2, axis=1))
    assert out[0] == f[nearest]


def test_mls_fast_path_matches_sparse_weights(cloud2d):
    rng = np.random.default_rng(0)
    inside = np.vstack([rng.uniform(size=(2000, 2)), cloud2d.points[:10]])
    vals = np.column_stack([sincos(cloud2d.points), cloud2d.points[:, 0] ** 3])
    interp = MlsInterpolator(cloud2d)
    np.testing.assert_allclose(interp.evaluate(inside, vals), interp.weights(inside) @ vals, rtol=0, atol=1e-12)
    # outside the box the Gram matrices get ill-conditioned; agreement is to roundoff of that solve
    outside = np.vstack([rng.uniform(1.0, 1.3, size=(500, 2)), [[5.0, 5.0]]])
    np.testing.assert_allclose(interp.evaluate(outside, vals), interp.weights(outside) @ vals, rtol=1e-4, atol=1e-8)


def test_mls_fast_path_falls_back_when_not_unisolvent():
    cloud = PointCloud(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]), DomainBox.unit(2))
    interp = MlsInterpolator(cloud, MlsParams(radius=0.5))
    f = np.array([0.0, 1.0, 2.0, 3.0])
    x = np.array([[0.1, 0.1], [0.5, 0.5]])
    np.testing.assert_allclose(interp.evaluate(x, f), interp.weights(x) @ f, atol=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-1.0, 1.0), min_size=3, max_size=3))
def test_mls_reproduces_random_affine(coef):
    cloud = halton_cloud(80, DomainBox([-1.0, 2.0], [1.0, 5.0])).with_fill_distance()
    a, b, c = coef
    f = a + b * cloud.points[:, 0] + c * cloud.points[:, 1]
    x = halton_cloud(30, DomainBox([-0.9, 2.1], [0.9, 4.9]), skip=500).points
    got = interp_field(cloud, f, InterpConfig("mls"))(x)
    np.testing.assert_allclose(got, a + b * x[:, 0] + c * x[:, 1], atol=1e-10)


# ---------------------------------------------------------------- Shepard


def test_shepard_constant(cloud2d, probes):
    for x in probes[:10]:
        assert shepard_eval(cloud2d, np.full(cloud2d.size, -2.5), x, 0.3) == pytest.approx(-2.5, abs=1e-14)


def test_shepard_exact_hit(cloud2d):
    f = sincos(cloud2d.points)
    assert shepard_eval(cloud2d, f, cloud2d.points[17], 0.3) == f[17]


def test_shepard_symmetric_midpoint():
    cloud = PointCloud(np.array([[0.0], [1.0]]), DomainBox.unit(1))
    assert shepard_eval(cloud, np.array([0.0, 1.0]), np.array([0.5]), 2.0) == pytest.approx(0.5, abs=1e-15)


def test_shepard_weights_nonnegative_rows_sum_to_one(cloud2d, probes):
    w = ShepardInterpolator(cloud2d, radius=0.15).weights(np.vstack([probes, [[3.0, 3.0]]]))
    assert w.data.min() >= 0
    np.testing.assert_allclose(np.asarray(w.sum(axis=1)).ravel(), 1.0, atol=1e-14)


# ---------------------------------------------------------------- RBF


def test_rbf_polynomial_data_has_zero_kernel_part(cloud2d, probes):
    f = lambda x: 1.0 - 2.0 * x[..., 0] + x[..., 0] * x[..., 1] + 3.0 * x[..., 1] ** 2
    model = rbf_fit(cloud2d, f(cloud2d.points))
    assert np.abs(model.v).max() < 1e-8
    np.testing.assert_allclose(rbf_eval(model, probes), f(probes), atol=1e-8)


def test_rbf_minimal_unisolvent_set():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.5, 0.2], [0.3, 0.7]])
    cloud = PointCloud(pts, DomainBox.unit(2))
    f = lambda x: 2 + x[..., 0] - x[..., 1] ** 2 + 0.5 * x[..., 0] * x[..., 1]
    model = rbf_fit(cloud, f(pts))
    x = np.array([[0.25, 0.75], [0.9, 0.1]])
    np.testing.assert_allclose(rbf_eval(model, x), f(x), atol=1e-10)


def test_rbf_interpolates_at_centres(cloud2d):
    f = sincos(cloud2d.points) + np.exp(cloud2d.points[:, 0])
    model = rbf_fit(cloud2d, f)
    np.testing.assert_allclose(rbf_eval(model, cloud2d.points), f, atol=1e-8)
    assert model.residual < 1e-8


def test_rbf_constant_field(cloud2d, probes):
    model = rbf_fit(cloud2d, np.full(cloud2d.size, 5.0))
    np.testing.assert_allclose(rbf_eval(model, probes), 5.0, atol=1e-8)


def test_rbf_pure_tail():
    pts = halton_cloud(30, DomainBox.unit(2)).points
    model = rbf_fit(PointCloud(pts, DomainBox.unit(2)), pts[:, 0] ** 2)
    assert np.abs(model.v).max() < 1e-8
    x = np.random.default_rng(1).uniform(size=(50, 2))
    np.testing.assert_allclose(rbf_eval(model, x), x[:, 0] ** 2, atol=1e-9)


def test_rbf_odd_dimension_kernel():
    cloud = halton_cloud(120, DomainBox.unit(3))
    f = lambda x: x[..., 0] - 2 * x[..., 1] + x[..., 2]
    model = rbf_fit(cloud, f(cloud.points))
    x = np.random.default_rng(2).uniform(size=(40, 3))
    np.testing.assert_allclose(rbf_eval(model, x), f(x), atol=1e-9)


def test_rbf_fast_path_matches_reference(cloud2d):
    vals = np.column_stack([sincos(cloud2d.points), cloud2d.points[:, 1] ** 3])
    model = RbfInterpolator(cloud2d).fit(vals).model
    x = np.random.default_rng(4).uniform(-0.5, 1.5, size=(5000, 2))
    x[:5] = cloud2d.points[:5]
    np.testing.assert_allclose(model.evaluate(x), model.evaluate_reference(x), rtol=0, atol=1e-10)


def test_rbf_dense_weights_match_model(cloud2d, probes):
    interp = RbfInterpolator(cloud2d)
    f = sincos(cloud2d.points)
    np.testing.assert_allclose(interp.weights(probes) @ f, interp.fit(f)(probes), atol=1e-9)


def test_rbf_duplicate_centres_rejected():
    pts = np.vstack([halton_cloud(20, DomainBox.unit(2)).points] * 2)
    with pytest.raises(ConditioningError):
        RbfInterpolator(PointCloud(pts, DomainBox.unit(2)))


def test_rbf_too_few_centres_for_tail():
    with pytest.raises(ConditioningError):
        RbfInterpolator(PointCloud(np.array([[0.0, 0.0], [1.0, 1.0]]), DomainBox.unit(2)))


def test_rbf_invariant_under_box_choice():
    pts = halton_cloud(60, DomainBox.unit(2)).points
    f = sincos(pts)
    x = np.random.default_rng(5).uniform(size=(30, 2))
    a = rbf_eval(rbf_fit(PointCloud(pts, DomainBox.unit(2)), f), x)
    b = rbf_eval(rbf_fit(PointCloud(pts, DomainBox([-3.0, -1.0], [2.0, 4.0])), f), x)
    np.testing.assert_allclose(a, b, atol=1e-9)


# ---------------------------------------------------------------- multilinear


def test_multilinear_bilinear_exact():
    grid = tensor_grid(5, DomainBox([0.0, -1.0], [2.0, 1.0]))
    f = grid.points[:, 0] * grid.points[:, 1]
    x = np.random.default_rng(6).uniform([0, -1], [2, 1], size=(100, 2))
    np.testing.assert_allclose(multilinear_eval(grid, f, x), x[:, 0] * x[:, 1], atol=1e-13)


def test_multilinear_at_nodes():
    grid = tensor_grid(4, DomainBox.unit(3))
    f = np.random.default_rng(7).normal(size=grid.size)
    np.testing.assert_allclose(multilinear_eval(grid, f, grid.points), f, atol=1e-13)


def test_multilinear_1d_blend():
    grid = tensor_grid(2, DomainBox.unit(1))
    assert multilinear_eval(grid, np.array([0.0, 10.0]), np.array([0.3])) == pytest.approx(3.0)


def test_multilinear_needs_grid(cloud2d):
    with pytest.raises(BackendMismatchError):
        make_interpolator(cloud2d, InterpConfig("multilinear"))


# ---------------------------------------------------------------- facade


@pytest.mark.parametrize("backend", ["mls", "rbf", "shepard"])
def test_interp_field_vector_values_shape(cloud2d, backend):
    vals = np.column_stack([np.ones(cloud2d.size), cloud2d.points[:, 0]])
    field = interp_field(cloud2d, vals, InterpConfig(backend))
    out = field(np.zeros((3, 4, 2)) + 0.5)
    assert out.shape == (3, 4, 2)
    np.testing.assert_allclose(out[..., 0], 1.0, atol=1e-8)


def test_interp_field_linear_mls_and_nodes_rbf(cloud2d, probes):
    f = 1 + cloud2d.points @ np.array([0.3, -0.7])
    np.testing.assert_allclose(interp_field(cloud2d, f, InterpConfig("mls"))(probes), 1 + probes @ [0.3, -0.7], atol=1e-10)
    g = sincos(cloud2d.points)
    np.testing.assert_allclose(interp_field(cloud2d, g, InterpConfig("rbf"))(cloud2d.points), g, atol=1e-8)


def test_wrong_value_count(cloud2d):
    with pytest.raises(DimensionError):
        interp_field(cloud2d, np.zeros(3), InterpConfig("mls"))


def test_wrong_query_dimension(cloud2d):
    field = interp_field(cloud2d, np.zeros(cloud2d.size), InterpConfig("shepard"))
    with pytest.raises(DimensionError):
        field(np.zeros((2, 3)))


def test_convergence_probe_orders():
    box = DomainBox.unit(2)
    lattice = tensor_grid(50, box).points
    exact = sincos(lattice)
    for backend in ("mls", "rbf"):
        hs, errs = [], []
        for m in (64, 256, 1024):
            cloud = halton_cloud(m, box).with_fill_distance()
            approx = interp_field(cloud, sincos(cloud.points), InterpConfig(backend))(lattice)
            hs.append(cloud.fill_distance)
            errs.append(np.abs(approx - exact).max())
        orders = np.diff(np.log(errs)) / np.diff(np.log(hs))
        assert np.all(orders > 1.7), (backend, orders)
