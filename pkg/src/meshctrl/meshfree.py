"""Scattered-data interpolation back-ends.

Every back-end turns nodal values on a :class:`~meshctrl.pointcloud.PointCloud`
into a field that can be evaluated anywhere in R^d:

``mls``
    moving least squares with a compactly supported Wendland weight and local
    polynomial reproduction of degree ``l``;
``shepard``
    normalised nonnegative weights (Franke-Little), a partition of unity;
``rbf``
    polyharmonic radial basis interpolation with a polynomial tail, solved as
    a symmetric saddle-point system;
``multilinear``
    coordinatewise linear blending on a tensor grid.

Back-ends are split in two stages.  An *interpolator* holds everything that
depends only on the cloud (KD-tree, saddle factorisation) and is built once;
``fit(values)`` then produces an :class:`Interpolant` for any number of value
columns.  MLS, Shepard and multilinear also expose their Lagrange matrix
``weights(x)`` (sparse, ``Q x M``) so many fields on the same cloud can share
one neighbour search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement

import numpy as np
import scipy.sparse as sp
from scipy.linalg import lapack
from scipy.spatial import cKDTree

from ._accel import build_cells, mls_values
from .errors import BackendMismatchError, ConditioningError, DimensionError, RadiusTooSmallError
from .pointcloud import PointCloud, fill_distance

BACKENDS = ("mls", "shepard", "rbf", "multilinear")

# Rows of an RBF evaluation chunk; bounds the kernel block to ~50 MB at M ~ 1500.
_EVAL_CHUNK = 4096
# Kernel-block entries per chunk in the fast RBF evaluation (~256 kB).
_CACHE_BLOCK = 131072


def monomial_exponents(dim: int, degree: int) -> np.ndarray:
    """Exponent vectors of all monomials of total degree <= ``degree``, graded order."""
    rows = []
    for deg in range(degree + 1):
        for combo in combinations_with_replacement(range(dim), deg):
            e = np.zeros(dim, dtype=int)
            for j in combo:
                e[j] += 1
            rows.append(e)
    return np.array(rows, dtype=int).reshape(-1, dim)


def polynomial_space_dim(dim: int, degree: int) -> int:
    if degree < 0:
        return 0
    return math.comb(dim + degree, dim)


def eval_monomials(x: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    """``(Q, n_basis)`` matrix of monomials evaluated at the rows of ``x``."""
    x = np.asarray(x, dtype=float)
    out = np.ones((x.shape[0], exponents.shape[0]))
    for j in range(x.shape[1]):
        powers = exponents[:, j]
        if np.any(powers):
            out *= x[:, j : j + 1] ** powers
    return out


def wendland_weight(t: np.ndarray) -> np.ndarray:
    """C^2 Wendland bump ``(1 - t)^4 (4t + 1)`` on ``[0, 1)``, zero beyond."""
    t = np.asarray(t, dtype=float)
    s = np.clip(1.0 - t, 0.0, None)
    return s**4 * (4.0 * t + 1.0)


def franke_little_weight(t: np.ndarray) -> np.ndarray:
    """Shepard weight ``((1 - t)_+ / t)^2``; singular at 0, zero from 1 on."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        return (np.clip(1.0 - t, 0.0, None) / t) ** 2


def _as_queries(x: np.ndarray, dim: int) -> tuple[np.ndarray, tuple[int, ...]]:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != dim:
        raise DimensionError(f"query points must have last axis {dim}, got shape {x.shape}")
    lead = x.shape[:-1]
    return x.reshape(-1, dim), lead


def _pairs_within(cloud: PointCloud, x: np.ndarray, radius: float):
    """(query index, node index, distance) for all pairs closer than ``radius``."""
    qtree = cKDTree(x)
    pairs = qtree.sparse_distance_matrix(cloud.tree, radius, output_type="ndarray")
    qi = pairs["i"].astype(np.int64)
    ci = pairs["j"].astype(np.int64)
    dist = pairs["v"]
    keep = dist < radius
    return qi[keep], ci[keep], dist[keep]


def _nearest_rows(cloud: PointCloud, x: np.ndarray, rows: np.ndarray):
    _, idx = cloud.tree.query(x[rows])
    return rows, np.asarray(idx, dtype=np.int64), np.ones(rows.size)


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class MlsParams:
    """Polynomial degree and support radius of the moving least squares fit.

    ``radius=None`` means ``radius_factor * h`` with ``h`` the cloud's fill
    distance.  A query whose neighbourhood is not unisolvent gets its radius
    doubled up to ``max_doublings`` times.
    """

    degree: int = 1
    radius: float | None = None
    radius_factor: float = 3.0
    max_doublings: int = 3

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("MLS degree must be nonnegative")
        if self.radius is not None and self.radius <= 0:
            raise ValueError("MLS radius must be positive")


@dataclass(frozen=True)
class RbfKernel:
    """Polyharmonic kernel ``r**power`` (times ``log r`` when ``log``).

    ``order`` is the conditional positive definiteness order; the polynomial
    tail has degree ``order - 1``.
    """

    power: int
    log: bool
    order: int

    def __post_init__(self):
        minimal = self.power // 2 + 1 if self.log else math.ceil(self.power / 2)
        if self.order < minimal:
            raise ValueError(f"kernel r^{self.power}{' log r' if self.log else ''} needs order >= {minimal}")
        if self.log and self.power % 2:
            raise ValueError("log-type polyharmonic kernels need an even power")

    @classmethod
    def default(cls, dim: int) -> RbfKernel:
        """``r^4 log r`` with quadratic tail in even dimensions, ``r^3`` with linear tail in odd."""
        if dim % 2 == 0:
            return cls(power=4, log=True, order=3)
        return cls(power=3, log=False, order=2)

    @property
    def tail_degree(self) -> int:
        return self.order - 1

    def from_squared(self, r2: np.ndarray) -> np.ndarray:
        """Kernel values from squared distances; the ``r -> 0`` limit is 0."""
        r2 = np.asarray(r2, dtype=float)
        if self.log:
            out = np.zeros_like(r2)
            pos = r2 > 0
            out[pos] = 0.5 * r2[pos] ** (self.power // 2) * np.log(r2[pos])
            return out
        if self.power % 2 == 0:
            return r2 ** (self.power // 2)
        return r2 ** (0.5 * self.power)

    def __call__(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return self.from_squared(r * r)


@dataclass(frozen=True)
class InterpConfig:
    """Back-end selection plus its parameters.

    ``ridge=None`` asks for the default ``1e-10 * trace(A) / M``.
    """

    backend: str = "rbf"
    mls: MlsParams = field(default_factory=MlsParams)
    shepard_radius_factor: float = 3.0
    kernel: RbfKernel | None = None
    ridge: float | None = None

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown back-end {self.backend!r}; choose from {BACKENDS}")
        if self.ridge is not None and self.ridge < 0:
            raise ValueError("ridge must be nonnegative")


# --------------------------------------------------------------------------
# fields


class Interpolant:
    """A fitted field; ``values`` is ``(M,)`` or ``(M, k)`` for k components."""

    def __init__(self, interpolator: Interpolator, values: np.ndarray, model: RbfModel | None = None):
        self.interpolator = interpolator
        self.values = np.asarray(values, dtype=float)
        self.model = model

    @property
    def backend(self) -> str:
        return self.interpolator.backend

    @property
    def cloud(self) -> PointCloud:
        return self.interpolator.cloud

    def __call__(self, x: np.ndarray) -> np.ndarray:
        q, lead = _as_queries(x, self.cloud.dim)
        if self.model is not None:
            out = self.model.evaluate(q)
        else:
            out = self.interpolator.evaluate(q, self.values)
        return out.reshape(lead + self.values.shape[1:])


class Interpolator:
    backend = ""

    def __init__(self, cloud: PointCloud):
        self.cloud = cloud

    def weights(self, x: np.ndarray) -> sp.csr_matrix:
        """Lagrange matrix: row ``q`` holds the coefficients ``a_i(x_q)``."""
        raise NotImplementedError

    def evaluate(self, x: np.ndarray, values: np.ndarray) -> np.ndarray:
        return self.weights(x) @ values

    def fit(self, values: np.ndarray) -> Interpolant:
        values = np.asarray(values, dtype=float)
        if values.shape[0] != self.cloud.size:
            raise DimensionError(f"expected {self.cloud.size} nodal values, got {values.shape[0]}")
        return Interpolant(self, values)


class MlsInterpolator(Interpolator):
    backend = "mls"

    def __init__(self, cloud: PointCloud, params: MlsParams | None = None):
        super().__init__(cloud)
        self.params = params or MlsParams()
        if self.params.radius is not None:
            self.radius = float(self.params.radius)
        else:
            h = cloud.fill_distance if cloud.fill_distance is not None else fill_distance(cloud)
            self.radius = self.params.radius_factor * h
        self.exponents = monomial_exponents(cloud.dim, self.params.degree)
        self._cells = None

    def evaluate(self, x: np.ndarray, values: np.ndarray) -> np.ndarray:
        """Compiled per-query solve; flagged queries go through :meth:`weights`."""
        x, _ = _as_queries(x, self.cloud.dim)
        cols = np.asarray(values, dtype=float).reshape(self.cloud.size, -1)
        if self._cells is None:
            self._cells = build_cells(self.cloud.points, self.radius)
        lo, ncell, strides, order, starts = self._cells
        out, status = mls_values(
            np.ascontiguousarray(x), self.cloud.points, np.ascontiguousarray(cols), self.radius,
            self.exponents.astype(np.int64), lo, self.radius, ncell, strides, order, starts,
        )
        bad = np.flatnonzero(status)
        if bad.size:
            out[bad] = self.weights(x[bad]) @ cols
        return out.reshape((x.shape[0],) + np.shape(values)[1:])

    def _solve(self, x: np.ndarray, rows: np.ndarray, radius: float):
        """Coefficients for the query subset ``rows``; also returns failed rows and counts."""
        nb = self.exponents.shape[0]
        qi, ci, dist = _pairs_within(self.cloud, x[rows], radius)
        counts = np.bincount(qi, minlength=rows.size)
        w = wendland_weight(dist / radius)
        basis = eval_monomials((self.cloud.points[ci] - x[rows][qi]) / radius, self.exponents)
        gram = np.empty((rows.size, nb, nb))
        for a in range(nb):
            for b in range(a, nb):
                s = np.bincount(qi, weights=w * basis[:, a] * basis[:, b], minlength=rows.size)
                gram[:, a, b] = s
                gram[:, b, a] = s
        ok = counts >= nb
        if np.any(ok):
            sv = np.linalg.svd(gram[ok], compute_uv=False)
            good = sv[:, -1] > 1e-12 * sv[:, 0]
            ok[np.flatnonzero(ok)[~good]] = False
        gram[~ok] = np.eye(nb)
        e1 = np.zeros((rows.size, nb, 1))
        e1[:, 0, 0] = 1.0
        c = np.linalg.solve(gram, e1)[..., 0]
        coef = w * np.einsum("ij,ij->i", basis, c[qi])
        keep = ok[qi]
        return (rows[qi[keep]], ci[keep], coef[keep]), rows[~ok], counts[~ok]

    def weights(self, x: np.ndarray) -> sp.csr_matrix:
        x, _ = _as_queries(x, self.cloud.dim)
        q = x.shape[0]
        parts = []
        rows = np.arange(q)
        radius = self.radius
        # beyond the support the field is the nearest nodal value
        d_near, _ = self.cloud.tree.query(x)
        far = d_near >= radius
        if np.any(far):
            parts.append(_nearest_rows(self.cloud, x, np.flatnonzero(far)))
            rows = np.flatnonzero(~far)
        for attempt in range(self.params.max_doublings + 1):
            if rows.size == 0:
                break
            done, rows, counts = self._solve(x, rows, radius)
            parts.append(done)
            radius *= 2.0
        if rows.size:
            worst = int(counts.min())
            raise RadiusTooSmallError(
                f"MLS neighbourhood of {rows.size} queries not unisolvent for degree "
                f"{self.params.degree} (as few as {worst} neighbours after doubling the radius "
                f"{self.params.max_doublings} times)",
                neighbor_count=worst,
            )
        r = np.concatenate([p[0] for p in parts])
        c = np.concatenate([p[1] for p in parts])
        v = np.concatenate([p[2] for p in parts])
        return sp.csr_matrix((v, (r, c)), shape=(q, self.cloud.size))


class ShepardInterpolator(Interpolator):
    backend = "shepard"

    def __init__(self, cloud: PointCloud, radius: float | None = None, radius_factor: float = 3.0):
        super().__init__(cloud)
        if radius is None:
            h = cloud.fill_distance if cloud.fill_distance is not None else fill_distance(cloud)
            radius = radius_factor * h
        if radius <= 0:
            raise ValueError("Shepard radius must be positive")
        self.radius = float(radius)

    def weights(self, x: np.ndarray) -> sp.csr_matrix:
        x, _ = _as_queries(x, self.cloud.dim)
        q = x.shape[0]
        qi, ci, dist = _pairs_within(self.cloud, x, self.radius)
        t = dist / self.radius
        hit = t <= 1e-14
        w = franke_little_weight(np.where(hit, 1.0, t))
        # an exact hit owns the query outright
        hit_rows = np.zeros(q, dtype=bool)
        hit_rows[qi[hit]] = True
        w = np.where(hit_rows[qi], hit.astype(float), w)
        total = np.bincount(qi, weights=w, minlength=q)
        have = total > 0
        keep = have[qi]
        vals = w[keep] / total[qi[keep]]
        r, c = qi[keep], ci[keep]
        if not np.all(have):
            nr, nc, nv = _nearest_rows(self.cloud, x, np.flatnonzero(~have))
            r, c, vals = np.concatenate([r, nr]), np.concatenate([c, nc]), np.concatenate([vals, nv])
        return sp.csr_matrix((vals, (r, c)), shape=(q, self.cloud.size))


class MultilinearInterpolator(Interpolator):
    backend = "multilinear"

    def __init__(self, cloud: PointCloud):
        if cloud.grid_shape is None:
            raise BackendMismatchError("multilinear back-end needs a cloud built by tensor_grid")
        super().__init__(cloud)
        self.shape = np.array(cloud.grid_shape)
        self.strides = np.array([int(np.prod(self.shape[j + 1 :])) for j in range(cloud.dim)], dtype=np.int64)
        self.spacing = cloud.box.widths / (self.shape - 1)
        corners = np.array(np.meshgrid(*([[0, 1]] * cloud.dim), indexing="ij")).reshape(cloud.dim, -1).T
        self.corners = corners

    def weights(self, x: np.ndarray) -> sp.csr_matrix:
        x, _ = _as_queries(x, self.cloud.dim)
        q = x.shape[0]
        box = self.cloud.box
        s = (box.clamp(x) - box.lower) / self.spacing
        cell = np.clip(np.floor(s).astype(np.int64), 0, self.shape - 2)
        frac = s - cell
        base = cell @ self.strides
        ncorner = self.corners.shape[0]
        vals = np.ones((q, ncorner))
        idx = np.repeat(base[:, None], ncorner, axis=1)
        for k, corner in enumerate(self.corners):
            vals[:, k] = np.prod(np.where(corner == 1, frac, 1.0 - frac), axis=1)
            idx[:, k] += corner @ self.strides
        rows = np.repeat(np.arange(q), ncorner)
        return sp.csr_matrix((vals.ravel(), (rows, idx.ravel())), shape=(q, self.cloud.size))


@dataclass
class RbfModel:
    """Fitted RBF field(s): ``s(x) = sum_j v_j phi(|x - x_j|) + sum_k z_k p_k(x)``.

    Coordinates are centred and scaled by the cloud box before both fitting
    and evaluation; polyharmonic interpolants are invariant under this map.
    """

    centers: PointCloud
    kernel: RbfKernel
    v: np.ndarray
    z: np.ndarray
    center: np.ndarray
    scale: float
    exponents: np.ndarray
    condition: float
    residual: float

    def _normalise(self, x: np.ndarray) -> np.ndarray:
        return (x - self.center) / self.scale

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x, _ = _as_queries(x, self.centers.dim)
        xs = self._normalise(x)
        cs = self._normalise(self.centers.points)
        c2 = np.einsum("ij,ij->i", cs, cs)
        cs_t = -2.0 * cs.T
        v = self.v.reshape(self.v.shape[0], -1)
        out = np.empty((x.shape[0], v.shape[1]))
        # blocks sized to keep the kernel matrix cache-resident
        chunk = max(16, _CACHE_BLOCK // cs.shape[0])
        half, odd, use_log = self.kernel.power // 2, self.kernel.power % 2 == 1, self.kernel.log
        for start in range(0, x.shape[0], chunk):
            blk = xs[start : start + chunk]
            r2 = blk @ cs_t
            r2 += c2
            r2 += np.einsum("ij,ij->i", blk, blk)[:, None]
            np.maximum(r2, 0.0, out=r2)
            if use_log:
                lg = np.log(np.maximum(r2, np.finfo(float).tiny))
                phi = r2 * r2 if half == 2 else r2**half
                phi *= lg
                phi *= 0.5
            elif odd:
                phi = np.sqrt(r2)
                for _ in range(half):
                    phi *= r2
            else:
                phi = r2**half
            out[start : start + chunk] = phi @ v
        out = out.reshape((x.shape[0],) + self.v.shape[1:])
        return out + eval_monomials(xs, self.exponents) @ self.z

    def evaluate_reference(self, x: np.ndarray) -> np.ndarray:
        """Evaluation through explicit coordinate differences, an independent check of :meth:`evaluate`."""
        x, _ = _as_queries(x, self.centers.dim)
        xs = self._normalise(x)
        cs = self._normalise(self.centers.points)
        out = np.empty((x.shape[0],) + self.v.shape[1:])
        for start in range(0, x.shape[0], _EVAL_CHUNK):
            blk = xs[start : start + _EVAL_CHUNK]
            r2 = ((blk[:, None, :] - cs[None, :, :]) ** 2).sum(axis=2)
            out[start : start + _EVAL_CHUNK] = self.kernel.from_squared(r2) @ self.v
        out += eval_monomials(xs, self.exponents) @ self.z
        return out


class RbfInterpolator(Interpolator):
    """Factorises the saddle matrix ``[[A + ridge I, P], [P^T, 0]]`` once per cloud."""

    backend = "rbf"
    max_condition = 1e14

    def __init__(self, cloud: PointCloud, kernel: RbfKernel | None = None, ridge: float | None = None):
        super().__init__(cloud)
        self.kernel = kernel or RbfKernel.default(cloud.dim)
        self.exponents = monomial_exponents(cloud.dim, self.kernel.tail_degree)
        m, nt = cloud.size, self.exponents.shape[0]
        if m < nt:
            raise ConditioningError(f"{m} centres cannot determine a degree-{self.kernel.tail_degree} tail ({nt} terms)")
        self.center = 0.5 * (cloud.box.lower + cloud.box.upper)
        self.scale = 0.5 * float(cloud.box.widths.max())
        xs = (cloud.points - self.center) / self.scale
        d2 = np.sum((xs[:, None, :] - xs[None, :, :]) ** 2, axis=-1)
        a = self.kernel.from_squared(d2)
        if ridge is None:
            ridge = 1e-10 * np.trace(a) / m
        self.ridge = float(ridge)
        p = eval_monomials(xs, self.exponents)
        s = np.zeros((m + nt, m + nt))
        s[:m, :m] = a + self.ridge * np.eye(m)
        s[:m, m:] = p
        s[m:, :m] = p.T
        self.system = s
        lu, piv, info = lapack.dsytrf(s, lower=1)
        if info > 0:
            raise ConditioningError("RBF saddle matrix is singular; add a ridge or remove clustered points")
        anorm = np.abs(s).sum(axis=0).max()
        rcond, _ = lapack.dsycon(lu, piv, anorm, lower=1)
        self.condition = math.inf if rcond == 0 else 1.0 / rcond
        if self.condition > self.max_condition:
            raise ConditioningError(
                f"RBF saddle matrix condition estimate {self.condition:.3g} exceeds {self.max_condition:.0e}; "
                "use a larger ridge or fewer points"
            )
        self._lu, self._piv = lu, piv

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        x, info = lapack.dsytrs(self._lu, self._piv, rhs, lower=1)
        if info:
            raise ConditioningError(f"saddle solve failed (info={info})")
        return x

    def fit(self, values: np.ndarray) -> Interpolant:
        values = np.asarray(values, dtype=float)
        m = self.cloud.size
        if values.shape[0] != m:
            raise DimensionError(f"expected {m} nodal values, got {values.shape[0]}")
        f = values.reshape(m, -1)
        rhs = np.zeros((self.system.shape[0], f.shape[1]))
        rhs[:m] = f
        sol = self.solve(rhs)
        res = np.abs(self.system[:m] @ sol - f).max() if f.size else 0.0
        v, z = sol[:m], sol[m:]
        if values.ndim == 1:
            v, z = v[:, 0], z[:, 0]
        model = RbfModel(
            centers=self.cloud,
            kernel=self.kernel,
            v=v,
            z=z,
            center=self.center,
            scale=self.scale,
            exponents=self.exponents,
            condition=self.condition,
            residual=float(res),
        )
        return Interpolant(self, values, model=model)

    def weights(self, x: np.ndarray) -> np.ndarray:
        """Dense Lagrange matrix ``[K(x), P(x)] S^{-1}[:, :M]`` (diagnostic use)."""
        x, _ = _as_queries(x, self.cloud.dim)
        xs = (x - self.center) / self.scale
        cs = (self.cloud.points - self.center) / self.scale
        r2 = np.sum((xs[:, None, :] - cs[None, :, :]) ** 2, axis=-1)
        rows = np.hstack([self.kernel.from_squared(r2), eval_monomials(xs, self.exponents)])
        return self.solve(rows.T)[: self.cloud.size].T


def make_interpolator(cloud: PointCloud, config: InterpConfig | None = None) -> Interpolator:
    config = config or InterpConfig()
    if config.backend == "mls":
        return MlsInterpolator(cloud, config.mls)
    if config.backend == "shepard":
        return ShepardInterpolator(cloud, radius_factor=config.shepard_radius_factor)
    if config.backend == "rbf":
        return RbfInterpolator(cloud, config.kernel, config.ridge)
    return MultilinearInterpolator(cloud)


def interp_field(cloud: PointCloud, values: np.ndarray, config: InterpConfig | None = None) -> Interpolant:
    return make_interpolator(cloud, config).fit(values)


# --------------------------------------------------------------------------
# single-point conveniences


def mls_eval(cloud: PointCloud, values: np.ndarray, x: np.ndarray, params: MlsParams | None = None):
    """MLS value at one point and its nonzero Lagrange coefficients ``{i: a_i(x)}``.

    Unlike the batched interpolator this never enlarges the radius: a
    non-unisolvent neighbourhood raises :class:`RadiusTooSmallError`.
    """
    params = params or MlsParams()
    interp = MlsInterpolator(cloud, MlsParams(params.degree, params.radius, params.radius_factor, max_doublings=0))
    x = np.asarray(x, dtype=float).reshape(1, -1)
    row = interp.weights(x).tocsr()
    coeffs = {int(i): float(a) for i, a in zip(row.indices, row.data)}
    return float((row @ np.asarray(values, dtype=float))[0]), coeffs


def shepard_eval(cloud: PointCloud, values: np.ndarray, x: np.ndarray, radius: float) -> float:
    row = ShepardInterpolator(cloud, radius=radius).weights(np.asarray(x, dtype=float).reshape(1, -1))
    return float((row @ np.asarray(values, dtype=float))[0])


def rbf_fit(cloud: PointCloud, values: np.ndarray, kernel: RbfKernel | None = None, ridge: float | None = None) -> RbfModel:
    return RbfInterpolator(cloud, kernel, ridge).fit(values).model


def rbf_eval(model: RbfModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = model.evaluate(x.reshape(-1, model.centers.dim))
    return out.reshape(x.shape[:-1] + model.v.shape[1:])


def multilinear_eval(grid_cloud: PointCloud, values: np.ndarray, x: np.ndarray) -> np.ndarray:
    return MultilinearInterpolator(grid_cloud).fit(values)(x)
