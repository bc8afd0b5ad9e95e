"""Spatial point sets over box domains: Halton clouds, tensor lattices, fill distance."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .errors import DimensionError

# First 20 primes, one Halton base per coordinate.
PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


@dataclass(frozen=True)
class DomainBox:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise DimensionError("box bounds must be vectors of equal length")
        if not np.all(lower < upper):
            raise ValueError(f"box requires lower < upper, got {lower} and {upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def unit(cls, dim: int) -> DomainBox:
        return cls(np.zeros(dim), np.ones(dim))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.widths))

    def contains(self, x: np.ndarray, atol: float = 0.0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.all((x >= self.lower - atol) & (x <= self.upper + atol), axis=-1)

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def expanded(self, fraction: float) -> DomainBox:
        """Grow every side outward by ``fraction`` of that coordinate's width."""
        pad = fraction * self.widths
        return DomainBox(self.lower - pad, self.upper + pad)


@dataclass(frozen=True)
class PointCloud:
    """Scattered nodes ``points`` (M x dim) inside ``box``.

    ``grid_shape`` is set only for clouds built by :func:`tensor_grid`; the
    multilinear back-end relies on the lexicographic node ordering it implies.
    """

    points: np.ndarray
    box: DomainBox
    fill_distance: float | None = None
    grid_shape: tuple[int, ...] | None = None
    _tree: cKDTree | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.box.dim:
            raise DimensionError(f"points must be M x {self.box.dim}, got shape {pts.shape}")
        if pts.shape[0] < 1:
            raise ValueError("a point cloud needs at least one point")
        if not np.all(self.box.contains(pts, atol=1e-12 * self.box.diameter)):
            raise ValueError("every point must lie inside the box")
        if self.fill_distance is not None and not 0.0 <= self.fill_distance <= self.box.diameter:
            raise ValueError(f"fill distance {self.fill_distance} outside [0, diameter]")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def tree(self) -> cKDTree:
        if self._tree is None:
            object.__setattr__(self, "_tree", cKDTree(self.points))
        return self._tree

    def with_fill_distance(self, probe_count: int | None = None) -> PointCloud:
        return replace(self, fill_distance=fill_distance(self, probe_count), _tree=self._tree)

    def to_csv(self, path: str | Path) -> None:
        write_points_csv(path, self.points)


def radical_inverse(indices: np.ndarray, base: int) -> np.ndarray:
    """Van der Corput radical inverse of nonnegative integers in ``base``."""
    n = np.array(indices, dtype=np.int64)
    out = np.zeros(n.shape, dtype=float)
    scale = 1.0 / base
    while np.any(n > 0):
        n, digit = np.divmod(n, base)
        out += digit * scale
        scale /= base
    return out


def halton_sequence(count: int, dim: int, skip: int = 0) -> np.ndarray:
    """Unscrambled Halton points; row ``m`` is index ``skip + m + 1``.

    Starting at index 1 avoids the all-zeros point.
    """
    if dim < 1:
        raise DimensionError("dim must be positive")
    if dim > len(PRIMES):
        raise DimensionError(f"Halton sequence supports dim <= {len(PRIMES)}, got {dim}")
    if count < 0 or skip < 0:
        raise ValueError("count and skip must be nonnegative")
    idx = np.arange(skip + 1, skip + count + 1, dtype=np.int64)
    return np.column_stack([radical_inverse(idx, PRIMES[j]) for j in range(dim)]).reshape(count, dim)


def scale_to_box(unit_points: np.ndarray, box: DomainBox) -> PointCloud:
    u = np.asarray(unit_points, dtype=float)
    if u.ndim == 1:
        u = u.reshape(1, -1)
    if u.shape[1] != box.dim:
        raise DimensionError(f"points have dim {u.shape[1]}, box has dim {box.dim}")
    return PointCloud(box.lower + u * box.widths, box)


def unscale_from_box(points: np.ndarray, box: DomainBox) -> np.ndarray:
    return (np.asarray(points, dtype=float) - box.lower) / box.widths


def halton_cloud(count: int, box: DomainBox, skip: int = 0) -> PointCloud:
    return scale_to_box(halton_sequence(count, box.dim, skip), box)


def tensor_grid(points_per_dim: int, box: DomainBox) -> PointCloud:
    """Uniform lattice including the box corners, last coordinate fastest."""
    if points_per_dim < 2:
        raise ValueError("tensor grid needs at least 2 points per dimension")
    axes = [np.linspace(lo, hi, points_per_dim) for lo, hi in zip(box.lower, box.upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    return PointCloud(pts, box, grid_shape=(points_per_dim,) * box.dim)


def _probe_points(box: DomainBox, probe_count: int) -> np.ndarray:
    if box.dim <= 3:
        per_dim = max(2, int(round(probe_count ** (1.0 / box.dim))))
        axes = [np.linspace(lo, hi, per_dim) for lo, hi in zip(box.lower, box.upper)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)
    return scale_to_box(halton_sequence(probe_count, box.dim), box).points


def fill_distance(cloud: PointCloud, probe_count: int | None = None) -> float:
    """Largest distance from a probe in the box to its nearest cloud point.

    Probes form a uniform lattice for dim <= 3 and a Halton set otherwise, so
    the result is a lower bound on the true fill distance.
    """
    if cloud.size == 0:
        raise ValueError("fill distance of an empty cloud")
    if probe_count is None:
        probe_count = 10_000 * cloud.dim
    probes = _probe_points(cloud.box, probe_count)
    dist, _ = cloud.tree.query(probes)
    return float(dist.max())


def write_points_csv(path: str | Path, points: np.ndarray) -> None:
    points = np.asarray(points, dtype=float)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{i + 1}" for i in range(points.shape[1])])
        for row in points:
            writer.writerow([format(v, ".17g") for v in row])


def read_points_csv(path: str | Path) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader if row]
    return np.array(rows, dtype=float).reshape(-1, len(header))
