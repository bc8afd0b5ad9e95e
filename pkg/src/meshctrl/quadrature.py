"""Gauss-Hermite rules for the standard normal density and their tensor products."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import TooManyNodesError

MAX_ORDER = 64
MAX_TENSOR_NODES = 10**7


@dataclass(frozen=True)
class GaussHermiteRule:
    """``order``-point rule with ``sum(w * f(nodes)) ~= E[f(Z)]``, ``Z ~ N(0, 1)``."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return self.nodes.size

    def expect(self, f) -> np.ndarray:
        """One-dimensional expectation of a vectorised ``f``."""
        vals = np.asarray(f(self.nodes), dtype=float)
        return np.tensordot(self.weights, vals, axes=(0, 0))


@lru_cache(maxsize=None)
def gauss_hermite(order: int) -> GaussHermiteRule:
    """Golub-Welsch rule for probabilists' Hermite polynomials.

    The Jacobi matrix has zero diagonal and off-diagonals ``sqrt(k)``; nodes are
    its eigenvalues and weights the squared first eigenvector components
    (times the zeroth moment, which is 1 for a probability density).
    """
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"Gauss-Hermite order must be in [1, {MAX_ORDER}], got {order}")
    if order == 1:
        nodes, weights = np.zeros(1), np.ones(1)
    else:
        off = np.sqrt(np.arange(1, order, dtype=float))
        nodes, vecs = eigh_tridiagonal(np.zeros(order), off, lapack_driver="stev")
        weights = vecs[0, :] ** 2
        # symmetrise: pair node i with node order-1-i
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = 0.5 * (weights + weights[::-1])
        if order % 2:
            nodes[order // 2] = 0.0
        weights = weights / weights.sum()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return GaussHermiteRule(nodes, weights)


def tensor_nodes(rule: GaussHermiteRule, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """All ``L**dim`` nodes (lexicographic multi-index, last index fastest) and product weights."""
    if dim < 1:
        raise ValueError("dim must be positive")
    count = rule.order**dim
    if count > MAX_TENSOR_NODES:
        raise TooManyNodesError(f"{rule.order}**{dim} = {count} tensor nodes exceeds {MAX_TENSOR_NODES}")
    grids = np.meshgrid(*([rule.nodes] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*([rule.weights] * dim), indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    return nodes, weights


def tensor_expectation(rule: GaussHermiteRule, dim: int, integrand) -> np.ndarray:
    """``E[f(Z)]`` for ``Z ~ N(0, I_dim)`` by the tensor-product rule.

    ``integrand`` receives an ``(L**dim, dim)`` array and returns ``(L**dim,)``
    or ``(L**dim, k)``. The weighted sum runs in lexicographic multi-index order.
    """
    nodes, weights = tensor_nodes(rule, dim)
    vals = np.asarray(integrand(nodes), dtype=float)
    if vals.shape[0] != nodes.shape[0]:
        raise ValueError("integrand must return one row per node")
    return np.tensordot(weights, vals, axes=(0, 0))


def normal_moment(p: int) -> float:
    """``E[Z**p]`` for a standard normal: 0 for odd p, (p-1)!! for even p."""
    if p % 2:
        return 0.0
    return float(np.prod(np.arange(p - 1, 0, -2, dtype=float))) if p else 1.0


def multi_indices(order: int, dim: int):
    """Lexicographic iteration over quadrature multi-indices (for reference use)."""
    return itertools.product(range(order), repeat=dim)
