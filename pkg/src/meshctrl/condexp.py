"""One-step conditional expectations over Euler-Maruyama proposals.

For a node ``x`` and a field ``phi`` known through an interpolant, the
operators here compute

    E[phi(x + b dt + sigma sqrt(dt) xi)]               (cond_exp)
    E[phi(x + b dt + sigma sqrt(dt) xi) sqrt(dt) xi^T] (cond_exp_dw)

with ``xi ~ N(0, I_m)`` replaced by an ``L**m`` tensor Gauss-Hermite rule.
All functions accept a batch of nodes ``x`` with shape ``(M, d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionError, NumericOverflowError
from .pointcloud import DomainBox
from .quadrature import GaussHermiteRule, tensor_nodes


@dataclass(frozen=True)
class OneStepModel:
    """Frozen-control dynamics over one time step.

    ``drift(x, u)`` returns ``(..., d)`` and ``diffusion(x, u)`` returns
    ``(..., d, m)`` for states ``x`` of shape ``(..., d)``.
    """

    drift: Callable[[np.ndarray, np.ndarray], np.ndarray]
    diffusion: Callable[[np.ndarray, np.ndarray], np.ndarray]
    dt: float
    control: np.ndarray

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        object.__setattr__(self, "control", np.atleast_1d(np.asarray(self.control, dtype=float)))


def euler_step(model: OneStepModel, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """``x + b(x,u) dt + sigma(x,u) sqrt(dt) xi``, broadcasting over leading axes."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    b = np.asarray(model.drift(x, model.control), dtype=float)
    s = np.asarray(model.diffusion(x, model.control), dtype=float)
    if s.shape[-1] != xi.shape[-1]:
        raise DimensionError(f"diffusion has {s.shape[-1]} noise columns, xi has {xi.shape[-1]}")
    out = x + b * model.dt + np.sqrt(model.dt) * np.einsum("...ij,...j->...i", s, xi)
    _check_finite(out, x)
    return out


def _check_finite(out: np.ndarray, x: np.ndarray) -> None:
    bad = ~np.isfinite(out)
    if np.any(bad):
        where = np.argwhere(bad)[0]
        node = x.reshape(-1, x.shape[-1])[0] if x.ndim == 1 else x[tuple(where[: x.ndim - 1])]
        raise NumericOverflowError(f"Euler proposal from node {node} is not finite")


def proposals(model: OneStepModel, x: np.ndarray, rule: GaussHermiteRule) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All tensor-rule proposals from every node.

    Returns ``(xtilde, nodes, weights)`` with ``xtilde`` of shape
    ``(M, L**m, d)``; ``nodes`` is ``(L**m, m)``.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    b = np.asarray(model.drift(x, model.control), dtype=float)
    s = np.asarray(model.diffusion(x, model.control), dtype=float)
    m = s.shape[-1]
    nodes, weights = tensor_nodes(rule, m)
    mean = x + b * model.dt
    spread = np.sqrt(model.dt) * np.einsum("kij,lj->kli", s, nodes)
    xt = mean[:, None, :] + spread
    _check_finite(xt, x)
    return xt, nodes, weights


@dataclass
class CondExpResult:
    """``value`` is ``(M, k)``; ``dw`` is ``(M, k, m)``; ``outside`` counts proposals beyond the box."""

    value: np.ndarray
    dw: np.ndarray
    outside: int


def cond_exp_both(field, model: OneStepModel, x: np.ndarray, rule: GaussHermiteRule, box: DomainBox | None = None) -> CondExpResult:
    """Both expectations from a single evaluation of ``field`` at the proposals.

    ``field`` maps ``(..., d)`` states to ``(...,)`` or ``(..., k)`` values.
    """
    xt, nodes, weights = proposals(model, x, rule)
    mnodes, nq, d = xt.shape
    vals = np.asarray(field(xt.reshape(-1, d)), dtype=float)
    vals = vals.reshape(mnodes, nq, -1)
    value = np.einsum("l,klc->kc", weights, vals)
    dw = np.sqrt(model.dt) * np.einsum("l,klc,lj->kcj", weights, vals, nodes)
    outside = 0 if box is None else int(np.count_nonzero(~box.contains(xt.reshape(-1, d))))
    return CondExpResult(value, dw, outside)


def cond_exp(field, model: OneStepModel, x: np.ndarray, rule: GaussHermiteRule) -> np.ndarray:
    """Quadrature estimate of ``E[field(x_next) | x]`` per node, shape ``(M, k)``."""
    return cond_exp_both(field, model, x, rule).value


def cond_exp_dw(field, model: OneStepModel, x: np.ndarray, rule: GaussHermiteRule) -> np.ndarray:
    """Quadrature estimate of ``E[field(x_next) dW^T | x]``, shape ``(M, k, m)``."""
    return cond_exp_both(field, model, x, rule).dw
