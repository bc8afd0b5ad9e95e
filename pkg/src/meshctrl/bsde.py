"""Backward sweep for the adjoint pair ``(p, q)`` on a point cloud.

On each level ``n`` (from ``N-1`` down to 0) and each node ``x_k``:

    q_n = E_hat[p_{n+1} dW^T] / dt
    p_n = E_hat[p_{n+1}] + dt * f(x_k, p_n, q_n, u_n)

where ``E_hat`` is the quadrature expectation over Euler proposals with
``p_{n+1}`` read through an interpolant of the level-(n+1) nodal values.  The
implicit ``p`` equation is solved by Picard iteration.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .condexp import OneStepModel, cond_exp_both
from .errors import DivergenceError, MeshCtrlError, NumericOverflowError, RadiusTooSmallError
from .meshfree import InterpConfig, Interpolant, Interpolator, make_interpolator
from .pointcloud import PointCloud
from .problems import ProblemSpec
from .quadrature import GaussHermiteRule, gauss_hermite

log = logging.getLogger(__name__)

PICARD_TOL = 1e-12
PICARD_MAX_ITER = 50
PICARD_GROWTH_LIMIT = 5


@dataclass(frozen=True)
class DriverSpec:
    """``f(x, p, q)`` for one level, with the control and time already bound."""

    f: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    lipschitz: float | None = None

    @classmethod
    def from_problem(cls, problem: ProblemSpec, u: np.ndarray, t: float) -> DriverSpec:
        return cls(lambda x, p, q: problem.driver(x, p, q, u, t))


@dataclass
class StepResult:
    p: np.ndarray
    q: np.ndarray
    iterations: int
    outside: int


@dataclass
class AdjointGrid:
    """Nodal adjoint values for every level plus lazily built level interpolants.

    ``p`` has shape ``(N+1, M, d)`` and ``q`` ``(N+1, M, d, m)``.  The terminal
    level carries ``q = 0``; it is never used by the gradient.
    """

    cloud: PointCloud
    interpolator: Interpolator
    T: float
    p: np.ndarray
    q: np.ndarray
    picard_iterations: np.ndarray
    outside: np.ndarray
    _p_fields: dict = field(default_factory=dict, repr=False)
    _q_fields: dict = field(default_factory=dict, repr=False)

    @property
    def N(self) -> int:
        return self.p.shape[0] - 1

    @property
    def dt(self) -> float:
        return self.T / self.N

    def p_field(self, n: int) -> Interpolant:
        if n not in self._p_fields:
            self._p_fields[n] = self.interpolator.fit(self.p[n])
        return self._p_fields[n]

    def q_field(self, n: int) -> Interpolant:
        """Interpolant of ``q_n`` flattened to ``d*m`` components."""
        if n not in self._q_fields:
            m = self.p.shape[1]
            self._q_fields[n] = self.interpolator.fit(self.q[n].reshape(m, -1))
        return self._q_fields[n]

    def dump_csv(self, path: str | Path) -> None:
        """Write ``n,k,x1..xd,p1..pd,q11..qdm`` rows at full double precision."""
        n_lev, m, d = self.p.shape
        nm = self.q.shape[-1]
        header = ["n", "k"] + [f"x{i + 1}" for i in range(d)] + [f"p{i + 1}" for i in range(d)]
        header += [f"q{i + 1}{j + 1}" for i in range(d) for j in range(nm)]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for n in range(n_lev):
                for k in range(m):
                    vals = np.concatenate([self.cloud.points[k], self.p[n, k], self.q[n, k].ravel()])
                    w.writerow([n, k] + [format(v, ".17g") for v in vals])


def terminal_condition(cloud: PointCloud, terminal_gradient: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    p = np.asarray(terminal_gradient(cloud.points), dtype=float).reshape(cloud.size, -1)
    if not np.all(np.isfinite(p)):
        raise NumericOverflowError("terminal gradient is not finite at some node")
    return p


def picard_solve(expected: np.ndarray, q: np.ndarray, x: np.ndarray, driver: DriverSpec, dt: float) -> tuple[np.ndarray, int]:
    """Fixed point of ``p = expected + dt * f(x, p, q)`` for all nodes at once."""
    p = expected.copy()
    growth = 0
    last = np.inf
    for it in range(1, PICARD_MAX_ITER + 1):
        nxt = expected + dt * np.asarray(driver.f(x, p, q), dtype=float)
        delta = np.abs(nxt - p)
        step = float(delta.max()) if delta.size else 0.0
        p = nxt
        if not np.isfinite(step):
            k = int(np.argmax(~np.isfinite(nxt).all(axis=-1)))
            raise DivergenceError(f"Picard iterate became non-finite at node x={x[k]}")
        if step <= PICARD_TOL:
            return p, it
        growth = growth + 1 if step > last else 0
        if growth >= PICARD_GROWTH_LIMIT:
            k = int(np.argmax(delta.max(axis=-1)))
            raise DivergenceError(f"Picard iteration not contracting at node x={x[k]} (increment {step:.3g})")
        last = step
    log.debug("Picard hit %d iterations with increment %.3g", PICARD_MAX_ITER, step)
    return p, PICARD_MAX_ITER


def backward_step(
    field_next,
    cloud: PointCloud,
    driver: DriverSpec,
    model: OneStepModel,
    rule: GaussHermiteRule,
) -> StepResult:
    """One level of the sweep; ``field_next`` evaluates ``p_{n+1}`` at states."""
    res = cond_exp_both(field_next, model, cloud.points, rule, cloud.box)
    q = res.dw / model.dt
    p, iters = picard_solve(res.value, q, cloud.points, driver, model.dt)
    return StepResult(p, q, iters, res.outside)


def solve_bsde(
    problem: ProblemSpec,
    control,
    cloud: PointCloud,
    rule: GaussHermiteRule | None = None,
    config: InterpConfig | Interpolator | None = None,
) -> AdjointGrid:
    """Full backward sweep under a piecewise-constant control.

    ``control`` is a :class:`~meshctrl.optimizer.ControlTrajectory` or an
    ``(N, d1)`` array of piece values.  Passing a ready
    :class:`~meshctrl.meshfree.Interpolator` as ``config`` reuses its
    cloud-dependent set-up (the RBF factorisation, for instance).
    """
    alphas = np.asarray(getattr(control, "values", control), dtype=float).reshape(-1, problem.d1)
    n_steps = alphas.shape[0]
    if n_steps < 1:
        raise ValueError("control needs at least one piece")
    rule = rule or gauss_hermite(4)
    interp = config if isinstance(config, Interpolator) else make_interpolator(cloud, config)
    dt = problem.T / n_steps
    m = cloud.size
    p = np.zeros((n_steps + 1, m, problem.d))
    q = np.zeros((n_steps + 1, m, problem.d, problem.m))
    p[n_steps] = terminal_condition(cloud, problem.dkdx)
    iters = np.zeros(n_steps, dtype=int)
    outside = np.zeros(n_steps, dtype=int)
    for n in range(n_steps - 1, -1, -1):
        u = alphas[n]
        model = OneStepModel(problem.b, problem.sigma, dt, u)
        driver = DriverSpec.from_problem(problem, u, n * dt)
        try:
            step = backward_step(interp.fit(p[n + 1]), cloud, driver, model, rule)
        except RadiusTooSmallError as exc:
            raise RadiusTooSmallError(f"level {n}: {exc}", exc.neighbor_count) from exc
        except MeshCtrlError as exc:
            raise type(exc)(f"level {n}: {exc}") from exc
        p[n], q[n] = step.p, step.q
        iters[n], outside[n] = step.iterations, step.outside
    return AdjointGrid(cloud, interp, problem.T, p, q, iters, outside)
