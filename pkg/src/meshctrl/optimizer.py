"""Gradient projection over piecewise-constant controls.

Each iteration solves the adjoint sweep under the current control, estimates
the gradient by Monte Carlo over forward Euler paths and takes a projected
step ``u <- P(u - rho * g)``.
"""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .bsde import AdjointGrid, solve_bsde
from .errors import NumericOverflowError
from .meshfree import InterpConfig, make_interpolator
from .pointcloud import DomainBox, PointCloud, halton_cloud, tensor_grid
from .problems import ProblemSpec
from .quadrature import gauss_hermite

log = logging.getLogger(__name__)

# Samples per RNG substream; fixed so results never depend on how work is split.
PATH_CHUNK = 4096


@dataclass(frozen=True)
class ControlTrajectory:
    """Piece values ``values[n]`` on ``[t_n, t_{n+1})``, shape ``(N, d1)``."""

    values: np.ndarray
    T: float = 1.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError("control needs shape (N, d1) with N >= 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, n: int, value=0.0, T: float = 1.0, d1: int = 1) -> ControlTrajectory:
        return cls(np.broadcast_to(np.asarray(value, dtype=float), (n, d1)).copy(), T)

    @classmethod
    def from_function(cls, fn, n: int, T: float = 1.0) -> ControlTrajectory:
        """Sample ``fn`` at the left endpoint of each piece."""
        t = T / n * np.arange(n)
        return cls(np.asarray(fn(t), dtype=float).reshape(n, -1), T)

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def dt(self) -> float:
        return self.T / self.N

    @property
    def times(self) -> np.ndarray:
        """Left endpoints ``t_0 .. t_{N-1}``."""
        return self.dt * np.arange(self.N)

    def l2_norm(self) -> float:
        return float(np.sqrt(self.dt * np.sum(self.values**2)))


@dataclass(frozen=True)
class ProjectionSpec:
    """Unconstrained (both bounds ``None``) or a componentwise box."""

    low: np.ndarray | float | None = None
    high: np.ndarray | float | None = None

    def __post_init__(self):
        if self.low is not None and self.high is not None and np.any(np.asarray(self.low) > np.asarray(self.high)):
            raise ValueError("box bounds need low <= high")

    @property
    def kind(self) -> str:
        return "unconstrained" if self.low is None and self.high is None else "box"


def project(control: ControlTrajectory, spec: ProjectionSpec | None = None) -> ControlTrajectory:
    if spec is None or spec.kind == "unconstrained":
        return control
    lo = -np.inf if spec.low is None else spec.low
    hi = np.inf if spec.high is None else spec.high
    return ControlTrajectory(np.clip(control.values, lo, hi), control.T)


def l2_distance(a: ControlTrajectory, b: ControlTrajectory) -> float:
    return float(np.sqrt(a.dt * np.sum((a.values - b.values) ** 2)))


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs of :func:`solve`.

    ``points`` is the Halton cloud size (for the multilinear back-end, the
    tensor grid uses ``round(points ** (1/d))`` nodes per axis).  With
    ``resample=False`` every iteration reuses the same Monte Carlo stream.
    """

    step: float = 0.5
    tol: float = 1e-3
    max_iter: int = 50
    samples: int = 50_000
    seed: int = 0
    interp: InterpConfig = field(default_factory=InterpConfig)
    quad_order: int = 4
    points: int = 441
    backtrack: bool = False
    max_halvings: int = 10
    resample: bool = True
    pilot_samples: int = 2000
    box_expand: float = 0.2

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.samples < 1:
            raise ValueError("need at least one Monte Carlo sample")
        if not self.step > 0:
            raise ValueError("step size must be positive")


def _rng(seed: int, stream: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream, chunk])))


def simulate_paths(problem: ProblemSpec, control: ControlTrajectory, samples: int, seed: int = 0, stream: int = 0) -> np.ndarray:
    """Euler-Maruyama paths from ``x0``, shape ``(samples, N+1, d)``.

    Samples are drawn in fixed chunks, each from its own Philox substream keyed
    by ``(seed, stream, chunk)``.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    n_steps, dt = control.N, control.dt
    out = np.empty((samples, n_steps + 1, problem.d))
    out[:, 0] = problem.x0
    sq = np.sqrt(dt)
    for c, start in enumerate(range(0, samples, PATH_CHUNK)):
        stop = min(start + PATH_CHUNK, samples)
        xi = _rng(seed, stream, c).standard_normal((n_steps, stop - start, problem.m))
        x = out[start:stop, 0]
        for n in range(n_steps):
            u = control.values[n]
            s = problem.sigma(x, u)
            with np.errstate(over="ignore", invalid="ignore"):
                x = x + problem.b(x, u) * dt + sq * np.einsum("sij,sj->si", s, xi[n])
            if not np.all(np.isfinite(x)):
                bad = start + int(np.argmax(~np.isfinite(x).all(axis=-1)))
                raise NumericOverflowError(f"path {bad} is not finite at level {n + 1}")
            out[start:stop, n + 1] = x
    return out


def gradient(problem: ProblemSpec, control: ControlTrajectory, grid: AdjointGrid, paths: np.ndarray) -> ControlTrajectory:
    """Monte Carlo estimate of ``E[p_n^T D_u b + tr(q_n^T D_u sigma) + D_u j]`` per piece."""
    g = np.empty_like(control.values)
    for n in range(control.N):
        x = paths[:, n]
        u = control.values[n]
        t = n * control.dt
        p = grid.p_field(n)(x)
        dsu = problem.dsigmadu(x, u)
        if np.any(dsu):
            q = grid.q_field(n)(x).reshape(x.shape[0], problem.d, problem.m)
        else:
            q = np.zeros((x.shape[0], problem.d, problem.m))
        g[n] = problem.gradient_integrand(x, p, q, u, t).mean(axis=0)
    if not np.all(np.isfinite(g)):
        raise NumericOverflowError("gradient estimate is not finite")
    return ControlTrajectory(g, control.T)


def cost_estimate(problem: ProblemSpec, control: ControlTrajectory, paths: np.ndarray) -> float:
    """Left-point time quadrature of the running cost plus the terminal cost, path-averaged."""
    total = 0.0
    for n in range(control.N):
        total += control.dt * float(np.mean(problem.j(paths[:, n], control.values[n], n * control.dt)))
    return total + float(np.mean(problem.k(paths[:, -1])))


def estimate_box(problem: ProblemSpec, control: ControlTrajectory, samples: int = 2000, expand: float = 0.2, seed: int = 0) -> DomainBox:
    """Bounding box of pilot paths, each side pushed out by ``expand`` of its width."""
    pilot = simulate_paths(problem, control, samples, seed, stream=-1 % 2**32)
    flat = pilot.reshape(-1, problem.d)
    lo, hi = flat.min(axis=0), flat.max(axis=0)
    # degenerate (deterministic) coordinates still need a proper box
    pad = np.where(hi - lo > 0, 0.0, np.maximum(1e-3, 0.1 * np.abs(hi)))
    return DomainBox(lo - pad, hi + pad).expanded(expand)


def build_cloud(box: DomainBox, points: int, backend: str) -> PointCloud:
    if backend == "multilinear":
        per_dim = max(2, int(round(points ** (1.0 / box.dim))))
        cloud = tensor_grid(per_dim, box)
    else:
        cloud = halton_cloud(points, box)
    return cloud.with_fill_distance()


@dataclass
class IterationRecord:
    iter: int
    cost: float
    grad_norm: float
    control_change: float
    wall_ms: float
    step: float
    residual: float


@dataclass
class SolveResult:
    control: ControlTrajectory
    history: list[IterationRecord]
    converged: bool
    cloud: PointCloud | None = None
    grid: AdjointGrid | None = None

    @property
    def iterations(self) -> int:
        return len(self.history)

    def write_diagnostics(self, path: str | Path) -> None:
        """CSV with ``iter,cost,grad_norm,control_change,wall_ms``."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iter", "cost", "grad_norm", "control_change", "wall_ms"])
            for r in self.history:
                w.writerow([r.iter] + [format(v, ".17g") for v in (r.cost, r.grad_norm, r.control_change, r.wall_ms)])


def solve(
    problem: ProblemSpec,
    config: OptimizerConfig | None = None,
    projection: ProjectionSpec | None = None,
    initial: ControlTrajectory | None = None,
    n_steps: int = 21,
    cloud: PointCloud | None = None,
) -> SolveResult:
    """Projected gradient iteration until the control stops moving.

    Stops when the projected step at the nominal step size moves the control
    by at most ``config.tol`` in discrete L2[0,T], or after ``max_iter``
    iterations (``converged=False``).  A cost increase along the step, judged
    with common random numbers, halves the step size for that iteration.
    """
    config = config or OptimizerConfig()
    if initial is None:
        initial = ControlTrajectory.constant(n_steps, 0.0, problem.T, problem.d1)
    u = project(initial, projection)
    if cloud is None:
        box = estimate_box(problem, u, config.pilot_samples, config.box_expand, config.seed)
        cloud = build_cloud(box, config.points, config.interp.backend)
    interp = make_interpolator(cloud, config.interp)
    rule = gauss_hermite(config.quad_order)
    history: list[IterationRecord] = []
    converged = False
    grid = None
    for it in range(config.max_iter):
        start = time.monotonic()
        stream = it if config.resample else 0
        paths = simulate_paths(problem, u, config.samples, config.seed, stream)
        grid = solve_bsde(problem, u, cloud, rule, interp)
        g = gradient(problem, u, grid, paths)
        cost = cost_estimate(problem, u, paths)
        rho = config.step
        nominal = project(ControlTrajectory(u.values - rho * g.values, u.T), projection)
        trial = nominal
        if config.backtrack:
            for _ in range(config.max_halvings):
                trial_cost = cost_estimate(problem, trial, simulate_paths(problem, trial, config.samples, config.seed, stream))
                if trial_cost <= cost:
                    break
                rho *= 0.5
                trial = project(ControlTrajectory(u.values - rho * g.values, u.T), projection)
        residual = l2_distance(nominal, u)
        rec = IterationRecord(
            iter=it,
            cost=cost,
            grad_norm=g.l2_norm(),
            control_change=l2_distance(trial, u),
            wall_ms=1e3 * (time.monotonic() - start),
            step=rho,
            residual=residual,
        )
        history.append(rec)
        log.info("iter %d cost %.6g |g| %.3g change %.3g step %.3g", it, cost, rec.grad_norm, rec.control_change, rho)
        u = trial
        if residual <= config.tol:
            converged = True
            break
    return SolveResult(u, history, converged, cloud, grid)


def with_interp(config: OptimizerConfig, interp: InterpConfig, points: int | None = None) -> OptimizerConfig:
    return replace(config, interp=interp, points=config.points if points is None else points)


__all__ = [
    "ControlTrajectory",
    "IterationRecord",
    "OptimizerConfig",
    "ProjectionSpec",
    "SolveResult",
    "build_cloud",
    "cost_estimate",
    "estimate_box",
    "gradient",
    "l2_distance",
    "project",
    "simulate_paths",
    "solve",
    "with_interp",
]
