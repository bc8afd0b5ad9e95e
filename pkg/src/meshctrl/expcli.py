"""Batch experiment runner behind the ``meshctrl`` command.

Usage::

    meshctrl <run|converge|compare|interp-bench> --config <path> [--out <dir>] [--seed <u64>]

The config is flat ``key = value`` text; ``#`` starts a comment.  A compare
config lists two method blocks with repeated ``method.`` keys, each block
opened by ``method.name``::

    case = 1
    sigma = 0.1, 0.15, 0.2
    N = 21
    method.name = rbf
    method.backend = rbf
    method.points = 216
    method.name = trilinear
    method.backend = multilinear
    method.points = 729

Every command writes CSV tables (LF line endings, 17 significant digits)
plus a small gnuplot script per figure.  Exit status is 0 on success, 2 for
a configuration error and 3 when the solver fails.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import ConfigError, MeshCtrlError
from .meshfree import BACKENDS, InterpConfig, MlsParams, make_interpolator
from .optimizer import ControlTrajectory, OptimizerConfig, ProjectionSpec, SolveResult, build_cloud, estimate_box, solve
from .pointcloud import DomainBox, fill_distance, halton_cloud, tensor_grid
from .problems import BenchmarkCase, exact_control, l2_control_error, make_benchmark, max_control_error

log = logging.getLogger(__name__)

COMMANDS = ("run", "converge", "compare", "interp-bench")
EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3


def fmt(v: float) -> str:
    return format(float(v), ".17g")


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class MethodBlock:
    """One ``method.`` block of a compare config."""

    name: str
    backend: str = "rbf"
    points: str = "N^2"


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed experiment settings.

    ``points`` is either the rule ``"N^2"`` or an explicit node count.
    ``sigma`` defaults to ``0.1, 0.15, 0.2, ...`` truncated to ``d``.
    """

    command: str | None = None
    case: int = 1
    d: int = 2
    sigma: tuple[float, ...] = (0.1, 0.15)
    y0: float = 0.5
    T: float = 1.0
    N: tuple[int, ...] = (21,)
    points: str = "N^2"
    backend: str = "rbf"
    quad_order: int = 4
    samples: int = 50_000
    seed: int = 0
    out: str = "."
    step: float = 0.5
    tol: float = 1e-3
    max_iter: int = 50
    backtrack: bool = False
    initial: float = 0.0
    u_min: float | None = None
    u_max: float | None = None
    mls_degree: int = 1
    radius_factor: float = 3.0
    methods: tuple[MethodBlock, ...] = ()
    # interp-bench
    function: str = "sincos"
    levels: tuple[int, ...] = (64, 256, 1024)
    backends: tuple[str, ...] = ("mls", "rbf")
    probe: int = 50

    def benchmark(self) -> BenchmarkCase:
        return BenchmarkCase(case=self.case, sigmas=self.sigma, y0=self.y0, T=self.T)

    def point_count(self, n: int, rule: str | None = None) -> int:
        rule = self.points if rule is None else rule
        if rule in ("N^2", "N2", "N²", "N**2"):
            return n * n
        return int(rule)

    def optimizer(self, backend: str | None = None, points: int = 441) -> OptimizerConfig:
        interp = InterpConfig(
            backend=backend or self.backend,
            mls=MlsParams(degree=self.mls_degree, radius_factor=self.radius_factor),
            shepard_radius_factor=self.radius_factor,
        )
        return OptimizerConfig(
            step=self.step,
            tol=self.tol,
            max_iter=self.max_iter,
            samples=self.samples,
            seed=self.seed,
            interp=interp,
            quad_order=self.quad_order,
            points=points,
            backtrack=self.backtrack,
        )

    def projection(self) -> ProjectionSpec | None:
        if self.u_min is None and self.u_max is None:
            return None
        return ProjectionSpec(self.u_min, self.u_max)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.replace(",", " ").split())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(",", " ").split())


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _opt_float(text: str) -> float | None:
    return None if text.lower() in ("none", "") else float(text)


_SCALARS: dict[str, Callable[[str], object]] = {
    "command": str,
    "case": int,
    "d": int,
    "sigma": _float_list,
    "y0": float,
    "T": float,
    "N": _int_list,
    "points": str,
    "backend": str,
    "quad_order": int,
    "L": int,
    "samples": int,
    "seed": int,
    "out": str,
    "step": float,
    "tol": float,
    "max_iter": int,
    "max_iters": int,
    "backtrack": _bool,
    "initial": float,
    "u_min": _opt_float,
    "u_max": _opt_float,
    "mls_degree": int,
    "radius_factor": float,
    "function": str,
    "levels": _int_list,
    "backends": lambda s: tuple(v for v in s.replace(",", " ").split()),
    "probe": int,
}
_ALIASES = {"L": "quad_order", "max_iters": "max_iter"}
_METHOD_KEYS = {"name", "backend", "points"}


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse flat ``key = value`` text; errors carry the line number and key."""
    values: dict[str, object] = {}
    methods: list[dict[str, str]] = []
    seen_d = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key.startswith("method."):
            sub = key[len("method.") :]
            if sub not in _METHOD_KEYS:
                raise ConfigError(f"{source}:{lineno}: unknown method field {key!r}")
            if sub == "name" or not methods or sub in methods[-1]:
                methods.append({})
            methods[-1][sub] = val
            continue
        if key not in _SCALARS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            parsed = _SCALARS[key](val)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
        values[_ALIASES.get(key, key)] = parsed
        seen_d = seen_d or key == "d"
    blocks = []
    for i, blk in enumerate(methods):
        blocks.append(MethodBlock(name=blk.get("name", f"method{i + 1}"), backend=blk.get("backend", "rbf"), points=blk.get("points", "N^2")))
    values["methods"] = tuple(blocks)
    if "sigma" in values and not seen_d:
        values["d"] = len(values["sigma"])
    elif "sigma" not in values and seen_d:
        values["sigma"] = tuple(0.1 + 0.05 * i for i in range(int(values["d"])))
    try:
        cfg = ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return validate(cfg, source)


def validate(cfg: ExperimentConfig, source: str = "<config>") -> ExperimentConfig:
    def bad(field_name: str, msg: str):
        raise ConfigError(f"{source}: field {field_name!r}: {msg}")

    if cfg.command is not None and cfg.command not in COMMANDS:
        bad("command", f"must be one of {COMMANDS}")
    if len(cfg.sigma) != cfg.d:
        bad("sigma", f"has {len(cfg.sigma)} entries but d = {cfg.d}")
    if cfg.case not in (1, 2):
        bad("case", "must be 1 or 2")
    if not cfg.N or any(n < 1 for n in cfg.N):
        bad("N", "needs positive integers")
    for name, backend in [("backend", cfg.backend)] + [("method.backend", m.backend) for m in cfg.methods]:
        if backend not in BACKENDS:
            bad(name, f"unknown back-end {backend!r}; choose from {BACKENDS}")
    for b in cfg.backends:
        if b not in BACKENDS:
            bad("backends", f"unknown back-end {b!r}")
    for name, rule in [("points", cfg.points)] + [("method.points", m.points) for m in cfg.methods]:
        try:
            if cfg.point_count(2, rule) < 1:
                raise ValueError
        except ValueError:
            bad(name, f"must be 'N^2' or a positive integer, got {rule!r}")
    if cfg.samples < 1:
        bad("samples", "must be at least 1")
    if not cfg.tol > 0:
        bad("tol", "must be positive")
    if not cfg.step > 0:
        bad("step", "must be positive")
    if cfg.max_iter < 0:
        bad("max_iter", "must be nonnegative")
    if not 0 <= cfg.seed < 2**64:
        bad("seed", "must be an unsigned 64-bit integer")
    if not 1 <= cfg.quad_order <= 64:
        bad("quad_order", "must lie in 1..64")
    try:
        cfg.benchmark()
    except MeshCtrlError as exc:
        bad("case", str(exc))
    except ValueError as exc:
        bad("sigma/y0/T", str(exc))
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, str(path))


# --------------------------------------------------------------------------
# shared helpers


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else (str(v) if isinstance(v, (int, np.integer)) else fmt(v)) for v in row])


def _write_gnuplot(path: Path, title: str, data: str, plots: list[str], logscale: bool = False, xlabel: str = "", ylabel: str = "") -> None:
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set title '{title}'",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
    ]
    if logscale:
        lines.append("set logscale xy")
    lines.append("plot " + ", \\\n     ".join(f"'{data}' {p}" for p in plots))
    path.write_text("\n".join(lines) + "\n")


def _solve_case(cfg: ExperimentConfig, n: int, backend: str, points: int, max_iter: int | None = None) -> tuple[SolveResult, float]:
    """One optimisation; returns the result and the solve wall-clock in ms."""
    case = cfg.benchmark()
    problem = make_benchmark(case)
    opt = cfg.optimizer(backend, points)
    if max_iter is not None:
        opt = replace(opt, max_iter=max_iter)
    initial = ControlTrajectory.constant(n, cfg.initial, cfg.T)
    start = time.monotonic()
    if opt.max_iter == 0:
        result = SolveResult(initial, [], False)
    else:
        result = solve(problem, opt, cfg.projection(), initial, n_steps=n)
    return result, 1e3 * (time.monotonic() - start)


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x`` over positive finite pairs."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    ok = (x > 0) & (y > 0) & np.isfinite(x) & np.isfinite(y)
    if ok.sum() < 2:
        return math.nan
    return float(np.polyfit(np.log(x[ok]), np.log(y[ok]), 1)[0])


def successive_rates(x, y) -> list[float]:
    """``log(y_i / y_{i-1}) / log(x_i / x_{i-1})``; NaN when either error is not positive."""
    rates = [math.nan]
    for i in range(1, len(x)):
        a, b = y[i - 1], y[i]
        if a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b) and x[i] != x[i - 1]:
            rates.append(math.log(b / a) / math.log(x[i] / x[i - 1]))
        else:
            rates.append(math.nan)
    return rates


# --------------------------------------------------------------------------
# commands


def cmd_run(cfg: ExperimentConfig, out: Path) -> dict:
    """Single solve at ``N[0]``; writes ``control.csv``, ``iters.csv`` and ``control.gp``."""
    n = cfg.N[0]
    result, wall = _solve_case(cfg, n, cfg.backend, cfg.point_count(n))
    case = cfg.benchmark()
    t = result.control.times
    exact = np.atleast_1d(exact_control(case, t))
    rows = [[ti, ui, ei] for ti, ui, ei in zip(t, result.control.values[:, 0], exact)]
    _write_csv(out / "control.csv", ["t", "u_num", "u_exact"], rows)
    result.write_diagnostics(out / "iters.csv")
    _write_gnuplot(
        out / "control.gp",
        f"case {cfg.case}, d={cfg.d}, N={n}, {cfg.backend}",
        "control.csv",
        ["using 1:2 with points pt 7", "using 1:3 with lines"],
        xlabel="t",
        ylabel="u",
    )
    err = l2_control_error(result.control, case)
    summary = {"l2_error": err, "max_error": max_control_error(result.control, case), "iterations": result.iterations, "converged": result.converged, "wall_ms": wall}
    print(f"run: N={n} backend={cfg.backend} iterations={result.iterations} converged={result.converged} l2_error={fmt(err)} wall_ms={wall:.0f}")
    return summary


def cmd_converge(cfg: ExperimentConfig, out: Path, solver: Callable | None = None) -> dict:
    """Error decay over the ``N`` list; writes ``decay.csv``, ``decay_summary.txt`` and ``decay.gp``.

    ``solver(cfg, n)`` may replace the full solve; it must return ``(control, h)``.
    """
    if len(cfg.N) < 3:
        raise ConfigError("field 'N': converge needs at least 3 values")
    if any(b <= a for a, b in zip(cfg.N, cfg.N[1:])):
        raise ConfigError("field 'N': converge needs an increasing list")
    case = cfg.benchmark()
    dts, hs, errs, failures = [], [], [], []
    for n in cfg.N:
        try:
            if solver is not None:
                control, h = solver(cfg, n)
            else:
                result, _ = _solve_case(cfg, n, cfg.backend, cfg.point_count(n))
                control, h = result.control, result.cloud.fill_distance if result.cloud is not None else math.nan
            err = l2_control_error(control, case)
        except (MeshCtrlError, FloatingPointError, np.linalg.LinAlgError) as exc:
            log.error("N=%d failed: %s", n, exc)
            failures.append(n)
            h, err = math.nan, math.nan
        dts.append(cfg.T / n)
        hs.append(h)
        errs.append(err)
        print(f"converge: N={n} l2_error={fmt(err)}", flush=True)
    rates = successive_rates(dts, errs)
    rows = [[n, dt, h, e, r] for n, dt, h, e, r in zip(cfg.N, dts, hs, errs, rates)]
    _write_csv(out / "decay.csv", ["N", "dt", "h", "l2_error", "rate"], rows)
    slope = loglog_slope(dts, errs)
    undefined = [n for n, r in zip(cfg.N[1:], rates[1:]) if not math.isfinite(r)]
    note = []
    if undefined:
        note.append(f"rate undefined at N={undefined} (zero or failed error)")
    if failures:
        note.append(f"solver failed at N={failures}")
    summary_line = f"slope={fmt(slope)}" + ("" if not note else " # " + "; ".join(note))
    (out / "decay_summary.txt").write_text(summary_line + "\n")
    _write_gnuplot(out / "decay.gp", f"error decay, case {cfg.case}, {cfg.backend}", "decay.csv", ["using 2:4 with linespoints"], logscale=True, xlabel="dt", ylabel="L2 control error")
    print(f"converge: {summary_line}")
    return {"slope": slope, "errors": errs, "rates": rates, "failures": failures}


def cmd_compare(cfg: ExperimentConfig, out: Path) -> dict:
    """Two method blocks on the same case, N and seed; writes ``compare.csv``."""
    if len(cfg.methods) != 2:
        raise ConfigError(f"compare needs exactly two method blocks, found {len(cfg.methods)}")
    n = cfg.N[0]
    case = cfg.benchmark()
    rows, summary = [], {}
    for blk in cfg.methods:
        result, wall = _solve_case(cfg, n, blk.backend, cfg.point_count(n, blk.points))
        m = result.cloud.size if result.cloud is not None else cfg.point_count(n, blk.points)
        l2, mx = l2_control_error(result.control, case), max_control_error(result.control, case)
        rows.append([blk.name, m, l2, mx, wall])
        summary[blk.name] = {"M": m, "l2_error": l2, "max_error": mx, "wall_ms": wall, "iterations": result.iterations}
        print(f"compare: {blk.name} ({blk.backend}, M={m}) l2_error={fmt(l2)} max_error={fmt(mx)} wall_ms={wall:.0f}", flush=True)
    _write_csv(out / "compare.csv", ["method", "M", "l2_error", "max_error", "wall_ms"], rows)
    _write_gnuplot(out / "compare.gp", f"back-end comparison, case {cfg.case}, d={cfg.d}", "compare.csv", ["using 5:4:1 with labels point pt 7 offset 1,1"], xlabel="wall ms", ylabel="max control error")
    return summary


TEST_FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sincos": lambda x: np.sin(x[:, 0]) * (np.cos(x[:, 1]) if x.shape[1] > 1 else 1.0),
    "gauss": lambda x: np.exp(-np.sum((x - 0.5) ** 2, axis=1)),
    "const": lambda x: np.full(x.shape[0], 1.5),
}


def probe_lattice(box: DomainBox, per_dim: int) -> np.ndarray:
    return tensor_grid(per_dim, box).points


def cmd_interp_bench(cfg: ExperimentConfig, out: Path) -> dict:
    """Max interpolation error on a probe lattice over Halton refinements; writes ``interp.csv``."""
    if len(cfg.levels) < 3:
        raise ConfigError("field 'levels': interp-bench needs at least 3 refinement levels")
    if cfg.function not in TEST_FUNCTIONS:
        raise ConfigError(f"field 'function': choose from {tuple(TEST_FUNCTIONS)}")
    fn = TEST_FUNCTIONS[cfg.function]
    box = DomainBox.unit(cfg.d)
    probe = probe_lattice(box, cfg.probe)
    exact = fn(probe)
    rows, summary = [], {}
    for backend in cfg.backends:
        hs, errs = [], []
        for m in cfg.levels:
            cloud = tensor_grid(max(2, round(m ** (1 / cfg.d))), box) if backend == "multilinear" else halton_cloud(m, box)
            cloud = cloud.with_fill_distance()
            interp = make_interpolator(cloud, replace(cfg.optimizer(backend).interp))
            approx = interp.fit(fn(cloud.points))(probe)
            hs.append(cloud.fill_distance)
            errs.append(float(np.max(np.abs(approx - exact))))
        rates = successive_rates(hs, errs)
        rows += [[backend, h, e, r] for h, e, r in zip(hs, errs, rates)]
        summary[backend] = {"h": hs, "max_err": errs, "rate": rates}
        print(f"interp-bench: {backend} errors={[fmt(e) for e in errs]} rates={[f'{r:.3f}' for r in rates[1:]]}")
    _write_csv(out / "interp.csv", ["backend", "h", "max_err", "rate"], rows)
    _write_gnuplot(out / "interp.gp", f"interpolation error, {cfg.function}, d={cfg.d}", "interp.csv", ["using 2:3 with linespoints"], logscale=True, xlabel="fill distance h", ylabel="max error")
    return summary


_DISPATCH = {"run": cmd_run, "converge": cmd_converge, "compare": cmd_compare, "interp-bench": cmd_interp_bench}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="meshctrl", description="Meshfree stochastic optimal control experiments.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="flat key = value config file")
    ap.add_argument("--out", default=None, help="output directory (default: config 'out' or .)")
    ap.add_argument("--seed", type=int, default=None, help="unsigned 64-bit RNG seed, overrides the config")
    ap.add_argument("-v", "--verbose", action="store_true", help="log each optimisation iteration")
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = validate(replace(cfg, seed=args.seed), "--seed")
        if cfg.command is not None and cfg.command != args.command:
            log.warning("config names command %r; running %r", cfg.command, args.command)
        out = Path(args.out if args.out is not None else cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        summary = _DISPATCH[args.command](cfg, out)
    except ConfigError as exc:
        print(f"meshctrl: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (MeshCtrlError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"meshctrl: solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    if args.command == "converge" and summary["failures"]:
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
