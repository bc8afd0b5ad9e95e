"""Meshfree adjoint solver for stochastic optimal control.

The pieces, bottom up:

- :mod:`~meshctrl.pointcloud` boxes, Halton clouds, tensor grids, fill distance
- :mod:`~meshctrl.quadrature` Gauss-Hermite rules and their tensor products
- :mod:`~meshctrl.meshfree` MLS, Shepard, polyharmonic RBF and multilinear interpolation
- :mod:`~meshctrl.condexp` one-step conditional expectations over Euler proposals
- :mod:`~meshctrl.bsde` the backward sweep for the adjoint pair ``(p, q)``
- :mod:`~meshctrl.optimizer` Monte Carlo gradient and projected gradient iteration
- :mod:`~meshctrl.problems` the problem interface and the analytic benchmark
- :mod:`~meshctrl.expcli` the ``meshctrl`` experiment runner
"""

from .bsde import AdjointGrid, DriverSpec, backward_step, picard_solve, solve_bsde, terminal_condition
from .condexp import OneStepModel, cond_exp, cond_exp_both, cond_exp_dw, euler_step
from .errors import (
    BackendMismatchError,
    ConditioningError,
    ConfigError,
    DimensionError,
    DivergenceError,
    InvalidCaseError,
    MeshCtrlError,
    NumericOverflowError,
    RadiusTooSmallError,
    TooManyNodesError,
)
from .meshfree import InterpConfig, Interpolant, MlsParams, RbfKernel, interp_field, make_interpolator
from .optimizer import (
    ControlTrajectory,
    OptimizerConfig,
    ProjectionSpec,
    SolveResult,
    cost_estimate,
    gradient,
    project,
    simulate_paths,
    solve,
)
from .pointcloud import DomainBox, PointCloud, fill_distance, halton_cloud, halton_sequence, tensor_grid
from .problems import BenchmarkCase, ProblemSpec, exact_control, l2_control_error, make_benchmark, max_control_error, ystar
from .quadrature import GaussHermiteRule, gauss_hermite, tensor_expectation, tensor_nodes

__version__ = "0.1.0"
