"""Control-problem interface and the geometric-Brownian benchmark family.

Callback conventions (all vectorised over leading axes of ``x``; ``u`` is a
length-``d1`` vector, ``t`` a scalar time):

=============  ======================  ==========================================
callback       returns                 meaning
=============  ======================  ==========================================
``b``          ``(..., d)``            drift ``b(x, u)``
``sigma``      ``(..., d, m)``         diffusion ``sigma(x, u)``
``dbdx``       ``(..., d, d)``         ``[i, j] = d b_i / d x_j``
``dsigmadx``   ``(..., d, m, d)``      ``[i, k, j] = d sigma_ik / d x_j``
``dbdu``       ``(..., d, d1)``        ``[i, a] = d b_i / d u_a``
``dsigmadu``   ``(..., d, m, d1)``     ``[i, k, a] = d sigma_ik / d u_a``
``j``          ``(...,)``              running cost ``j(x, u, t)``
``djdx``       ``(..., d)``            gradient of ``j`` in ``x``
``djdu``       ``(..., d1)``           gradient of ``j`` in ``u``
``k``          ``(...,)``              terminal cost ``k(x)``
``dkdx``       ``(..., d)``            gradient of ``k``
=============  ======================  ==========================================
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidCaseError

Array = np.ndarray


@dataclass(frozen=True)
class ProblemSpec:
    d: int
    m: int
    d1: int
    T: float
    x0: Array
    b: Callable
    sigma: Callable
    dbdx: Callable
    dsigmadx: Callable
    dbdu: Callable
    dsigmadu: Callable
    j: Callable
    djdx: Callable
    djdu: Callable
    k: Callable
    dkdx: Callable
    name: str = "problem"

    def __post_init__(self):
        object.__setattr__(self, "x0", np.atleast_1d(np.asarray(self.x0, dtype=float)))
        if self.x0.shape != (self.d,):
            raise ValueError(f"x0 must have length {self.d}")
        if not self.T > 0:
            raise ValueError("horizon T must be positive")

    def driver(self, x: Array, p: Array, q: Array, u: Array, t: float) -> Array:
        """Adjoint driver ``D_x j + (D_x b)^T p + tr(q^T D_x sigma)``, shape ``(..., d)``."""
        out = np.asarray(self.djdx(x, u, t), dtype=float)
        out = out + np.einsum("...ji,...j->...i", self.dbdx(x, u), p)
        out = out + np.einsum("...jki,...jk->...i", self.dsigmadx(x, u), q)
        return out

    def gradient_integrand(self, x: Array, p: Array, q: Array, u: Array, t: float) -> Array:
        """``p^T D_u b + tr(q^T D_u sigma) + D_u j``, shape ``(..., d1)``."""
        out = np.einsum("...ia,...i->...a", self.dbdu(x, u), p)
        out = out + np.einsum("...ika,...ik->...a", self.dsigmadu(x, u), q)
        return out + np.asarray(self.djdu(x, u, t), dtype=float)


def _zeros(shape_fn):
    def fn(x, *args):
        x = np.asarray(x, dtype=float)
        return np.zeros(x.shape[:-1] + shape_fn(x.shape[-1]))

    return fn


# --------------------------------------------------------------------------
# benchmark


@dataclass(frozen=True)
class BenchmarkCase:
    """Parameters of the two closed-form benchmark cases.

    The state is ``d`` geometric Brownian motions ``dy_i = u y_i dt + s_i y_i dW_i``
    started at ``y0``, tracking a common target ``y*(t)`` with a scalar control.
    """

    case: int = 1
    sigmas: tuple[float, ...] = (0.1, 0.15)
    y0: float = 0.5
    T: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "sigmas", tuple(float(s) for s in self.sigmas))
        if self.case not in (1, 2):
            raise InvalidCaseError(f"case must be 1 or 2, got {self.case}")
        if not self.sigmas:
            raise InvalidCaseError("need at least one volatility")
        if not self.y0 > 0:
            raise InvalidCaseError("y0 must be positive")
        if not self.T > 0:
            raise InvalidCaseError("T must be positive")
        t = np.linspace(0.0, self.T, 1001)
        den = self.denominator(t)
        if np.any(den <= 0):
            bad = float(t[np.argmax(den <= 0)])
            raise InvalidCaseError(f"case {self.case} denominator is not positive at t={bad}")

    @property
    def d(self) -> int:
        return len(self.sigmas)

    def denominator(self, t):
        t = np.asarray(t, dtype=float)
        if self.case == 1:
            return 1.0 / self.y0 - self.T * t + 0.5 * t * t
        return 1.0 / self.y0 + 1.0 - np.exp(-t) - np.exp(-self.T) * t

    def _check_time(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < -1e-12) or np.any(t > self.T * (1 + 1e-12)):
            raise ValueError(f"time outside [0, {self.T}]")
        return t


def exact_control(case: BenchmarkCase, t) -> np.ndarray | float:
    """Closed-form optimal control ``u*(t)``."""
    t = case._check_time(t)
    if case.case == 1:
        out = (case.T - t) / case.denominator(t)
    else:
        out = (np.exp(-case.T) - np.exp(-t)) / case.denominator(t)
    return float(out) if out.ndim == 0 else out


def ystar(case: BenchmarkCase, t) -> np.ndarray | float:
    """Tracking target ``y*(t)`` that makes :func:`exact_control` optimal."""
    t = case._check_time(t)
    s2 = np.asarray(case.sigmas) ** 2
    growth = np.sum(np.exp(np.multiply.outer(t, s2)), axis=-1)
    den = case.denominator(t)
    if case.case == 1:
        out = (1.0 - (t - case.T) ** 2 / den + growth / den) / case.d
    else:
        out = ((growth - (np.exp(-case.T) - np.exp(-t)) ** 2) / den - np.exp(-t)) / case.d
    return float(out) if np.ndim(out) == 0 else out


def make_benchmark(case: BenchmarkCase) -> ProblemSpec:
    d = case.d
    s = np.asarray(case.sigmas)
    eye = np.eye(d)

    def b(x, u):
        return u[0] * np.asarray(x, dtype=float)

    def sigma(x, u):
        x = np.asarray(x, dtype=float)
        return (s * x)[..., :, None] * eye

    def dbdx(x, u):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(u[0] * eye, x.shape[:-1] + (d, d))

    def dsigmadx(x, u):
        x = np.asarray(x, dtype=float)
        out = np.zeros((d, d, d))
        out[np.arange(d), np.arange(d), np.arange(d)] = s
        return np.broadcast_to(out, x.shape[:-1] + (d, d, d))

    def dbdu(x, u):
        return np.asarray(x, dtype=float)[..., :, None]

    def j(x, u, t):
        x = np.asarray(x, dtype=float)
        return 0.5 * np.sum((x - ystar(case, t)) ** 2, axis=-1) + 0.5 * u[0] ** 2

    def djdx(x, u, t):
        return np.asarray(x, dtype=float) - ystar(case, t)

    def djdu(x, u, t):
        x = np.asarray(x, dtype=float)
        return np.full(x.shape[:-1] + (1,), u[0])

    return ProblemSpec(
        d=d,
        m=d,
        d1=1,
        T=case.T,
        x0=np.full(d, case.y0),
        b=b,
        sigma=sigma,
        dbdx=dbdx,
        dsigmadx=dsigmadx,
        dbdu=dbdu,
        dsigmadu=_zeros(lambda dd: (dd, dd, 1)),
        j=j,
        djdx=djdx,
        djdu=djdu,
        k=_zeros(lambda dd: ()),
        dkdx=_zeros(lambda dd: (dd,)),
        name=f"benchmark-case{case.case}-d{d}",
    )


def l2_control_error(numeric, case: BenchmarkCase) -> float:
    """Discrete L2[0,T] distance between pieces and ``u*`` at left endpoints.

    ``numeric`` is a :class:`~meshctrl.optimizer.ControlTrajectory` or an
    array of piece values.
    """
    values = np.asarray(getattr(numeric, "values", numeric), dtype=float).reshape(-1)
    n = values.size
    dt = case.T / n
    t_left = dt * np.arange(n)
    return float(np.sqrt(dt * np.sum((values - exact_control(case, t_left)) ** 2)))


def max_control_error(numeric, case: BenchmarkCase) -> float:
    values = np.asarray(getattr(numeric, "values", numeric), dtype=float).reshape(-1)
    t_left = case.T / values.size * np.arange(values.size)
    return float(np.max(np.abs(values - exact_control(case, t_left))))
