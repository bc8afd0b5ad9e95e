"""Small problems shared by the test modules."""

import numpy as np

from meshctrl.problems import ProblemSpec


def toy_problem(d=1, m=1, d1=1, T=1.0, x0=None, b=None, sigma=None, j=None, djdu=None, djdx=None, k=None, dkdx=None, dbdx=None, dbdu=None, dsigmadx=None, dsigmadu=None):
    """ProblemSpec with every unspecified callback identically zero."""

    def zeros(*shape):
        return lambda x, *args: np.zeros(np.shape(x)[:-1] + shape)

    return ProblemSpec(
        d=d,
        m=m,
        d1=d1,
        T=T,
        x0=np.zeros(d) if x0 is None else x0,
        b=b or zeros(d),
        sigma=sigma or zeros(d, m),
        dbdx=dbdx or zeros(d, d),
        dsigmadx=dsigmadx or zeros(d, m, d),
        dbdu=dbdu or zeros(d, d1),
        dsigmadu=dsigmadu or zeros(d, m, d1),
        j=j or zeros(),
        djdx=djdx or zeros(d),
        djdu=djdu or zeros(d1),
        k=k or zeros(),
        dkdx=dkdx or zeros(d),
        name="toy",
    )


def quadratic_toy(a):
    """Zero dynamics with running cost 1/2 (u - a)^2: gradient is u - a."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    return toy_problem(
        j=lambda x, u, t: 0.5 * np.sum((np.asarray(u) - a) ** 2) * np.ones(np.shape(x)[:-1]),
        djdu=lambda x, u, t: np.broadcast_to(np.asarray(u) - a, np.shape(x)[:-1] + (a.size,)),
        d1=a.size,
    )
