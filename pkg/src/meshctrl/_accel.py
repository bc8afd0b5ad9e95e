"""Compiled evaluation loop for the MLS back-end.

It computes field values directly, without materialising Lagrange
matrices.  It must agree with the reference path in ``meshfree`` (tests
check this); anything unusual (empty or non-unisolvent neighbourhoods) is
flagged and handed back to the reference path.
"""

from __future__ import annotations

import numpy as np
from numba import njit


def build_cells(points: np.ndarray, cell: float):
    """Bucket points into a uniform grid of cubes with side ``cell``."""
    lo = points.min(axis=0)
    ncell = np.maximum(1, np.floor((points.max(axis=0) - lo) / cell).astype(np.int64) + 1)
    idx = np.minimum(np.floor((points - lo) / cell).astype(np.int64), ncell - 1)
    strides = np.ones(points.shape[1], dtype=np.int64)
    for a in range(points.shape[1] - 2, -1, -1):
        strides[a] = strides[a + 1] * ncell[a + 1]
    flat = idx @ strides
    order = np.argsort(flat, kind="stable")
    starts = np.searchsorted(flat[order], np.arange(int(np.prod(ncell)) + 1))
    return lo, ncell, strides, order.astype(np.int64), starts.astype(np.int64)


@njit(cache=True)
def mls_values(x, pts, values, radius, exps, lo, cell, ncell, strides, order, starts):
    """MLS value of every column of ``values`` at each query.

    Returns ``(out, status)`` where ``status[q]`` is 0 on success, 1 when the
    query has no node within ``radius`` and 2 when its neighbourhood is not
    unisolvent.
    """
    nq, d = x.shape
    nb = exps.shape[0]
    k = values.shape[1]
    out = np.zeros((nq, k))
    status = np.zeros(nq, dtype=np.int64)
    lo_c = np.empty(d, dtype=np.int64)
    hi_c = np.empty(d, dtype=np.int64)
    cur = np.empty(d, dtype=np.int64)
    basis = np.empty(nb)
    for q in range(nq):
        empty = False
        for a in range(d):
            lo_c[a] = max(0, int(np.floor((x[q, a] - radius - lo[a]) / cell)))
            hi_c[a] = min(ncell[a] - 1, int(np.floor((x[q, a] + radius - lo[a]) / cell)))
            if lo_c[a] > hi_c[a]:
                empty = True
        if empty:
            status[q] = 1
            continue
        gram = np.zeros((nb, nb))
        rhs = np.zeros((nb, k))
        count = 0
        for a in range(d):
            cur[a] = lo_c[a]
        while True:
            flat = 0
            for a in range(d):
                flat += cur[a] * strides[a]
            for s in range(starts[flat], starts[flat + 1]):
                i = order[s]
                r2 = 0.0
                for a in range(d):
                    diff = pts[i, a] - x[q, a]
                    r2 += diff * diff
                t = np.sqrt(r2) / radius
                if t >= 1.0:
                    continue
                count += 1
                w = (1.0 - t) ** 4 * (4.0 * t + 1.0)
                for b in range(nb):
                    val = 1.0
                    for a in range(d):
                        e = exps[b, a]
                        if e:
                            val *= ((pts[i, a] - x[q, a]) / radius) ** e
                    basis[b] = val
                for b in range(nb):
                    wb = w * basis[b]
                    for c in range(b, nb):
                        gram[b, c] += wb * basis[c]
                    for c in range(k):
                        rhs[b, c] += wb * values[i, c]
            # odometer over neighbour cells
            a = d - 1
            while a >= 0:
                cur[a] += 1
                if cur[a] <= hi_c[a]:
                    break
                cur[a] = lo_c[a]
                a -= 1
            if a < 0:
                break
        if count == 0:
            status[q] = 1
            continue
        if count < nb:
            status[q] = 2
            continue
        for b in range(nb):
            for c in range(b):
                gram[b, c] = gram[c, b]
        ev = np.linalg.eigvalsh(gram)
        if ev[0] <= 1e-12 * ev[nb - 1]:
            status[q] = 2
            continue
        coef = np.linalg.solve(gram, rhs)
        for c in range(k):
            out[q, c] = coef[0, c]
    return out, status
