"""Deterministic quadrature and grid helpers used across the package.

All rules are tensor Gauss-Legendre or uniform grids; nothing is randomized,
so repeated runs are bit-identical.
"""

from functools import lru_cache
import itertools

import numpy as np

from .errors import QuadratureFailure


@lru_cache(maxsize=64)
def leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_nodes_box(box, order: int):
    """Tensor Gauss-Legendre nodes/weights on an axis-aligned box.

    box: array-like of shape (d, 2).  Returns (nodes (n, d), weights (n,)).
    """
    box = np.asarray(box, dtype=float)
    x, w = leggauss(order)
    axes, wts = [], []
    for lo, hi in box:
        axes.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
        wts.append(0.5 * (hi - lo) * w)
    nodes = np.array(list(itertools.product(*axes)))
    weights = np.array([np.prod(t) for t in itertools.product(*wts)])
    return nodes, weights


def integrate_box(func, box, tol=1e-10, start_order=16, max_order=1024):
    """Adaptive tensor Gauss-Legendre integral of `func` over a box.

    `func` takes points of shape (n, d) and returns shape (n,).  Orders are
    doubled until two successive values agree within `tol` (absolute);
    QuadratureFailure is raised at the cap instead of degrading silently.
    """
    box = np.asarray(box, dtype=float)
    prev = None
    order = start_order
    while order <= max_order:
        nodes, weights = gauss_nodes_box(box, order)
        val = np.dot(func(nodes), weights)
        if prev is not None and abs(val - prev) <= tol:
            return val
        prev = val
        order *= 2
    raise QuadratureFailure(
        f"integral did not reach tol={tol} at order {max_order}")


def grid_points(box, grid: int):
    """Midpoint grid over a box: (grid^d, d) points plus the cell volume."""
    box = np.asarray(box, dtype=float)
    axes = []
    vol = 1.0
    for lo, hi in box:
        h = (hi - lo) / grid
        axes.append(lo + h * (np.arange(grid) + 0.5))
        vol *= h
    pts = np.array(list(itertools.product(*axes)))
    return pts, vol


def grid_lp_norm(values, cell_volume: float, p) -> float:
    """Riemann-sum L_p norm from sampled |values| on a uniform grid."""
    a = np.abs(np.asarray(values))
    if p == np.inf or p == "inf":
        return float(a.max()) if a.size else 0.0
    p = float(p)
    return float((np.sum(a ** p) * cell_volume) ** (1.0 / p))


def as_points(x, dim: int):
    """Normalize point input to shape (n, d); returns (points, scalar_flag)."""
    a = np.asarray(x, dtype=float)
    if dim == 1:
        if a.ndim == 0:
            return a.reshape(1, 1), True
        if a.ndim == 1:
            return a.reshape(-1, 1), False
        return a, False
    if a.ndim == 1:
        if a.shape[0] != dim:
            raise ValueError(f"point has {a.shape[0]} coords, expected {dim}")
        return a.reshape(1, dim), True
    return a, False
