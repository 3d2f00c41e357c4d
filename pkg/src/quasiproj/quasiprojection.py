"""Evaluation of the quasi-projection operator and L_p error norms.

Two evaluation routes are provided: truncated spatial sums (cubic index sets,
with a crude tail bound) and an exact spectral route for band-limited data,
where the transform of the operator output is assembled from finitely many
lattice aliases of the signal's profile.
"""

from dataclasses import dataclass
import itertools

import numpy as np

from .analyzers import AnalysisFunctional, analyze, fourier_symbol
from .errors import InvalidParams, UnsupportedInput
from .functions import TestFunction
from .generators import Generator
from .lattice import DilationMatrix
from .quadrature import as_points, grid_lp_norm, grid_points


@dataclass(frozen=True)
class OperatorSpec:
    generator: Generator
    analyzer: AnalysisFunctional
    dilation: DilationMatrix
    level: int = 0

    def __post_init__(self):
        dims = {self.generator.dim, self.analyzer.dim, self.dilation.dim}
        if len(dims) != 1:
            raise InvalidParams(f"dimension mismatch: {dims}")
        if self.level < 0:
            raise InvalidParams(f"level must be >= 0, got {self.level}")

    @property
    def dim(self):
        return self.dilation.dim


def lattice_box(dim: int, radius: int):
    """All integer points with sup-norm at most radius."""
    rng = range(-radius, radius + 1)
    return [np.array(k) for k in itertools.product(rng, repeat=dim)]


def coefficients(spec: OperatorSpec, f: TestFunction, radius: int):
    """All coefficients on the cubic index set ||k||_inf <= radius.

    Returns a dict mapping integer tuples to complex values.
    """
    if radius < 0:
        raise InvalidParams(f"radius must be >= 0, got {radius}")
    out = {}
    for k in lattice_box(spec.dim, radius):
        out[tuple(int(v) for v in k)] = analyze(
            f, spec.analyzer, spec.dilation, spec.level, k)
    return out


def evaluate_spatial(spec: OperatorSpec, f: TestFunction, x, radius: int):
    """Cubic partial sum of the operator series at a point.

    Returns (value, tail_bound); the bound multiplies the largest computed
    coefficient magnitude by the declared decay of the generator over the
    dropped shell, and is crude by construction.
    """
    pt, _ = as_points(x, spec.dim)
    pt = pt[0]
    M_j = spec.dilation.power(spec.level)
    amp = spec.dilation.det_abs ** (spec.level / 2.0)
    y = M_j @ pt
    coeffs = coefficients(spec, f, radius)
    total = 0.0 + 0.0j
    supp = spec.generator.spatial_support
    for k_tup, c in coeffs.items():
        if c == 0:
            continue
        arg = y + np.array(k_tup, dtype=float)
        if supp is not None and np.any((arg < supp[:, 0]) | (arg > supp[:, 1])):
            continue
        total += c * amp * np.asarray(spec.generator.spatial(arg[None, :]))[0]
    tail = _tail_bound(spec, coeffs, y, radius)
    return complex(total), tail


def _tail_bound(spec, coeffs, y, radius):
    supp = spec.generator.spatial_support
    if supp is not None:
        margin = radius - np.max(np.abs(y)) - np.max(np.abs(supp))
        return 0.0 if margin > 0 else np.inf
    r = spec.generator.decay_rate
    if r is None or r <= 1.0:
        return np.inf
    cmax = max((abs(c) for c in coeffs.values()), default=0.0)
    amp = spec.dilation.det_abs ** (spec.level / 2.0)
    t0 = max(1.0, radius - np.max(np.abs(y)))
    d = spec.dim
    # sum over the dropped shells of prod (1+|y+k|)^-r, bounded by an integral
    shell = 2 * d * (2 * t0 + 1) ** (d - 1) * t0 ** (1 - r) / (r - 1)
    return cmax * amp * shell


# -- spectral route ---------------------------------------------------------

def spectrum_support(spec: OperatorSpec):
    """Bounding box of the transform of Q_j f: M*^j applied to supp phi^."""
    if spec.generator.fourier_support is None:
        raise UnsupportedInput("generator is not band-limited")
    return _map_box(spec.dilation.adjoint_power(spec.level),
                    spec.generator.fourier_support)


def _map_box(A, box):
    corners = np.array(list(itertools.product(*box)))
    mapped = corners @ A.T
    return np.stack([mapped.min(axis=0), mapped.max(axis=0)], axis=1)


def alias_shifts(spec: OperatorSpec, f: TestFunction):
    """Integer lattice shifts that can contribute to the alias sum.

    k contributes iff xi + M*^j k hits supp f^ for some xi in the output
    spectrum box; the enumeration is computed from the support boxes.
    """
    if f.fourier_support is None:
        raise UnsupportedInput(f"{f.name} lacks a compactly supported profile")
    S = spectrum_support(spec)
    diff = np.stack([f.fourier_support[:, 0] - S[:, 1],
                     f.fourier_support[:, 1] - S[:, 0]], axis=1)
    back = _map_box(np.linalg.inv(spec.dilation.adjoint_power(spec.level)), diff)
    lo = np.ceil(back[:, 0] - 1e-12).astype(int)
    hi = np.floor(back[:, 1] + 1e-12).astype(int)
    return [np.array(k) for k in
            itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])]


def evaluate_spectral(spec: OperatorSpec, f: TestFunction, xi):
    """Transform of Q_j f at xi (vectorized over an array of points).

    FT(Q_j f)(xi) = phi^(M*^{-j} xi) * sum_k f^(xi + M*^j k)
                    * conj(symbol(M*^{-j} xi + k)),
    with the k-sum running over the finitely many contributing shifts.
    """
    pts, scalar = as_points(xi, spec.dim)
    vals = _spectrum_pts(spec, f, pts, alias_shifts(spec, f))
    return complex(vals[0]) if scalar else vals


def _spectrum_pts(spec, f, pts, shifts):
    Aj = spec.dilation.adjoint_power(spec.level)
    Aj_inv = np.linalg.inv(Aj)
    base = pts @ Aj_inv.T
    acc = np.zeros(pts.shape[0], dtype=complex)
    for k in shifts:
        fhat = np.asarray(f.fourier(pts + Aj @ k), dtype=complex)
        sym = np.asarray(fourier_symbol(spec.analyzer, base + k), dtype=complex)
        acc += fhat * np.conj(sym)
    phihat = np.asarray(spec.generator.fourier(base), dtype=complex)
    return phihat * acc


def spectral_evaluator(spec: OperatorSpec, f: TestFunction,
                       nodes_per_axis: int | None = None):
    """Spatial evaluator for Q_j f by quadrature of its spectrum.

    The spectrum is sampled once on a midpoint grid over its support box;
    the returned callable maps points (n, d) -> complex values via a
    chunked inverse-Fourier Riemann sum.
    """
    S = spectrum_support(spec)
    width = float(np.max(S[:, 1] - S[:, 0]))
    if nodes_per_axis is None:
        nodes_per_axis = int(min(32768, max(4096, 512 * width)))
        if spec.dim > 1:
            nodes_per_axis = int(min(512, max(128, 16 * width)))
    nodes, vol = grid_points(S, nodes_per_axis)
    weights = _spectrum_pts(spec, f, nodes, alias_shifts(spec, f)) * vol

    def evaluator(x):
        pts, scalar = as_points(x, spec.dim)
        out = np.empty(pts.shape[0], dtype=complex)
        chunk = max(1, int(4e6 / max(1, nodes.shape[0])))
        for i in range(0, pts.shape[0], chunk):
            block = pts[i:i + chunk]
            out[i:i + chunk] = np.exp(2j * np.pi * (block @ nodes.T)) @ weights
        return complex(out[0]) if scalar else out

    evaluator.nodes_per_axis = nodes_per_axis
    evaluator.support = S
    return evaluator


# -- error norms ------------------------------------------------------------

@dataclass(frozen=True)
class GridNorm:
    value: float
    spacing: float
    grid: int


def _eval_on(fn, pts):
    if isinstance(fn, TestFunction):
        return np.asarray(fn.spatial(pts))
    return np.asarray(fn(pts))


def error_lp(f, approx, p, box, grid: int) -> GridNorm:
    """Riemann-sum L_p(box) norm of f - approx on a uniform midpoint grid."""
    if grid < 2:
        raise InvalidParams(f"grid must be >= 2 per axis, got {grid}")
    box = np.asarray(box, dtype=float)
    pts, vol = grid_points(box, grid)
    diff = _eval_on(f, pts).astype(complex) - _eval_on(approx, pts).astype(complex)
    spacing = float(np.max((box[:, 1] - box[:, 0]) / grid))
    return GridNorm(value=grid_lp_norm(diff, vol, p), spacing=spacing, grid=grid)


def evaluate_grid_compact(spec: OperatorSpec, f: TestFunction, pts):
    """Vectorized operator values on a batch of points for generators with
    compact spatial support (only the few overlapping atoms are summed)."""
    supp = spec.generator.spatial_support
    if supp is None:
        raise UnsupportedInput("generator lacks compact spatial support")
    pts, _ = as_points(pts, spec.dim)
    M_j = spec.dilation.power(spec.level)
    amp = spec.dilation.det_abs ** (spec.level / 2.0)
    y = pts @ M_j.T
    half = np.max(np.abs(supp))
    lo = np.floor(-y.max(axis=0) - half).astype(int)
    hi = np.ceil(-y.min(axis=0) + half).astype(int)
    coeff = {}
    for k in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        coeff[k] = analyze(f, spec.analyzer, spec.dilation, spec.level,
                           np.array(k))
    out = np.zeros(pts.shape[0], dtype=complex)
    base = np.floor(-y).astype(int)
    span = int(np.ceil(half)) + 1
    for off in itertools.product(range(-span, span + 1), repeat=spec.dim):
        ks = base + np.array(off)
        args = y + ks
        mask = np.all((args >= supp[:, 0]) & (args <= supp[:, 1]), axis=1)
        if not np.any(mask):
            continue
        vals = np.asarray(spec.generator.spatial(args[mask]), dtype=complex)
        cs = np.array([coeff.get(tuple(map(int, kk)), 0.0) for kk in ks[mask]])
        out[mask] += amp * cs * vals
    return out
