"""Analysis functionals and the generalized inner products they induce.

The coefficient of a signal f at dilation level j and lattice site k is the
pairing of f with the rescaled functional, normalized so that the operator
sum uses synthesis atoms m^{j/2} phi(M^j x + k).  Every catalog functional has
a direct classical formula (point value, derivative value, local average), so
no limit construction is needed for evaluation.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (DerivativeUnavailable, InvalidParams, UnsupportedInput,
                     UnsupportedMatrix)
from .generators import Generator
from .lattice import DilationMatrix
from .quadrature import gauss_nodes_box
from .functions import TestFunction

KINDS = ("Dirac", "DiracDerivative", "BoxAverage", "MixedTensor", "KernelL1",
         "DiracPlusDerivative")

_BOX_TOL = 1e-10


@dataclass(frozen=True)
class AnalysisFunctional:
    """Tagged catalog variant of the analysis distribution/function."""

    kind: str
    dim: int
    beta: Optional[tuple] = None       # derivative multi-index
    axes: Optional[tuple] = None       # per-axis tags for MixedTensor
    kernel: Optional[Generator] = field(default=None, compare=False)


def make_analyzer(kind: str, dim: int = 1, beta=None, axes=None,
                  kernel: Generator | None = None) -> AnalysisFunctional:
    if kind not in KINDS:
        raise InvalidParams(f"unknown analyzer kind {kind!r}; choose from {KINDS}")
    if kind in ("DiracDerivative", "DiracPlusDerivative"):
        if beta is None:
            raise InvalidParams(f"{kind} needs a multi-index beta")
        beta = tuple(int(b) for b in np.atleast_1d(beta))
        if len(beta) != dim or any(b < 0 for b in beta):
            raise InvalidParams(f"beta {beta} incompatible with dim {dim}")
    if kind == "MixedTensor":
        axes = tuple(axes or ())
        if len(axes) != dim or any(a not in ("Dirac", "BoxAverage") for a in axes):
            raise InvalidParams(f"MixedTensor axes {axes} must be Dirac/BoxAverage per axis")
    if kind == "KernelL1":
        if kernel is None or kernel.spatial_support is None:
            raise InvalidParams("KernelL1 needs a generator kernel with compact spatial support")
    return AnalysisFunctional(kind=kind, dim=dim, beta=beta, axes=axes, kernel=kernel)


def fourier_symbol(a: AnalysisFunctional, xi):
    """The transform of the analysis functional, vectorized over points."""
    from .quadrature import as_points
    pts, scalar = as_points(xi, a.dim)
    if a.kind == "Dirac":
        vals = np.ones(pts.shape[0], dtype=complex)
    elif a.kind == "BoxAverage":
        vals = np.prod(np.sinc(pts), axis=-1).astype(complex)
    elif a.kind == "DiracDerivative":
        vals = _monomial(pts, a.beta)
    elif a.kind == "DiracPlusDerivative":
        vals = 1.0 + _monomial(pts, a.beta)
    elif a.kind == "MixedTensor":
        vals = np.ones(pts.shape[0], dtype=complex)
        for ax, tag in enumerate(a.axes):
            if tag == "BoxAverage":
                vals = vals * np.sinc(pts[:, ax])
    else:  # KernelL1
        vals = np.asarray(a.kernel.fourier(pts), dtype=complex)
    return complex(vals[0]) if scalar else vals


def _monomial(pts, beta):
    vals = np.ones(pts.shape[0], dtype=complex)
    for ax, b in enumerate(beta):
        if b:
            vals = vals * (2j * np.pi * pts[:, ax]) ** b
    return vals


def alpha_bound(a: AnalysisFunctional, M: DilationMatrix) -> float:
    """Growth factor alpha(M) entering the admissibility inequality.

    Identically 1 for the bounded kinds; for derivative kinds it is the
    product of diagonal entries to the multi-index powers (diagonal M) or
    m^{[beta]/d} for isotropic M.
    """
    if a.kind in ("Dirac", "BoxAverage", "KernelL1", "MixedTensor"):
        return 1.0
    beta = a.beta
    if M.is_diagonal():
        diag = np.abs(np.diag(M.entries))
        return float(np.prod(diag ** np.asarray(beta, dtype=float)))
    if M.isotropic:
        return float(M.det_abs ** (sum(beta) / M.dim))
    raise UnsupportedMatrix(
        "derivative analyzers support only diagonal or isotropic dilations")


def analyze(f: TestFunction, a: AnalysisFunctional, M: DilationMatrix,
            j: int, k) -> complex:
    """Coefficient of f at level j and lattice site k.

    Normalization: the operator is sum_k analyze(f,...,j,k) m^{j/2} phi(M^j x + k).
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.shape[0] != a.dim:
        raise InvalidParams(f"lattice point {k} incompatible with dim {a.dim}")
    Minv_j = M.power(-j)
    scale = M.det_abs ** (-j / 2.0)
    if a.kind == "Dirac":
        return scale * _point_value(f, -(Minv_j @ k))
    if a.kind == "DiracDerivative":
        return scale * _derivative_term(f, a.beta, M, j, k)
    if a.kind == "DiracPlusDerivative":
        return scale * (_point_value(f, -(Minv_j @ k))
                        + _derivative_term(f, a.beta, M, j, k))
    if a.kind == "BoxAverage":
        box = np.array([[-0.5, 0.5]] * a.dim)
        return scale * _box_integral(f, Minv_j, k, box, axes=None)
    if a.kind == "MixedTensor":
        avg = tuple(i for i, tag in enumerate(a.axes) if tag == "BoxAverage")
        if not avg:
            return scale * _point_value(f, -(Minv_j @ k))
        box = np.array([[-0.5, 0.5]] * len(avg))
        return scale * _box_integral(f, Minv_j, k, box, axes=avg)
    # KernelL1: integrate f(M^{-j} (t - k)) against the kernel over its support
    kern = a.kernel
    supp = kern.spatial_support

    def integrand(t):
        vals = f.spatial(np.asarray((t - k) @ Minv_j.T))
        return np.asarray(vals) * np.conj(np.asarray(kern.spatial(t)))

    # piecewise over half-integer knot cells: spline-type kernels are smooth
    # on each cell, so the doubling rule converges there
    total = 0.0 + 0.0j
    for cell in _knot_cells(supp):
        total += _adaptive_box(integrand, cell)
    return scale * total


def _knot_cells(box):
    import itertools
    edges = []
    for lo, hi in box:
        cuts = np.arange(np.ceil(2 * lo), np.floor(2 * hi) + 1) / 2.0
        pts = np.unique(np.concatenate([[lo], cuts, [hi]]))
        edges.append(list(zip(pts[:-1], pts[1:])))
    return [np.array(cell) for cell in itertools.product(*edges)]


def _point_value(f, x):
    return complex(np.asarray(f.spatial(np.atleast_1d(x)[None, :]),
                              dtype=complex)[0])


def _derivative_term(f, beta, M, j, k):
    # <f(M^{-j}.), D^beta delta(. + k)> = (-1)^[beta] D^beta[f(M^{-j}.)](-k);
    # the chain rule contributes prod m_v^{-j beta_v} for diagonal M.
    if not (M.is_diagonal() or M.isotropic):
        raise UnsupportedMatrix(
            "derivative analyzers support only diagonal or isotropic dilations")
    if not M.is_diagonal():
        raise UnsupportedMatrix(
            "non-diagonal isotropic dilations mix partial derivatives; "
            "only diagonal matrices are implemented for derivative kinds")
    try:
        df = f.derivative(beta)
    except UnsupportedInput as exc:
        raise DerivativeUnavailable(str(exc)) from exc
    diag = np.abs(np.diag(M.entries))
    chain = float(np.prod(diag ** (-j * np.asarray(beta, dtype=float))))
    x = -(M.power(-j) @ k)
    val = np.asarray(df(x.reshape(1, -1)))[0]
    return (-1) ** sum(beta) * chain * val


def _box_integral(f, Minv_j, k, box, axes):
    """integral over the unit box (selected axes) of f(M^{-j} (t - k)) dt."""
    dim = k.shape[0]

    def integrand(t):
        full = np.tile(np.zeros(dim), (t.shape[0], 1))
        if axes is None:
            full = t
        else:
            for pos, ax in enumerate(axes):
                full[:, ax] = t[:, pos]
        return np.asarray(f.spatial((full - k) @ Minv_j.T))

    return _adaptive_box(integrand, box)


def _adaptive_box(integrand, box, tol=_BOX_TOL, cap=512):
    order = 8
    prev = None
    while order <= cap:
        nodes, w = gauss_nodes_box(box, order)
        val = np.dot(integrand(nodes), w)
        if prev is not None and abs(val - prev) <= tol:
            return complex(val)
        prev = val
        order *= 2
    from .errors import QuadratureFailure
    raise QuadratureFailure(f"analyzer box integral not converged at order {cap}")
