"""Structural condition checkers for generator/analyzer pairs.

All checks are numerical: vanishing orders are detected through central
finite differences of the relevant Fourier profiles near the origin, with a
two-level Richardson sweep and a fixed zero threshold, so the reported
orders are certificates of observed behavior rather than symbolic proofs.
"""

from dataclasses import dataclass

import numpy as np

from .analyzers import AnalysisFunctional, fourier_symbol
from .errors import InvalidParams, NonSummableDecay
from .generators import Generator
from .quadrature import grid_points

ZERO_TOL = 1e-7
MAX_ORDER = 8
DIFF_STEPS = (1e-2, 5e-3, 2.5e-3)


def _central_difference(fn, order, h, dim, axis):
    """Order-th symmetric difference of fn along one axis at the origin."""
    from math import comb
    pts = np.zeros((order + 1, dim))
    w = np.empty(order + 1)
    for k in range(order + 1):
        pts[k, axis] = (order / 2.0 - k) * h
        w[k] = (-1) ** k * comb(order, k)
    return complex(np.dot(w, np.asarray(fn(pts), dtype=complex)))


def _richardson_scan(fn, dim, axis):
    """Smallest derivative order at the origin with a nonzero (extrapolated)
    symmetric difference quotient, up to MAX_ORDER."""
    for order in range(1, MAX_ORDER + 1):
        vals, raws = [], []
        for h in DIFF_STEPS:
            d = _central_difference(fn, order, h, dim, axis)
            raws.append(abs(d))
            vals.append(abs(d) / h ** order)
        # two Richardson levels: cancels the next two even-order error terms
        r1a = (4 * vals[1] - vals[0]) / 3.0
        r1b = (4 * vals[2] - vals[1]) / 3.0
        r2 = (16 * r1b - r1a) / 15.0
        # the raw-difference floor keeps 1e-16 cancellation noise from being
        # amplified into a fake derivative by the 1/h^order factor
        if abs(r2) > ZERO_TOL and max(raws) > 1e-13:
            return order
    return MAX_ORDER + 1


def strang_fix_order(g: Generator) -> int:
    """Largest n with phi^(0) = 1 and all derivatives of phi^ up to order
    n-1 vanishing at the nonzero integer points (per axis, symmetric scan).

    Returns 0 when the normalization phi^(0) = 1 fails or some nonzero
    integer has phi^ itself nonzero.
    """
    origin = np.asarray(g.fourier(np.zeros((1, g.dim))))[0]
    if abs(origin - 1.0) > ZERO_TOL:
        return 0
    best = MAX_ORDER + 1
    for axis in range(g.dim):
        for ell in (-1, 1):
            center = np.zeros(g.dim)
            center[axis] = ell
            if abs(np.asarray(g.fourier(center[None, :]))[0]) > ZERO_TOL:
                return 0

            def shifted(pts, _c=center):
                return g.fourier(pts + _c)

            best = min(best, _richardson_scan(shifted, g.dim, axis))
    return int(best)


def weak_compat_order(g: Generator, a: AnalysisFunctional) -> int:
    """Vanishing order of 1 - phi^ conj(symbol) at the origin (0 if the
    normalization itself fails there)."""
    if g.dim != a.dim:
        raise InvalidParams(f"dimension mismatch: {g.dim} vs {a.dim}")

    def defect(pts):
        return 1.0 - np.asarray(g.fourier(pts), dtype=complex) * \
            np.conj(np.asarray(fourier_symbol(a, pts), dtype=complex))

    if abs(defect(np.zeros((1, g.dim)))[0]) > ZERO_TOL:
        return 0
    return int(min(_richardson_scan(defect, g.dim, axis)
                   for axis in range(g.dim)))


def strict_compat_radius(g: Generator, a: AnalysisFunctional,
                         tol: float = 1e-9, grid: int = 64) -> float:
    """Largest dyadic delta in {1, 1/2, ..., 2^-8} with
    conj(phi^) symbol = 1 throughout delta times the torus box (grid check
    on interior midpoints).  Returns 0.0 when even the smallest box fails.
    """
    if g.dim != a.dim:
        raise InvalidParams(f"dimension mismatch: {g.dim} vs {a.dim}")
    for i in range(0, 9):
        delta = 2.0 ** (-i)
        box = np.array([[-0.5 * delta, 0.5 * delta]] * g.dim)
        pts, _ = grid_points(box, grid)  # midpoints: strictly inside
        vals = np.conj(np.asarray(g.fourier(pts), dtype=complex)) * \
            np.asarray(fourier_symbol(a, pts), dtype=complex)
        if np.max(np.abs(vals - 1.0)) <= tol:
            return delta
    return 0.0


def mikhlin_constant(g: Generator, a: AnalysisFunctional,
                     order: int | None = None, grid: int = 48) -> float:
    """Diagnostic multiplier bound for the defect 1 - phi^ conj(symbol):
    max over dyadic annuli 2^-6 <= |xi| <= 2^6 of |xi|^[gamma] |D^gamma g|
    for derivative orders up to ceil(d/2)+1, via central differences.

    A sampled maximum, so a lower estimate of the true constant.
    """
    d = g.dim
    if order is None:
        order = d // 2 + 1

    def defect(pts):
        return 1.0 - np.asarray(g.fourier(pts), dtype=complex) * \
            np.conj(np.asarray(fourier_symbol(a, pts), dtype=complex))

    best = 0.0
    for e in range(-6, 7):
        r = 2.0 ** e
        box = np.array([[-2 * r, 2 * r]] * d)
        pts, _ = grid_points(box, grid)
        rad = np.sqrt(np.sum(pts ** 2, axis=-1))
        mask = (rad >= r) & (rad <= 2 * r)
        if not np.any(mask):
            continue
        sel = pts[mask]
        best = max(best, float(np.max(np.abs(defect(sel)))))
        h = 1e-3 * r
        for gamma in range(1, order + 1):
            for axis in range(d):
                from math import comb
                acc = np.zeros(sel.shape[0], dtype=complex)
                for k in range(gamma + 1):
                    shift = np.zeros(d)
                    shift[axis] = (gamma / 2.0 - k) * h
                    acc += (-1) ** k * comb(gamma, k) * defect(sel + shift)
                deriv = np.abs(acc) / h ** gamma
                best = max(best, float(np.max(rad[mask] ** gamma * deriv)))
    return best


def lcal_p_norm(g: Generator, p: float, radius: int = 12,
                grid: int = 96) -> float:
    """Mixed-norm size of phi: L_p norm over the unit box of the lattice
    periodization of |phi| (finite for declared decay rate > 1).

    Band-limited entries without compact spatial support must declare a
    decay rate; rates at or below 1 make the periodization diverge.
    """
    if g.spatial_support is None:
        if g.decay_rate is None or g.decay_rate <= 1.0:
            raise NonSummableDecay(
                f"{g.kind} decays too slowly for a summable periodization")
    box = np.array([[-0.5, 0.5]] * g.dim)
    pts, vol = grid_points(box, grid)
    acc = np.zeros(pts.shape[0])
    half = radius
    if g.spatial_support is not None:
        half = int(np.ceil(np.max(np.abs(g.spatial_support)))) + 1
    import itertools
    for k in itertools.product(range(-half, half + 1), repeat=g.dim):
        acc += np.abs(np.asarray(g.spatial(pts + np.array(k, dtype=float))))
    if p == np.inf:
        return float(np.max(acc))
    return float((np.sum(acc ** p) * vol) ** (1.0 / p))


@dataclass(frozen=True)
class ConditionReport:
    strang_fix: int
    weak_compat: int
    strict_delta: float
    mikhlin: float
    caveats: tuple

    def to_dict(self):
        return {"strang_fix": self.strang_fix,
                "weak_compat": self.weak_compat,
                "strict_delta": self.strict_delta,
                "mikhlin": self.mikhlin,
                "caveats": list(self.caveats)}


def condition_report(g: Generator, a: AnalysisFunctional) -> ConditionReport:
    """All finite-difference certificates for one generator/analyzer pair."""
    caveats = ["orders are finite-difference certificates at threshold "
               f"{ZERO_TOL:g}, not symbolic proofs"]
    if not g.band_limited:
        caveats.append("generator is not band-limited; spectral checks use "
                       "its closed-form profile")
    return ConditionReport(strang_fix=strang_fix_order(g),
                           weak_compat=weak_compat_order(g, a),
                           strict_delta=strict_compat_radius(g, a),
                           mikhlin=mikhlin_constant(g, a),
                           caveats=tuple(caveats))
