"""Experiment orchestration: configs, level sweeps, rate fits, and reports.

Reports are deterministic by construction (sorted JSON keys, repr floats,
and a config hash in the provenance block), so byte-identical reruns are a
testable invariant rather than an aspiration.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import csv
import hashlib
import io
import json
import os

import numpy as np

from . import functions
from .analyzers import make_analyzer
from .conditions import condition_report, strict_compat_radius
from .errors import (ConfigError, HypothesisViolated, InvalidParams,
                     NonPositiveValue)
from .generators import make_generator
from .lattice import make_dilation
from .quadrature import grid_points
from .quasiprojection import (OperatorSpec, error_lp, evaluate_grid_compact,
                              spectral_evaluator)
from .smoothness import ModulusSpec, best_approx, modulus


def thread_count() -> int:
    """Worker cap from QUASIPROJ_THREADS (default 1; invalid values are 1)."""
    raw = os.environ.get("QUASIPROJ_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# -- configuration -----------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    generator_kind: str
    generator_params: dict
    analyzer_kind: str
    analyzer_params: dict
    dilation: tuple
    function_name: str
    function_params: dict
    dim: int
    levels: tuple
    p: float
    box: tuple
    grid: int
    modulus_order: float
    with_modulus: bool
    with_best_approx: bool
    output_format: str
    raw: dict = field(compare=False, default_factory=dict)

    @staticmethod
    def from_dict(data: dict) -> "ExperimentConfig":
        def need(section, key, default=None):
            sec = data.get(section)
            if not isinstance(sec, dict):
                raise ConfigError(f"missing config section {section!r}")
            if default is None and key not in sec:
                raise ConfigError(f"missing config field {section}.{key}")
            return sec.get(key, default)

        dim = int(need("operator", "dim", 1))
        dil = need("operator", "dilation")
        levels = need("experiment", "levels")
        if not (isinstance(levels, list) and levels and
                all(isinstance(j, int) and j >= 0 for j in levels)):
            raise ConfigError("experiment.levels must be a nonempty list of "
                              "nonnegative integers")
        p_raw = need("experiment", "p", 2)
        p = np.inf if p_raw in ("inf", "Inf") else float(p_raw)
        fmt = need("output", "format", "json")
        if fmt not in ("json", "csv"):
            raise ConfigError(f"output.format must be json or csv, got {fmt!r}")
        return ExperimentConfig(
            generator_kind=need("operator", "generator"),
            generator_params=need("operator", "generator_params", {}),
            analyzer_kind=need("operator", "analyzer"),
            analyzer_params=need("operator", "analyzer_params", {}),
            dilation=tuple(tuple(row) for row in np.atleast_2d(dil).tolist()),
            function_name=need("function", "name"),
            function_params=need("function", "params", {}),
            dim=dim,
            levels=tuple(levels),
            p=p,
            box=tuple(tuple(map(float, row))
                      for row in need("experiment", "box", [[-8.0, 8.0]] * dim)),
            grid=int(need("experiment", "grid", 2048 if dim == 1 else 256)),
            modulus_order=float(need("experiment", "modulus_order", 2)),
            with_modulus=bool(need("experiment", "with_modulus", False)),
            with_best_approx=bool(need("experiment", "with_best_approx", False)),
            output_format=fmt,
            raw=data,
        )

    @staticmethod
    def from_file(path: str) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return ExperimentConfig.from_dict(data)

    def digest(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def build_operator(cfg: ExperimentConfig, level: int) -> OperatorSpec:
    g = make_generator(cfg.generator_kind, cfg.generator_params, cfg.dim)
    a = make_analyzer(cfg.analyzer_kind, cfg.dim, **cfg.analyzer_params)
    M = make_dilation(np.array(cfg.dilation, dtype=float))
    return OperatorSpec(generator=g, analyzer=a, dilation=M, level=level)


def build_function(cfg: ExperimentConfig):
    return functions.get(cfg.function_name, cfg.dim, **cfg.function_params)


# -- fits and ratio diagnostics ---------------------------------------------

def rate_fit(levels, values):
    """Least-squares slope of log2(value) against the level, with the worst
    residual; rates are only meaningful for strictly positive values."""
    levels = np.asarray(levels, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(levels) < 2:
        raise InvalidParams("rate fit needs at least two levels")
    if np.any(values <= 0):
        raise NonPositiveValue("rate fit needs strictly positive values")
    logs = np.log2(values)
    A = np.stack([levels, np.ones_like(levels)], axis=1)
    coef, *_ = np.linalg.lstsq(A, logs, rcond=None)
    resid = logs - A @ coef
    return float(coef[0]), float(np.max(np.abs(resid)))


def two_sided_ratio(errors, references):
    """(min, max) of error/reference across levels; bounded spread is the
    empirical signature of matching upper and lower estimates."""
    e = np.asarray(errors, dtype=float)
    r = np.asarray(references, dtype=float)
    if np.any(r <= 0):
        raise NonPositiveValue("reference values must be positive")
    q = e / r
    return float(np.min(q)), float(np.max(q))


# -- operator application ---------------------------------------------------

def apply_operator(spec: OperatorSpec, f):
    """Pick the evaluation route for one operator/signal pair.

    Compact spatial support takes the direct summation route; band-limited
    generators with profile-backed signals take the spectral route.
    """
    if spec.generator.spatial_support is not None:
        return lambda pts: evaluate_grid_compact(spec, f, pts)
    if spec.generator.band_limited and f.fourier_support is not None:
        return spectral_evaluator(spec, f)
    raise InvalidParams(
        "no evaluation route: need compact spatial support or band-limited "
        "generator with a profile-backed signal")


def sampling_form(spec: OperatorSpec, f, pts, radius: int = 64):
    """Interpolation-form partial sum sum_k f(M^{-j} k) phi(M^j x - k).

    Agrees with the coefficient form for the point-evaluation analyzer after
    relabeling k to -k; exposed separately so the identity is checkable.
    """
    if spec.analyzer.kind != "Dirac":
        raise InvalidParams("the sampling form is defined for point evaluation")
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    M_j = spec.dilation.power(spec.level)
    Minv_j = spec.dilation.power(-spec.level)
    y = pts @ M_j.T
    import itertools
    out = np.zeros(pts.shape[0], dtype=complex)
    for k in itertools.product(range(-radius, radius + 1), repeat=spec.dim):
        ka = np.array(k, dtype=float)
        fv = complex(np.asarray(f.spatial((Minv_j @ ka)[None, :]),
                                dtype=complex)[0])
        if fv == 0:
            continue
        out += fv * np.asarray(spec.generator.spatial(y - ka), dtype=complex)
    return out


# -- experiment driver -------------------------------------------------------

@dataclass
class LevelResult:
    level: int
    error: float
    modulus: float | None = None
    best_approx: float | None = None
    ratio: float | None = None


@dataclass
class ExperimentReport:
    config_digest: str
    levels: list
    rows: list
    rate: float | None
    rate_residual: float | None
    provenance: dict

    def to_dict(self):
        rows = []
        for r in self.rows:
            rows.append({"level": r.level, "error": r.error,
                         "modulus": r.modulus, "best_approx": r.best_approx,
                         "ratio": r.ratio})
        return {"config_digest": self.config_digest,
                "levels": list(self.levels),
                "rows": rows,
                "rate": self.rate,
                "rate_residual": self.rate_residual,
                "provenance": self.provenance}


def _level_row(cfg: ExperimentConfig, f, level: int) -> LevelResult:
    spec = build_operator(cfg, level)
    approx = apply_operator(spec, f)
    box = np.asarray(cfg.box, dtype=float)
    err = error_lp(f, approx, cfg.p, box, cfg.grid).value
    row = LevelResult(level=level, error=err)
    A = np.linalg.inv(spec.dilation.power(level))
    if cfg.with_modulus:
        mspec = ModulusSpec(order=cfg.modulus_order, matrix=A, p=cfg.p)
        row.modulus = modulus(f, mspec, box, cfg.grid).value
        if row.modulus > 0:
            row.ratio = err / row.modulus
    if cfg.with_best_approx:
        row.best_approx = best_approx(
            f, spec.dilation.power(level), cfg.p, box, cfg.grid).value
    return row


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    f = build_function(cfg)
    workers = thread_count()
    if workers > 1 and len(cfg.levels) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda j: _level_row(cfg, f, j), cfg.levels))
    else:
        rows = [_level_row(cfg, f, j) for j in cfg.levels]
    rate = residual = None
    errs = [r.error for r in rows]
    if len(rows) >= 2 and all(e > 0 for e in errs):
        rate, residual = rate_fit(list(cfg.levels), errs)
    return ExperimentReport(
        config_digest=cfg.digest(),
        levels=list(cfg.levels),
        rows=rows,
        rate=rate,
        rate_residual=residual,
        provenance={"grid": cfg.grid, "box": [list(b) for b in cfg.box],
                    "p": "inf" if cfg.p == np.inf else cfg.p,
                    "threads": workers})


# -- band-limited reconstruction check --------------------------------------

def reconstruction_check(spec: OperatorSpec, f, box, grid: int,
                         truncation_radii=(8, 16, 32)):
    """Exact-recovery certificate for band-limited signals.

    Hypotheses checked before any evaluation: the generator/analyzer pair
    must satisfy the strict compatibility identity on some dyadic box, and
    the dilated box must contain the signal's spectrum.  Violations raise
    HypothesisViolated.  Returns the spectral sup error on the grid and the
    spatial truncated-sum errors along the radius ladder.
    """
    delta = strict_compat_radius(spec.generator, spec.analyzer)
    if delta == 0.0:
        raise HypothesisViolated(
            "generator/analyzer pair fails the compatibility identity on "
            "every dyadic spectral box")
    if f.fourier_support is None:
        raise HypothesisViolated(f"{f.name} has no declared spectrum box")
    Aj = spec.dilation.adjoint_power(spec.level)
    corners = np.array([[lo, hi] for lo, hi in f.fourier_support])
    import itertools as it
    pts = np.array(list(it.product(*corners)))
    back = pts @ np.linalg.inv(Aj).T
    if np.max(np.abs(back)) >= 0.5 * delta:
        raise HypothesisViolated(
            f"signal spectrum exceeds the level-{spec.level} box scaled by "
            f"delta={delta:g}")
    evaluator = spectral_evaluator(spec, f)
    box = np.asarray(box, dtype=float)
    pts, _ = grid_points(box, grid)
    sup_err = float(np.max(np.abs(np.asarray(f.spatial(pts), dtype=complex)
                                  - evaluator(pts))))
    ladder = []
    from .quasiprojection import evaluate_spatial
    probe = 0.25 * (box[:, 0] + 3 * box[:, 1])  # off-center probe point
    exact = complex(np.asarray(f.spatial(probe[None, :]), dtype=complex)[0])
    for radius in truncation_radii:
        val, _ = evaluate_spatial(spec, f, probe, radius)
        ladder.append({"radius": radius, "error": abs(val - exact)})
    return {"delta": delta, "sup_error": sup_err, "truncation": ladder}


# -- emission ----------------------------------------------------------------

def _csv_text(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "error", "modulus", "best_approx", "ratio"])
    for r in report.rows:
        w.writerow([r.level, repr(r.error),
                    "" if r.modulus is None else repr(r.modulus),
                    "" if r.best_approx is None else repr(r.best_approx),
                    "" if r.ratio is None else repr(r.ratio)])
    return buf.getvalue()


def emit(report: ExperimentReport, fmt: str = "json") -> str:
    """Serialize a report; identical reports give identical bytes."""
    if fmt == "csv":
        return _csv_text(report)
    if fmt == "json":
        return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    raise InvalidParams(f"unknown output format {fmt!r}")


def condition_summary(cfg: ExperimentConfig) -> dict:
    g = make_generator(cfg.generator_kind, cfg.generator_params, cfg.dim)
    a = make_analyzer(cfg.analyzer_kind, cfg.dim, **cfg.analyzer_params)
    return condition_report(g, a).to_dict()
