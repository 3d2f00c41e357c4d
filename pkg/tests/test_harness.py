import json

import numpy as np
import pytest

from quasiproj.errors import (ConfigError, HypothesisViolated,
                              InvalidParams, NonPositiveValue)
from quasiproj.functions import band_bump
from quasiproj.harness import (ExperimentConfig, build_function,
                               build_operator, emit, rate_fit,
                               reconstruction_check, run_experiment,
                               sampling_form, thread_count, two_sided_ratio)
from quasiproj.quasiprojection import evaluate_spatial

BASE_CONFIG = {
    "operator": {"generator": "BSplineTensor",
                 "generator_params": {"n": 2},
                 "analyzer": "BoxAverage",
                 "dilation": [[2.0]],
                 "dim": 1},
    "function": {"name": "gaussian"},
    "experiment": {"levels": [1, 2], "p": 2,
                   "box": [[-6.0, 6.0]], "grid": 256},
    "output": {"format": "json"},
}


def _cfg(**overrides):
    data = json.loads(json.dumps(BASE_CONFIG))
    for path, value in overrides.items():
        sec, key = path.split(".")
        data[sec][key] = value
    return ExperimentConfig.from_dict(data)


def test_rate_fit_exact_slope():
    slope, resid = rate_fit([1, 2, 3, 4], [2.0 ** (-2 * j) for j in (1, 2, 3, 4)])
    assert slope == pytest.approx(-2.0, abs=1e-12)
    assert resid == pytest.approx(0.0, abs=1e-12)


def test_rate_fit_perturbed_slope():
    vals = [2.0 ** (-2 * j) * (1 + 0.05 * (-1) ** j) for j in (1, 2, 3, 4)]
    slope, resid = rate_fit([1, 2, 3, 4], vals)
    assert slope == pytest.approx(-2.0, abs=0.05)
    assert resid < 0.1


def test_rate_fit_rejects_nonpositive():
    with pytest.raises(NonPositiveValue):
        rate_fit([1, 2], [1.0, 0.0])
    with pytest.raises(InvalidParams):
        rate_fit([1], [1.0])


def test_two_sided_ratio():
    lo, hi = two_sided_ratio([1.0, 2.0, 3.0], [2.0, 2.0, 2.0])
    assert (lo, hi) == (0.5, 1.5)
    with pytest.raises(NonPositiveValue):
        two_sided_ratio([1.0], [0.0])


def test_config_missing_section():
    with pytest.raises(ConfigError, match="operator"):
        ExperimentConfig.from_dict({"function": {"name": "gaussian"}})


def test_config_missing_field():
    data = json.loads(json.dumps(BASE_CONFIG))
    del data["function"]["name"]
    with pytest.raises(ConfigError, match="function.name"):
        ExperimentConfig.from_dict(data)


def test_config_bad_levels():
    with pytest.raises(ConfigError, match="levels"):
        _cfg(**{"experiment.levels": [-1, 2]})


def test_config_bad_format():
    with pytest.raises(ConfigError, match="format"):
        _cfg(**{"output.format": "xml"})


def test_config_infinity_p():
    cfg = _cfg(**{"experiment.p": "inf"})
    assert cfg.p == np.inf


def test_run_experiment_reports_rate():
    report = run_experiment(_cfg(**{"experiment.levels": [1, 2, 3]}))
    assert len(report.rows) == 3
    assert report.rate is not None and report.rate < -1.5
    assert all(r.error > 0 for r in report.rows)


def test_emit_json_deterministic():
    cfg = _cfg()
    a = emit(run_experiment(cfg), "json")
    b = emit(run_experiment(cfg), "json")
    assert a == b
    parsed = json.loads(a)
    assert parsed["config_digest"] == cfg.digest()


def test_emit_csv_layout():
    text = emit(run_experiment(_cfg(**{"output.format": "csv"})), "csv")
    lines = text.strip().split("\n")
    assert lines[0] == "level,error,modulus,best_approx,ratio"
    assert len(lines) == 3


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("QUASIPROJ_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("QUASIPROJ_THREADS", "junk")
    assert thread_count() == 1
    monkeypatch.delenv("QUASIPROJ_THREADS")
    assert thread_count() == 1


def test_threaded_run_matches_serial(monkeypatch):
    cfg = _cfg()
    serial = json.loads(emit(run_experiment(cfg), "json"))
    monkeypatch.setenv("QUASIPROJ_THREADS", "2")
    threaded = json.loads(emit(run_experiment(cfg), "json"))
    # the worker count is recorded in provenance and differs by design
    serial["provenance"].pop("threads")
    threaded["provenance"].pop("threads")
    assert serial == threaded


def test_sampling_form_matches_definitional_form():
    cfg_dict = json.loads(json.dumps(BASE_CONFIG))
    cfg_dict["operator"].update({"generator": "TensorSincPower",
                                 "generator_params": {"n": 1, "a": 1.0},
                                 "analyzer": "Dirac"})
    cfg = ExperimentConfig.from_dict(cfg_dict)
    spec = build_operator(cfg, 1)
    f = band_bump(0.4, 1)
    pts = np.array([[0.3], [-1.7]])
    sampled = sampling_form(spec, f, pts, radius=20)
    for i, x in enumerate(pts[:, 0]):
        direct, _ = evaluate_spatial(spec, f, x, 20)
        assert sampled[i] == pytest.approx(direct, abs=1e-13)


def test_sampling_form_requires_point_analyzer():
    spec = build_operator(_cfg(), 0)
    with pytest.raises(InvalidParams):
        sampling_form(spec, band_bump(0.4, 1), np.array([[0.0]]))


def test_reconstruction_check_flags_incompatible_pair():
    cfg_dict = json.loads(json.dumps(BASE_CONFIG))
    cfg_dict["operator"].update({"generator": "TensorSincPower",
                                 "generator_params": {"n": 1, "a": 1.0},
                                 "analyzer": "BoxAverage"})
    cfg = ExperimentConfig.from_dict(cfg_dict)
    spec = build_operator(cfg, 0)
    with pytest.raises(HypothesisViolated):
        reconstruction_check(spec, band_bump(0.4, 1),
                             np.array([[-4.0, 4.0]]), 128)


def test_reconstruction_check_flags_wide_spectrum():
    cfg_dict = json.loads(json.dumps(BASE_CONFIG))
    cfg_dict["operator"].update({"generator": "TensorSincPower",
                                 "generator_params": {"n": 1, "a": 1.0},
                                 "analyzer": "Dirac"})
    cfg = ExperimentConfig.from_dict(cfg_dict)
    spec = build_operator(cfg, 0)
    with pytest.raises(HypothesisViolated):
        reconstruction_check(spec, band_bump(0.7, 1),
                             np.array([[-4.0, 4.0]]), 128)


def test_build_function_uses_params():
    cfg = _cfg(**{"function.name": "band_bump",
                  "function.params": {"rho": 0.3}})
    f = build_function(cfg)
    assert f.fourier_support[0, 1] == pytest.approx(0.3)
