#!/usr/bin/env python3
"""Level sweep for one experiment config; prints the report and the fitted
convergence rate.

Usage: python3 scripts/run_rates.py [config.json]
Defaults to the sinc/cell-average sweep against the Gaussian.
"""

import pathlib
import sys

from quasiproj.harness import ExperimentConfig, emit, run_experiment

DEFAULT = pathlib.Path(__file__).parent / "configs" / "rates_sinc_box.json"


def main():
    path = sys.argv[1] if len(sys.argv) > 1 else str(DEFAULT)
    cfg = ExperimentConfig.from_file(path)
    report = run_experiment(cfg)
    sys.stdout.write(emit(report, cfg.output_format))
    if report.rate is not None:
        print(f"# fitted rate 2^({report.rate:+.3f} j), "
              f"max log2 residual {report.rate_residual:.3f}", file=sys.stderr)


if __name__ == "__main__":
    main()
