#!/usr/bin/env python3
"""Band-limited recovery demo: checks the compatibility hypotheses, then
reports the spectral sup error and how the truncated spatial sum converges
as the summation radius grows.

Usage: python3 scripts/run_reconstruction.py [config.json]
"""

import json
import pathlib
import sys

import numpy as np

from quasiproj.errors import HypothesisViolated
from quasiproj.harness import (ExperimentConfig, build_function,
                               build_operator, reconstruction_check)

DEFAULT = pathlib.Path(__file__).parent / "configs" / "reconstruct_sinc.json"


def main():
    path = sys.argv[1] if len(sys.argv) > 1 else str(DEFAULT)
    cfg = ExperimentConfig.from_file(path)
    spec = build_operator(cfg, cfg.levels[0])
    f = build_function(cfg)
    try:
        result = reconstruction_check(spec, f, np.asarray(cfg.box, dtype=float),
                                      cfg.grid, truncation_radii=(4, 8, 16, 32, 64))
    except HypothesisViolated as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(result, sort_keys=True, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
