"""Mixed Dirichlet-Neumann eigenvalues of the 1D fractional Laplacian."""

import json as _json

from ._fraclab import (
    FraclabError,
    dini_power,
    e_of_r,
    identity_suite,
    indicator_identity,
    normalization_constant,
    richardson_baseline,
    solve,
)
from ._fraclab import run_config as _run_config


def run_config(config, jobs=1):
    """Run a sweep; `config` is a dict or a JSON string in the CLI config format."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _run_config(config, jobs)


__all__ = [
    "FraclabError",
    "dini_power",
    "e_of_r",
    "identity_suite",
    "indicator_identity",
    "normalization_constant",
    "richardson_baseline",
    "run_config",
    "solve",
]
