"""Python bindings for the hcgrowth construction and verification suites."""

import json

from ._core import (
    IoError,
    alpha_exponent,
    builtin_prefix_density,
    circle_lp_norm,
    kernel,
    log_m2_parseval,
    log_mp,
    log_partial_sum,
    prefix_density,
    rs_sequence,
)
from . import _core

__all__ = [
    "IoError",
    "alpha_exponent",
    "builtin_prefix_density",
    "catalogue_entry",
    "circle_lp_norm",
    "kernel",
    "log_m2_parseval",
    "log_mp",
    "log_partial_sum",
    "prefix_density",
    "rs_sequence",
    "run",
]


def catalogue_entry(k, C=10.0, c=1.0, e=2.0, p=float("inf"), gamma=None):
    """Catalogue entry k as a dict (coefficients as "num/den" strings)."""
    return json.loads(_core._catalogue_entry(k, C, c, e, p, gamma))


def run(**overrides):
    """Run the suites in memory. Keyword names follow the config-file keys."""
    return json.loads(_core._run({k: str(v) for k, v in overrides.items()}))
