"""Simulation and statistical verification of multivariate-subordinated
Levy processes on truncated Hilbert spaces.

The compiled extension exposes the core operations; this package adds thin
JSON-decoding wrappers so reports and classifications arrive as dicts.
"""

import json as _json

from ._core import (  # noqa: F401
    BaseProcessSpec,
    CovOperator,
    JumpMeasure,
    SpaceLayout,
    SubordinatedProcessSpec,
    SubordinatorSpec,
    Vector,
    __version__,
    check_cf_json,
    check_moments_json,
    check_scaling_json,
    check_tail_index_json,
    classify_json,
    cov_of_x,
    inner,
    laplace_exponent,
    make_hnig,
    make_hvg,
    make_stable,
    mean_of_x,
    run_checks_json,
    sample,
    sample_path,
    spec_from_config_json,
    subordinated_exponent,
    triplet,
)


def classify(spec):
    """Integrability classification as a dict (labels + governing rules)."""
    return _json.loads(classify_json(spec))


def check_cf(spec, **kwargs):
    return _json.loads(check_cf_json(spec, **kwargs))


def check_moments(spec, **kwargs):
    return _json.loads(check_moments_json(spec, **kwargs))


def check_scaling(spec, alpha, **kwargs):
    return _json.loads(check_scaling_json(spec, alpha, **kwargs))


def check_tail_index(spec, **kwargs):
    return _json.loads(check_tail_index_json(spec, **kwargs))


def run_checks(config, seed=None, threads=1):
    """Run a config's verification battery; `config` is a dict or JSON text."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(run_checks_json(text, seed, threads))


def spec_from_config(config):
    """Build a process spec from a config document (dict or JSON text)."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return spec_from_config_json(text)
