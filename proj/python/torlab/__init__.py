"""Python interface to the torlab numerical laboratory.

Records that the native layer exchanges as JSON text are converted to and
from plain dicts here.
"""

import json as _json

from ._torlab import (  # noqa: F401
    Function,
    Subtorus,
    TorlabError,
    avoid_probability,
    avoid_probability_exact,
    check_lemma1,
    delta_of,
    density_qnorm,
    displacement,
    exact_projection_moment,
    families,
    max_admissible_k,
    mc_projection_moment,
    morrey_bound,
    sample_subset,
    theorem1_k,
    torus_dist,
    wrap,
)
from . import _torlab

__all__ = [
    "Function", "Subtorus", "TorlabError", "avoid_probability", "avoid_probability_exact",
    "build_path", "check_lemma1", "delta_of", "density_qnorm", "displacement",
    "exact_projection_moment", "families", "function", "grid_osc", "max_admissible_k",
    "mc_projection_moment", "morrey_bound", "osc_decision", "refine_osc", "run_battery",
    "run_experiment", "sample_subset", "serialize_config", "theorem1_k", "torus_dist", "wrap",
]


def function(record):
    """Build a zoo function from a dict record (must include ``n``)."""
    return Function.from_json(_json.dumps(record))


def grid_osc(f, sub, m=32, threads=1):
    return _json.loads(_torlab.grid_osc(f, sub, m, threads))


def refine_osc(f, sub, target_gap=1e-3, budget=1_000_000):
    return _json.loads(_torlab.refine_osc(f, sub, target_gap, budget))


def osc_decision(f, sub, eps):
    return _torlab.osc_decision(f, sub, eps)


def build_path(x, y, mode="equal"):
    return _json.loads(_torlab.build_path(list(x), list(y), mode))


def run_experiment(config):
    return _json.loads(_torlab.run_experiment(_json.dumps(config)))


def run_battery(config=None):
    passed, checks = _torlab.run_battery(_json.dumps(config or {"experiment": "battery"}))
    return passed, [dict(name=n, passed=p, detail=d) for n, p, d in checks]


def serialize_config(config):
    return _torlab.serialize_config(_json.dumps(config))
