"""Multistep resonant-transition simulator for hidden subgroup problems."""

import json as _json

from . import _core
from ._core import (
    HsqError,
    division_set_rank,
    division_set_value,
    marked_counts,
    rabi_probability,
    spectrum,
)

__all__ = [
    "HsqError",
    "division_set_rank",
    "division_set_value",
    "marked_counts",
    "path_report",
    "rabi_probability",
    "run",
    "spectrum",
    "sweep",
]


def path_report(instance, division=""):
    """Per-Hamiltonian eigendata of an instance: list of dicts keyed i, N_i, c_mix, E0, E1, gap, d0."""
    return _json.loads(_core.path_report(_json.dumps(instance), division))


def run(instance, **options):
    """Run an experiment. `instance` holds family, seed and family parameters;
    options mirror the CLI flags (trials, backend, coupling, max_repeats, purify,
    shots, gip_budget, division, out_dir, time_factor)."""
    return _json.loads(_core.run(_json.dumps({"instance": instance, **options})))


def sweep(family, lo, hi, couplings=("auto",), seed=0, **options):
    """CSV text with one row per (cell, step)."""
    base = {"instance": {"family": family, "seed": seed}, **options}
    return _core.sweep(_json.dumps(base), family, lo, hi, list(couplings))
