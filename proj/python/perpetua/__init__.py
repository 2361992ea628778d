"""Finiteness of perpetual integrals of Levy processes.

Triplets, test functions and configs are plain dicts in the same JSON layout
the command-line tool reads, e.g.::

    bm = {"drift": 1.0, "gaussian": 1.0, "levy_measure": {"family": "none"}}
    f = {"family": "exp_decay", "params": {"rate": 1.0}}
    perpetua.verdict(bm, f)["verdict"]   # 'AS_FINITE'
"""

from __future__ import annotations

import json
import os
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

from . import _perpetua
from ._perpetua import ConfigError, PerpetuaError, check_names, ks_critical_value

__all__ = [
    "ConfigError",
    "PerpetuaError",
    "char_exponent",
    "check_names",
    "classify",
    "ks_critical_value",
    "ks_statistic",
    "local_time_criterion",
    "overshoot_ensemble",
    "parse_config",
    "perpetual_estimate",
    "potential_density",
    "run_experiment",
    "sample_path",
    "tail_integral_test",
    "verdict",
]

JsonLike = Union[Mapping[str, Any], str]


def _text(obj: JsonLike) -> str:
    return obj if isinstance(obj, str) else json.dumps(obj)


def char_exponent(triplet: JsonLike, lambdas: Iterable[float]) -> list[complex]:
    return _perpetua.char_exponent(_text(triplet), list(lambdas))


def classify(triplet: JsonLike) -> dict:
    return json.loads(_perpetua.classify(_text(triplet)))


def local_time_criterion(triplet: JsonLike) -> dict:
    return json.loads(_perpetua.local_time_criterion(_text(triplet)))


def tail_integral_test(f: JsonLike) -> dict:
    return json.loads(_perpetua.tail_integral_test(_text(f)))


def verdict(triplet: JsonLike, f: JsonLike) -> dict:
    return json.loads(_perpetua.verdict(_text(triplet), _text(f)))


def potential_density(triplet: JsonLike, grid: Sequence[float]) -> tuple[list[float], list[float]]:
    """Values u(x) on the grid and their quadrature error estimates."""
    return _perpetua.potential_density(_text(triplet), list(grid))


def sample_path(triplet: JsonLike, horizon: float, dt: float, x0: float = 0.0, seed: int = 0):
    """(times, values, jumps) with jumps as (time, size) pairs."""
    return _perpetua.sample_path(_text(triplet), horizon, dt, x0, seed)


def perpetual_estimate(triplet: JsonLike, f: JsonLike, checkpoints: Sequence[float], dt: float = 0.01,
                       seed: int = 0) -> list[float]:
    return _perpetua.perpetual_estimate(_text(triplet), _text(f), list(checkpoints), dt, seed)


def overshoot_ensemble(triplet: JsonLike, z: float, n: int, seed: int = 0, dt: float = 0.01, threads: int = 1,
                       cap: float = 0.0) -> list[float]:
    """Sorted overshoots over level z of n independent paths."""
    return _perpetua.overshoot_ensemble(_text(triplet), z, n, seed, dt, threads, cap)


def ks_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    return _perpetua.ks_statistic(list(a), list(b))


def parse_config(config: JsonLike) -> dict:
    """Validated config with every default filled in."""
    return json.loads(_perpetua.parse_config(_text(config)))


def run_experiment(config: Union[JsonLike, os.PathLike], out_dir: Union[str, os.PathLike], threads: int = 1, seed: Optional[int] = None,
                   checks: Sequence[str] = ()) -> dict:
    """Runs the checks, writes the report bundle and returns report.json.

    config may be a dict, JSON text or the path of a config file.
    """
    if isinstance(config, os.PathLike) or (isinstance(config, str) and os.path.isfile(config)):
        with open(config) as fh:
            config = fh.read()
    ok, path = _perpetua.run_experiment(_text(config), os.fspath(out_dir), threads, seed, list(checks))
    with open(path) as fh:
        report = json.load(fh)
    assert report["ok"] == ok
    return report
