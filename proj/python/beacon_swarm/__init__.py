"""Deterministic beacon/forager swarm simulator."""

import json

from . import _core
from ._core import (
    CSV_SCHEMA_VERSION,
    LOG_SCHEMA_VERSION,
    EventLog,
    SwarmError,
    __version__,
    compute_metrics,
    hierarchic_entropy,
    load_event_log,
    parse_event_log,
    render_frame,
    scenario_names,
    single_linkage,
    social_entropy,
)

__all__ = [
    "CSV_SCHEMA_VERSION",
    "LOG_SCHEMA_VERSION",
    "EventLog",
    "SwarmError",
    "__version__",
    "compute_metrics",
    "default_extension",
    "default_params",
    "hierarchic_entropy",
    "load_config",
    "load_event_log",
    "lower_bound_delay",
    "parse_event_log",
    "render_frame",
    "run_config",
    "scenario_arena",
    "scenario_names",
    "shortest_path_length",
    "simulate",
    "single_linkage",
    "social_entropy",
]


def default_params():
    """Default simulation parameters as a dict."""
    return json.loads(_core.default_params_json())


def default_extension():
    """Default moving-beacon extension settings (disabled)."""
    return json.loads(_core.default_extension_json())


def scenario_arena(name):
    """Arena of a built-in scenario as a dict."""
    return json.loads(_core.scenario_arena_json(name))


def _merge(defaults, overrides, what):
    unknown = sorted(set(overrides) - set(defaults))
    if unknown:
        raise SwarmError(f"unknown {what} key(s): {', '.join(unknown)}")
    return {**defaults, **overrides}


def _arena(arena):
    return scenario_arena(arena) if isinstance(arena, str) else arena


def simulate(scenario="empty", *, arena=None, extension=None, snapshot_every=1, **params):
    """Run one simulation and return its EventLog.

    Keyword arguments override default parameters by name (n_agents, seed,
    epsilon, ...). ``arena`` replaces the scenario arena when given.
    """
    p = _merge(default_params(), params, "parameter")
    e = _merge(default_extension(), extension or {}, "extension")
    a = _arena(arena if arena is not None else scenario)
    return _core.run(json.dumps(p), json.dumps(a), json.dumps(e), snapshot_every)


def shortest_path_length(arena, p, q, *, robot_radius=0.02, cell=0.01):
    """Collision-free path length between two points for a disc robot."""
    return _core.shortest_path_length(json.dumps(_arena(arena)), robot_radius, tuple(p), tuple(q), cell)


def lower_bound_delay(arena="empty", **params):
    """Best achievable nest-to-target round-trip time in seconds."""
    p = _merge(default_params(), params, "parameter")
    return _core.lower_bound_delay(json.dumps(_arena(arena)), json.dumps(p))


def load_config(path):
    """Load and validate a run config file into plain dicts."""
    raw = _core.load_run_config(str(path))
    return {
        "scenario": raw["scenario"],
        "params": json.loads(raw["params_json"]),
        "arena": json.loads(raw["arena_json"]),
        "extension": json.loads(raw["extension_json"]),
        "snapshot_every": raw["snapshot_every"],
        "out_dir": raw["out_dir"],
    }


def run_config(path):
    """Run the simulation described by a config file."""
    c = load_config(path)
    return simulate(arena=c["arena"], extension=c["extension"], snapshot_every=c["snapshot_every"], **c["params"])
