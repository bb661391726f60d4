"""Optimal-transport multi-robot planning with contractive MPC tracking."""

import json as _json

from . import _otnav
from ._otnav import Error, GridWorld, Scenario, generate_scenario, load_scenario, lemma1, step_dynamics

__all__ = [
    "Error",
    "GridWorld",
    "Scenario",
    "generate_scenario",
    "lemma1",
    "load_scenario",
    "oracle",
    "parse_scenario",
    "paths",
    "refine_replan",
    "render_paths",
    "simple_replan",
    "simulate",
    "solve",
    "step_dynamics",
]


def parse_scenario(data):
    """Build a scenario from a dict or a JSON string."""
    if not isinstance(data, str):
        data = _json.dumps(data)
    return _otnav.parse_scenario(data)


def solve(scenario, unbalanced=False, backend="flow"):
    return _json.loads(_otnav.solve(scenario, unbalanced, backend))


def paths(scenario):
    return _json.loads(_otnav.paths(scenario))


def simple_replan(scenario):
    return _json.loads(_otnav.simple_replan(scenario))["waves"]


def refine_replan(scenario, factor):
    return _json.loads(_otnav.refine_replan(scenario, factor))


def oracle(scenario):
    return _json.loads(_otnav.oracle(scenario))


def simulate(scenario, events=None):
    if events is not None and not isinstance(events, str):
        events = _json.dumps(events)
    return _json.loads(_otnav.simulate(scenario, events or ""))


def render_paths(scenario):
    return _otnav.render_paths(scenario)
