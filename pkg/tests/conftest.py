"""Shared fixtures.

The acceptance tests and the calibration test need oracle triples for
the 30-scenario protocol. Those take a couple of minutes to compute at
desk resolution, so they are produced once per session and cached on
disk. Set HYDROGATE_ORACLE_CACHE to reuse a cache directory across
pytest invocations during development.
"""

import os

import pytest

from hydrogate.cli import measure_scenario_cached
from hydrogate.params import SystemParameters, expand_scenarios, validate


@pytest.fixture(scope="session")
def default_params():
    return validate(SystemParameters())


@pytest.fixture(scope="session")
def scenario_list(default_params):
    return expand_scenarios(default_params)


@pytest.fixture(scope="session")
def oracle_cache(scenario_list, tmp_path_factory):
    """dict scenario name -> oracle PulseShape, desk resolution."""
    cache_dir = os.environ.get("HYDROGATE_ORACLE_CACHE")
    if not cache_dir:
        cache_dir = str(tmp_path_factory.mktemp("oracle_cache"))
    triples = {}
    for sc in scenario_list:
        triples[sc.name] = measure_scenario_cached(sc, cache_dir=cache_dir)
    return triples
