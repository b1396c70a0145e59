"""Provide some fixtures for tests.
"""

import os
import tempfile
import shutil

import pytest

from stepup_ramsey.core import base_coloring, formats
from stepup_ramsey.core.delta_core import realize_raw
from stepup_ramsey.core.finders import RuleSetFinder
from stepup_ramsey.core.models import Color, RuleMatch
from stepup_ramsey.core.stepup import RuleSet

PLANTED_N1 = [5, 1, 6, 2, 9, 3, 7, 4, 8]
PLANTED_N2 = [10, 1, 11, 2, 12, 3, 13, 4, 20, 5, 14, 6, 15, 7, 16, 8, 17]


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='Also run tests marked slow.')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


class AlwaysBlueRules(RuleSet):
    """Control rule set under which every 5-tuple is blue."""

    name = 'AlwaysBlue'
    base_arity = 2
    description = 'No rule ever fires'

    def classify(self, deltas):
        return RuleMatch.NO_RULE

    def red_condition(self, deltas):
        return None


@pytest.fixture(name="temp_dir")
def make_temp_dir():
    """Create a temporary directory for tests."""
    my_temp_dir = tempfile.mkdtemp()
    yield my_temp_dir
    shutil.rmtree(my_temp_dir)


@pytest.fixture(name="always_blue")
def make_always_blue():
    """Register the always-blue control rule set for one test."""
    rules = AlwaysBlueRules()
    RuleSetFinder.add_lookup_functor(
        'always_blue', lambda name: rules if name == rules.name else None)
    yield rules
    RuleSetFinder.del_lookup_functor('always_blue')


@pytest.fixture(name="accepted_phi")
def make_accepted_phi():
    """A pair coloring on 4 points accepted for n = 4."""
    phi, _ = base_coloring.generate_phi(4, 4, seed=11)
    return phi


@pytest.fixture(name="phi_file")
def make_phi_file(temp_dir, accepted_phi):
    path = os.path.join(temp_dir, 'phi.bin')
    formats.write_phi(path, accepted_phi)
    return path


@pytest.fixture(name="wide_phi_file")
def make_wide_phi_file(temp_dir):
    """Random pair coloring on 8 points, wide enough for 7-bit vertices."""
    path = os.path.join(temp_dir, 'wide_phi.bin')
    formats.write_phi(path, base_coloring.random_pair_coloring(8, seed=3))
    return path


@pytest.fixture(name="planted_n1")
def make_planted_n1():
    """Delta sequence, vertices and all-red phi with a peak at index 4."""
    phi = base_coloring.PairColoring.constant(10, Color.RED)
    return PLANTED_N1, realize_raw(PLANTED_N1), phi


@pytest.fixture(name="planted_n2")
def make_planted_n2():
    """Delta sequence, vertices and all-red phi with a peak at index 8."""
    phi = base_coloring.PairColoring.constant(21, Color.RED)
    return PLANTED_N2, realize_raw(PLANTED_N2), phi
