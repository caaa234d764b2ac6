"""Pytest configuration and shared fixtures."""

import os

import numpy as np
import pytest

from gridflow.core.costs import LinearCost
from gridflow.core.grid import Arc, build_grid, grid_arcs


def _scale() -> int:
    try:
        return max(1, int(os.getenv("GRIDFLOW_TEST_SCALE", "1")))
    except ValueError:
        return 1


@pytest.fixture
def scale():
    """Multiplier for the random property suites (GRIDFLOW_TEST_SCALE)."""
    return _scale()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def i1():
    """2x2 grid, source v1,1 with 5 units, sinks v2,1 (2) and v2,2 (3), free arcs."""
    return build_grid(2, 2, [[5, 0], [-2, -3]])


@pytest.fixture
def i1_linear():
    """The same grid with unit linear cost on every arc."""
    return build_grid(2, 2, [[5, 0], [-2, -3]], costs={arc: LinearCost(1) for arc in grid_arcs(2, 2)})


@pytest.fixture
def i1_flow_top():
    """Feasible extreme point of I1 sending 3 units along row one."""
    return {
        Arc((1, 1), (2, 1)): 2,
        Arc((2, 1), (2, 2)): 0,
        Arc((1, 1), (1, 2)): 3,
        Arc((1, 2), (2, 2)): 3,
    }


@pytest.fixture
def i1_flow_down():
    """Feasible extreme point of I1 sending everything down column one."""
    return {
        Arc((1, 1), (2, 1)): 5,
        Arc((2, 1), (2, 2)): 3,
        Arc((1, 1), (1, 2)): 0,
        Arc((1, 2), (2, 2)): 0,
    }
