"""Shared helpers for the test suite."""

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from symlab.directions import make_rng


def random_convex_polygon(rng, n_points=12, radius_lo=0.4, radius_hi=1.6):
    """A random strictly convex CCW polygon around the origin."""
    ang = np.sort(rng.uniform(0.0, 2.0 * np.pi, n_points))
    rad = rng.uniform(radius_lo, radius_hi, n_points)
    pts = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
    hull = ConvexHull(pts)
    return pts[hull.vertices]


def random_direction(rng, dim=2):
    g = rng.standard_normal(dim)
    return g / np.linalg.norm(g)


@pytest.fixture
def rng():
    return make_rng(20260824)


# one verdict line per acceptance criterion, echoed after the test
# summary so they are visible without -s
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
