"""Shared fixtures: root endpoints and the two reference constructions."""

from fractions import Fraction

import pytest

import rieszspectra as rs
from rieszspectra.precision import hp_sqrt


@pytest.fixture(scope="session")
def sq():
    return {p: rs.Endpoint(0, hp_sqrt(p)) for p in (2, 3, 5, 7)}


@pytest.fixture(scope="session")
def plan_l1(sq):
    """Single interval [sqrt2-1, sqrt3-1); the smallest admissible prime is 5."""
    a = sq[2] - 1
    b = sq[3] - 1
    return rs.construct_hierarchy([a], [b], 100)


@pytest.fixture(scope="session")
def plan_l2(sq):
    """Two intervals with endpoints q + c*sqrt(p), admissible at N=7."""
    a1 = rs.Endpoint(Fraction(1, 7)) + sq[2] * Fraction(101, 5000)
    b1 = rs.Endpoint(Fraction(2, 7)) + sq[3] * Fraction(33, 500)
    a2 = rs.Endpoint(Fraction(4, 7)) + sq[5] * Fraction(13, 625)
    b2 = rs.Endpoint(Fraction(5, 7)) + sq[7] * Fraction(91, 2500)
    return rs.construct_hierarchy([a1, a2], [b1, b2], 100)
