import pytest

from teamsem.structures import make_structure
from teamsem.teams import Team

U2 = ("a", "b")
U3 = ("a", "b", "c")


def team(domain, rows, universe=U2):
    return Team.from_rows(universe, domain, rows)


@pytest.fixture
def m2():
    """Two elements, P = {a}, R = {(a,b)}."""
    return make_structure(U2, {"P": [("a",)], "R": [("a", "b")]})


@pytest.fixture
def bare2():
    return make_structure(U2, {})
