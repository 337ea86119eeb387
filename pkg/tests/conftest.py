import pytest

from gpmod.linalg import FieldSpec
from gpmod.modules import interval_module
from gpmod.posets import build_poset, chain, grid_poset


@pytest.fixture
def field():
    return FieldSpec(101)


@pytest.fixture
def diamond():
    return build_poset(["a", "b", "c", "d"],
                       [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
                       name="diamond")


@pytest.fixture
def chain3():
    return chain(3)


@pytest.fixture
def grid33():
    return grid_poset([3, 3])


@pytest.fixture
def koszul(grid33, field):
    """Dimension 1 off the origin with identity maps: the ideal generated by
    the two coordinate shifts, truncated to the 3x3 grid."""
    members = [e for e in grid33.elements if e != "(0,0)"]
    return interval_module(grid33, members, field, name="koszul")
