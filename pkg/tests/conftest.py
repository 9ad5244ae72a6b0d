"""Shared fixtures: catalog (lattice, φ) pairs as norm contexts."""

import pytest

from latticelp.cases import catalog_case, uniform_boolean


@pytest.fixture
def example1():
    return catalog_case("example1")


@pytest.fixture
def m3():
    return catalog_case("m3")


@pytest.fixture
def n5():
    return catalog_case("n5")


@pytest.fixture
def mo2():
    return catalog_case("mo2")


@pytest.fixture
def boolean3():
    return uniform_boolean(3)
