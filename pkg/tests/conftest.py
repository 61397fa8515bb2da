"""Shared fixtures.  The big objects (the 3^10 egg, spread, unital) are
expensive enough to build once per session and share; everything here is
deterministic, so sharing cannot leak state between tests."""

import pytest

from eggplane.catalog import (
    d9_semifield,
    f9_semifield,
    kk9_egg,
    m1_egg,
    pw_egg,
    pw_semifield,
)
from eggplane.egg import build_egg
from eggplane.plane import BruckBosePlane
from eggplane.spread import spread_from_tau
from eggplane.unital import unital_model


@pytest.fixture(scope="session")
def pw_spec():
    return pw_egg()


@pytest.fixture(scope="session")
def pw_sf():
    return pw_semifield()


@pytest.fixture(scope="session")
def pw_built(pw_spec):
    return build_egg(pw_spec)


@pytest.fixture(scope="session")
def pw_spread(pw_sf):
    return spread_from_tau(pw_sf)


@pytest.fixture(scope="session")
def pw_unital(pw_spec, pw_sf):
    return unital_model(pw_spec, pw_sf)


@pytest.fixture(scope="session")
def m1_spec():
    return m1_egg()


@pytest.fixture(scope="session")
def m1_sf():
    return f9_semifield()


@pytest.fixture(scope="session")
def m1_unital(m1_spec, m1_sf):
    return unital_model(m1_spec, m1_sf)


@pytest.fixture(scope="session")
def d9_sf():
    return d9_semifield()


@pytest.fixture(scope="session")
def kk9_spec():
    return kk9_egg()


@pytest.fixture(scope="session")
def f9_bb(m1_sf):
    return BruckBosePlane(spread_from_tau(m1_sf))
