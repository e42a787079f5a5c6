import pytest

from heckepairs import build_pair

# Pair construction runs a seeded sanity sample, so build each catalog pair
# once per session and share it; all caches are append-only.

_PAIR_NAMES = (
    "dihedral", "finite_index", "gl2q", "bost_connes", "sl3", "semidirect",
)


@pytest.fixture(scope="session")
def pairs():
    return {name: build_pair(name) for name in _PAIR_NAMES}


@pytest.fixture(scope="session")
def dihedral(pairs):
    return pairs["dihedral"]


@pytest.fixture(scope="session")
def finite_index(pairs):
    return pairs["finite_index"]


@pytest.fixture(scope="session")
def gl2q(pairs):
    return pairs["gl2q"]


@pytest.fixture(scope="session")
def bost_connes(pairs):
    return pairs["bost_connes"]


@pytest.fixture(scope="session")
def sl3(pairs):
    return pairs["sl3"]


@pytest.fixture(scope="session")
def semidirect(pairs):
    return pairs["semidirect"]
