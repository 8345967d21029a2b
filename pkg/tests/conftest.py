import pytest

from ordpivot import build_clusters, cumulate, decompose

# 8-unit demonstration population used across the suite.
PI8 = (0.2, 0.5, 0.3, 0.4, 0.9, 0.8, 0.5, 0.4)


@pytest.fixture(scope="session")
def pv8():
    return cumulate(PI8)


@pytest.fixture(scope="session")
def dec8(pv8):
    return decompose(pv8)


@pytest.fixture(scope="session")
def cp8(pv8, dec8):
    return build_clusters(dec8, pv8)
