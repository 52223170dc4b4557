import pytest
from hypothesis import HealthCheck, settings

import conekit as ck

settings.register_profile(
    "ci",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

_cache: dict = {}


def _patch_and_group(size: int):
    if size not in _cache:
        patch = ck.build_patch(size)
        _cache[size] = (patch, ck.ground_stabilizers(patch))
    return _cache[size]


@pytest.fixture(scope="session")
def patch2():
    return _patch_and_group(2)[0]


@pytest.fixture(scope="session")
def group2():
    return _patch_and_group(2)[1]


@pytest.fixture(scope="session")
def patch6():
    return _patch_and_group(6)[0]


@pytest.fixture(scope="session")
def group6():
    return _patch_and_group(6)[1]


@pytest.fixture(scope="session")
def patch8():
    return _patch_and_group(8)[0]


@pytest.fixture(scope="session")
def group8():
    return _patch_and_group(8)[1]


@pytest.fixture(scope="session")
def omega2(patch2):
    from conekit import statevector

    return statevector.ground_state_vector(patch2)
