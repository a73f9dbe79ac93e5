import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def geometry():
    from gasketcert.verifier import derive_geometry

    return derive_geometry()


@pytest.fixture(scope="session")
def E():
    from gasketcert.model import build_E

    return build_E(5)
