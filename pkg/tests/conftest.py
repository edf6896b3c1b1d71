import pytest
from hypothesis import settings

from selfsim import BUNDLED_PORTRAITS, BUNDLED_SPECS, data_path, load_portrait, load_spec

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture(scope="session")
def specs():
    return {name: load_spec(data_path(f"{name}.grp")) for name in BUNDLED_SPECS}


@pytest.fixture(scope="session")
def portraits():
    return {name: load_portrait(data_path(f"{name}.json")) for name in BUNDLED_PORTRAITS}
