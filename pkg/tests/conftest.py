import pytest

from tracealg.config import useSettings


@pytest.fixture(autouse=True)
def default_settings():
    # tests that install settings must not leak them
    useSettings(None)
    yield
    useSettings(None)
