import pytest

from helpers import d4_instance, ones_instance


@pytest.fixture
def d4():
    return d4_instance()


@pytest.fixture
def ones6():
    return ones_instance(6)
