import pytest

from endokat.groups import canonicalize_group


@pytest.fixture
def z4():
    return canonicalize_group([4])


@pytest.fixture
def z2z4():
    return canonicalize_group([2, 4])


@pytest.fixture
def z2z2():
    return canonicalize_group([2, 2])
