import pytest

from amsducalc import BackoffModel, default_profile


@pytest.fixture
def profile():
    return default_profile()


@pytest.fixture
def backoff():
    return BackoffModel()
