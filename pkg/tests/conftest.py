import pytest

from helpers import small_corpus


@pytest.fixture
def corpus():
    return small_corpus()
