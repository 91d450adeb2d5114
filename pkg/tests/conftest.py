import pytest

from frameforge import builtin_frame


@pytest.fixture
def ex1():
    return builtin_frame("example1")


@pytest.fixture
def sh():
    return builtin_frame("example-sh")


@pytest.fixture
def switching_frame():
    from frameforge import make_frame

    return make_frame(2, [0, 3, 3, 3])
