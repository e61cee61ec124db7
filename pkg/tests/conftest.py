import pytest

from naryalg import builtin


@pytest.fixture(scope="session")
def a4():
    return builtin("A4")


@pytest.fixture(scope="session")
def a5():
    return builtin("A5")


@pytest.fixture(scope="session")
def a6():
    return builtin("A6")


@pytest.fixture(scope="session")
def a8():
    return builtin("A8")


@pytest.fixture(scope="session")
def a13():
    return builtin("A1+3")


@pytest.fixture(scope="session")
def cs():
    return builtin("cs-so4")


@pytest.fixture(scope="session")
def a4_sum_a4():
    return builtin("a4-sum-a4")


@pytest.fixture(scope="session")
def seven_leibniz():
    return builtin("seven-leibniz")
