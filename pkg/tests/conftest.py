import pytest

from mersenne_doubling import build_prime_table


@pytest.fixture(scope="session")
def prime_table():
    return build_prime_table()
