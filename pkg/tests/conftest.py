import pytest

from gcdmobius.constants import build_bundle
from gcdmobius.sieve import build_sieve_set


@pytest.fixture(scope="session")
def bundle():
    return build_bundle(30)


@pytest.fixture(scope="session")
def tables_1m():
    # big enough for every fast route up to x = 10^12
    return build_sieve_set(10 ** 6)


@pytest.fixture(scope="session")
def tables_10k():
    # small set with the order-3 divisor table for identity tests
    return build_sieve_set(10 ** 4, extra_tau=(3,))
