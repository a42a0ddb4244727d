import pytest

from abpre.groups import suite_new

# 61-bit Mersenne prime: big enough that randomized suites never collide,
# small enough that exponent arithmetic stays instant.
M61 = 2**61 - 1


@pytest.fixture(scope="session")
def mock13():
    """The worked-transcript suite: p = 13, g2 = g^7."""
    return suite_new("mock", p=13, g2_exponent=7)


@pytest.fixture(scope="session")
def mock61():
    return suite_new("mock", p=M61, g2_exponent=2)


@pytest.fixture(scope="session")
def pairing_suite():
    return suite_new("pairing", curve="ss512")


@pytest.fixture(scope="session", params=["mock", "pairing"])
def suite(request, mock61, pairing_suite):
    """Both backends, for every test that must hold on each identically."""
    return mock61 if request.param == "mock" else pairing_suite
