import cmath
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kannappan.algebra import FiniteSemigroup, InvolutiveAutomorphism, direct_product
from kannappan.functions import DiscreteMeasure

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

OMEGA = cmath.exp(2j * cmath.pi / 3)
SQRT3 = 3 ** 0.5


def cyclic(n):
    return FiniteSemigroup([[(x + y) % n for y in range(n)] for x in range(n)], name=f"Z{n}")


def trunc(k):
    return FiniteSemigroup([[min(x + y, k - 1) for y in range(k)] for x in range(k)], name=f"T{k}")


def left_zero(n):
    return FiniteSemigroup([[x] * n for x in range(n)], name=f"LZ{n}")


@pytest.fixture(scope="session")
def Z2():
    return cyclic(2)


@pytest.fixture(scope="session")
def Z3():
    return cyclic(3)


@pytest.fixture(scope="session")
def T4():
    return trunc(4)


@pytest.fixture(scope="session")
def T4xT4():
    return direct_product(trunc(4), trunc(4))


@pytest.fixture(scope="session")
def swap16():
    return InvolutiveAutomorphism(tuple(4 * (i % 4) + i // 4 for i in range(16)))


@pytest.fixture(scope="session")
def neg3():
    return InvolutiveAutomorphism((0, 2, 1))


@pytest.fixture
def delta0():
    return DiscreteMeasure.point_mass(0)


def idn(n):
    return InvolutiveAutomorphism.identity(n)


def close(a, b, atol=1e-12):
    return np.max(np.abs(np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex))) <= atol
