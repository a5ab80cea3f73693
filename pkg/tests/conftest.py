"""Shared fixtures and hypothesis strategies for the test suite."""

import math

import numpy as np
import pytest
from hypothesis import strategies as st

from qwalk import InitialCoin, WalkParameters, make_initial_coin, make_parameters

# angles kept a safe margin away from the excluded pi/2 and the interval ends
ANGLE_MARGIN = 0.05


def admissible_angles() -> st.SearchStrategy[float]:
    return st.one_of(
        st.floats(min_value=ANGLE_MARGIN, max_value=math.pi / 2 - ANGLE_MARGIN,
                  allow_nan=False, allow_infinity=False),
        st.floats(min_value=math.pi / 2 + ANGLE_MARGIN,
                  max_value=math.pi - ANGLE_MARGIN,
                  allow_nan=False, allow_infinity=False),
    )


def walk_parameters() -> st.SearchStrategy[WalkParameters]:
    return admissible_angles().map(make_parameters)


@st.composite
def coins(draw) -> InitialCoin:
    comps = st.floats(min_value=-1.0, max_value=1.0,
                      allow_nan=False, allow_infinity=False)
    v = np.array([draw(comps) for _ in range(4)])
    n = math.sqrt(float(v @ v))
    if n < 1e-3:
        v = np.array([1.0, 0.0, 0.0, 0.0])
        n = 1.0
    v = v / n
    return make_initial_coin(complex(v[0], v[1]), complex(v[2], v[3]))


def random_coin(rng: np.random.Generator) -> InitialCoin:
    v = rng.normal(size=4)
    alpha = v[0] + 1j * v[1]
    beta = v[2] + 1j * v[3]
    n = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    return make_initial_coin(alpha / n, beta / n)


@pytest.fixture(scope="session")
def symmetric_coin() -> InitialCoin:
    """The launch coin (1/sqrt2, i/sqrt2) whose walk distributes evenly."""
    return make_initial_coin(math.sqrt(0.5), 1j * math.sqrt(0.5))


@pytest.fixture(scope="session")
def params_pi6() -> WalkParameters:
    return make_parameters(math.pi / 6)


@pytest.fixture(scope="session")
def params_pi8() -> WalkParameters:
    return make_parameters(math.pi / 8)


@pytest.fixture(scope="session")
def params_pi4() -> WalkParameters:
    return make_parameters(math.pi / 4)
