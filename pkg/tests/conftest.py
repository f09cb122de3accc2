import random

import pytest

from modules.groups import knot_group, pd_from_text, zero_surgery_presentation
from modules.knot_table import default_table

TREFOIL_PD = "X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)"
# figure-eight as listed by KnotInfo (writhe 0)
FIGURE_EIGHT_PD = "X(4,2,5,1);X(8,6,1,5);X(6,3,7,4);X(2,7,3,8)"

# Alexander polynomials, coefficients from degree 0 upward
ALEXANDER = {
    "unknot": [1],
    "3_1": [1, -1, 1],
    "4_1": [1, -3, 1],
    "5_1": [1, -1, 1, -1, 1],
    "5_2": [2, -3, 2],
    "6_1": [2, -5, 2],
    "6_2": [1, -3, 3, -3, 1],
    "6_3": [1, -3, 5, -3, 1],
    "7_1": [1, -1, 1, -1, 1, -1, 1],
    "7_2": [3, -5, 3],
    "7_3": [2, -3, 3, -3, 2],
    "7_4": [4, -7, 4],
    "7_5": [2, -4, 5, -4, 2],
    "7_6": [1, -5, 7, -5, 1],
    "7_7": [1, -5, 9, -5, 1],
}


@pytest.fixture(scope="session")
def table():
    return default_table()


@pytest.fixture(scope="session")
def trefoil():
    return pd_from_text(TREFOIL_PD)


@pytest.fixture(scope="session")
def figure_eight():
    return pd_from_text(FIGURE_EIGHT_PD)


@pytest.fixture(scope="session")
def trefoil_group(trefoil):
    return knot_group(trefoil)


@pytest.fixture(scope="session")
def trefoil_zero(trefoil):
    return zero_surgery_presentation(trefoil)


@pytest.fixture(scope="session")
def figure_eight_group(figure_eight):
    return knot_group(figure_eight)


@pytest.fixture(scope="session")
def alexander_coefficients():
    return ALEXANDER


@pytest.fixture
def rng():
    return random.Random(20240517)
