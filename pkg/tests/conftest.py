import numpy as np
import pytest

# rows a, b, c, d; columns alpha .. epsilon
FOUR_ROW_RELATION = np.array([
    [1, 1, 0, 0, 1],
    [1, 0, 0, 1, 1],
    [1, 0, 1, 1, 0],
    [0, 1, 1, 0, 0],
], dtype=bool)

UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])


@pytest.fixture
def four_row_relation():
    return FOUR_ROW_RELATION.copy()


@pytest.fixture
def unit_square():
    return UNIT_SQUARE.copy()
