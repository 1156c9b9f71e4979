import pytest

from semlock import model


@pytest.fixture
def grid():
    return model.default_grid()


@pytest.fixture
def reference_password(grid):
    """Cup to the right of person, then board to the right of cup."""
    return model.parse_canonical("cup>person:R|board>cup:R", grid.icons)
