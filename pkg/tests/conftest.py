import warnings

import pytest

from disclab import QuadratureGrid
from disclab.series import AccuracyWarning


@pytest.fixture(scope="session")
def grid():
    """Production-default grid, shared across the suite."""
    return QuadratureGrid()


@pytest.fixture(scope="session")
def small_grid():
    """Cheap grid for oracle cross-checks that sweep many configurations."""
    return QuadratureGrid(
        nodes_per_panel=4,
        angular=128,
        inner_depth=10,
        outer_depth=12,
        a_radii=(0.0, 0.5, 0.9),
        a_angles=4,
    )


@pytest.fixture(autouse=True)
def _quiet_accuracy_warnings():
    # Accuracy warnings are exercised explicitly where they matter.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        yield
