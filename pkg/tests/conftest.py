import pytest

import blipsim as bs


@pytest.fixture(scope="session")
def rig_grid():
    """Standard rig: 16384 cells over [-200, 200), dx = 400/16384."""
    return bs.make_grid(-200.0, 200.0, 16384)


@pytest.fixture(scope="session")
def small_grid():
    """Cheap grid for CLI and error-path tests."""
    return bs.make_grid(-50.0, 50.0, 2048)


@pytest.fixture(scope="session")
def rig_packet(rig_grid):
    """Right-mover aimed at the scatterer: x0 = -60, k0 = 30, sigma = 2."""
    return bs.gaussian_packet(rig_grid, (+1, "H"), x0=-60.0, k0=30.0, sigma=2.0)


@pytest.fixture(scope="session")
def ref_medium():
    return bs.Medium.reference()


@pytest.fixture(scope="session")
def glass():
    return bs.Medium.from_index(2.0)
