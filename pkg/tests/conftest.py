import numpy as np
import pytest

import grating_pwdg as gp


@pytest.fixture(scope="session")
def eight_mesh():
    return gp.fixed_eight_triangle_mesh()


@pytest.fixture(scope="session")
def two_layer_16():
    """Coarse 16-element two-layer mesh used by the oracle-equivalence tests."""
    iface = gp.two_layer_interface((1.27 + 0.05j) ** 2)
    mesh = gp.generate_periodic_mesh(iface, 3.0, 3.0)
    assert mesh.n_elements == 16
    return iface, mesh


@pytest.fixture(scope="session")
def two_layer_56():
    iface = gp.two_layer_interface((1.27 + 0.05j) ** 2)
    mesh = gp.generate_periodic_mesh(iface, 3.0, 1.5)
    assert mesh.n_elements == 56
    return iface, mesh


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
