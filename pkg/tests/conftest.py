import numpy as np
import pytest

from meshwavelets import build_laplacian, generalized_eigs, normalize_unit_area
from meshwavelets.synthetic import icosphere, jittered_icosphere, triangulated_grid


@pytest.fixture(scope="session")
def ico162():
    mesh, _ = normalize_unit_area(icosphere(2))
    return mesh


@pytest.fixture(scope="session")
def ico642():
    mesh, _ = normalize_unit_area(icosphere(3))
    return mesh


@pytest.fixture(scope="session")
def jitter642():
    mesh, _ = normalize_unit_area(jittered_icosphere(3, seed=42))
    return mesh


@pytest.fixture(scope="session")
def lap162(ico162):
    return build_laplacian(ico162)


@pytest.fixture(scope="session")
def lap642(ico642):
    return build_laplacian(ico642)


@pytest.fixture(scope="session")
def lap_jitter642(jitter642):
    return build_laplacian(jitter642)


@pytest.fixture(scope="session")
def spec162(lap162):
    return generalized_eigs(lap162.mass, lap162.stiffness)


@pytest.fixture(scope="session")
def spec642(lap642):
    return generalized_eigs(lap642.mass, lap642.stiffness)


@pytest.fixture(scope="session")
def grid_mesh():
    return triangulated_grid(6, 6)


def chain_mesh():
    """Path v0-v1-v2 with edge lengths 1 and 2; detours are strictly longer."""
    v = np.array([
        [0.0, 0.0, 0.0],   # v0
        [1.0, 0.0, 0.0],   # v1
        [3.0, 0.0, 0.0],   # v2
        [0.5, 3.0, 0.0],   # apex above edge (v0, v1)
        [2.0, 4.0, 0.0],   # apex above edge (v1, v2)
    ])
    f = np.array([[0, 1, 3], [1, 2, 4]])
    from meshwavelets import TriangleMesh
    return TriangleMesh(vertices=v, faces=f)
