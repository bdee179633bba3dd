import numpy as np
import pytest

import spinwire as sw


@pytest.fixture(scope="session")
def dipole_spec():
    return sw.preset("dipole", two_s=1, k=1.0)


@pytest.fixture(scope="session")
def dipole_spectra(dipole_spec):
    """Dipole sectors two_jz in {-5..5} at the production radial grid."""
    grid = sw.RadialGrid(60.0, 3000)
    spectra = []
    for two_jz in range(-5, 6, 2):
        sector = sw.build_sector(dipole_spec, two_jz, 1.0)
        spectra.append(sw.solve_bound(sw.assemble(sector, dipole_spec, grid)))
    return spectra


def random_hermitian_alphas(two_s, rng):
    """Random interaction coefficients satisfying alpha_k* = alpha_{-k}."""
    alphas = {}
    for two_k in range(two_s, -1, -2):
        z = complex(rng.standard_normal(), rng.standard_normal())
        if two_k == 0:
            z = complex(z.real, 0.0)
        alphas[two_k] = z
        alphas[-two_k] = z.conjugate()
    return alphas


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)
