import numpy as np
import pytest

import hamsplit as hs


def random_state(index_set, rng, size=0.1, real=True):
    n = len(index_set)
    xi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    if real:
        z = hs.State.real_from_xi(index_set, xi)
    else:
        eta = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        z = hs.State(index_set, xi, eta)
    s = size / z.norm()
    return hs.State(index_set, z.xi * s, z.eta * s)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def nls8():
    return hs.nls_model(8, hs.paper_potential, hs.NonlinearSpec.cubic(1.0))


@pytest.fixture
def nls1_mixed():
    """K=1 model with genuine cubic terms in g, used by normal-form tests."""
    nl = hs.NonlinearSpec.general(
        {(3, 0): 0.3, (0, 3): 0.3, (2, 1): 0.2, (1, 2): 0.2, (2, 2): 0.5})
    return hs.nls_model(1, hs.paper_potential, nl)


def paper_initial_state(model, eps=None):
    """psi_0(x) = 2/(2 - cos x); scaled by eps when given."""
    K = model.index_set.K
    x = np.pi * np.arange(2 * K) / K
    psi = 2.0 / (2.0 - np.cos(x))
    xi = hs.from_physical(hs.PhysicalField(psi.astype(complex),
                                           model.index_set))
    if eps is not None:
        xi = eps * xi
    return hs.State.real_from_xi(model.index_set, xi)
