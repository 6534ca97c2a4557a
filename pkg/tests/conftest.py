import numpy as np
import pytest

from anisocrack.bimaterial import BimaterialParams
from anisocrack.materials import MaterialSpec
from anisocrack.singular_ops import QuadratureScheme

#: Plane parameter set of the boron/aluminium example (derived values only).
EXAMPLE_PARAMS = dict(H11=2.01, H22=6.98, delta1=0.72, delta2=0.92)

ACCEPTANCE_LINES: list[str] = []


def random_monoclinic(rng, id="m"):
    """Orthotropic constants rotated about x3: a generic monoclinic solid."""
    E1, E2, E3 = rng.uniform(1.0, 10.0, 3)
    G23, G13, G12 = rng.uniform(0.3, 4.0, 3)
    nu23, nu13, nu12 = rng.uniform(0.05, 0.3, 3)
    base = MaterialSpec.orthotropic(E1, E2, E3, G23, G13, G12, nu23, nu13, nu12, id=id)
    return base.rotated_in_plane(rng.uniform(0.1, 1.4), id=id)


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


@pytest.fixture
def generic_pair(rng):
    return random_monoclinic(rng, "one"), random_monoclinic(rng, "two")


@pytest.fixture
def antiplane_bp():
    return BimaterialParams.from_parameters(2.0, 3.0, H33=1.5, nu=0.3)


@pytest.fixture
def example_bp():
    return BimaterialParams.from_parameters(alpha=0.1, H33=1.5, nu=0.2, **EXAMPLE_PARAMS)


@pytest.fixture
def scheme():
    return QuadratureScheme(panels=64)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
