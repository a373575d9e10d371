import math

import pytest

from carpetdim import CarpetSpec, synthesize

CANONICAL_B = 3.0 * math.log(2.0)


@pytest.fixture(scope="session")
def canonical():
    """(spec, constants, feasibility) for the flagship construction B = 3 log 2."""
    return synthesize(CANONICAL_B)


@pytest.fixture(scope="session")
def canonical_spec(canonical):
    return canonical[0]


@pytest.fixture(scope="session")
def canonical_consts(canonical):
    return canonical[1]


@pytest.fixture(scope="session")
def small_spec():
    """Hand-sized five-symbol parameter set for simplex-oracle tests."""
    return CarpetSpec(lam=4.0, ell_a=3, ell_b=2, psi_a=3.0, psi_b=1.0)


@pytest.fixture(scope="session")
def wide_spec():
    """Mild contractions so first-level rectangles are visibly wide in rasters."""
    return CarpetSpec(lam=math.log(4.0), ell_a=1, ell_b=1,
                      psi_a=math.log(3.0), psi_b=math.log(3.0))
