import random
from fractions import Fraction
from pathlib import Path

import pytest

from curveorbit.curves import XYZ, PlaneCurve
from curveorbit.poly import Poly
from curveorbit.scalars import QQ

SAMPLES = Path(__file__).resolve().parent.parent / "sample_inputs"


def pytest_addoption(parser):
    parser.addoption("--seed", action="store", default="20260814",
                     help="seed for the randomized property tests")


@pytest.fixture
def seed(request):
    return int(request.config.getoption("--seed"))


@pytest.fixture
def rng(seed):
    return random.Random(seed)


def poly(terms, tower=QQ):
    """Build an exact polynomial in x, y, z from an exponent->coeff dict."""
    return Poly(XYZ, {e: Fraction(c) for e, c in terms.items()}, tower=tower)


@pytest.fixture
def septic():
    # x (x z^2 - y^3)^2 - y^5 (4 x z + y^2)
    f = poly({(3, 0, 4): 1, (2, 3, 2): -2, (1, 6, 0): 1,
              (1, 5, 1): -4, (0, 7, 0): -1})
    return PlaneCurve([(f, 1)])


@pytest.fixture
def quintic():
    # y ((y^2 + x z)^2 - 4 x y z^2), kept factored
    line = poly({(0, 1, 0): 1})
    quartic = poly({(0, 4, 0): 1, (1, 2, 1): 2, (2, 0, 2): 1,
                    (1, 1, 2): -4})
    return PlaneCurve([(line, 1), (quartic, 1)])


@pytest.fixture
def nodal_sextic():
    # (y x^2 - z^3)(z x^2 - y^3): two cuspidal cubics crossing at (1:0:0)
    f1 = poly({(2, 1, 0): 1, (0, 0, 3): -1})
    f2 = poly({(2, 0, 1): 1, (0, 3, 0): -1})
    return PlaneCurve([(f1, 1), (f2, 1)])


@pytest.fixture
def samples():
    return SAMPLES
