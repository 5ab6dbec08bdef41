import random
from fractions import Fraction

import pytest

from regaut import (
    MultiPoly,
    PolyMap,
    RegularAutomorphism,
    build_certificate_n2,
    load_map_file,
)

X = MultiPoly.variable(0, 2)
Y = MultiPoly.variable(1, 2)


def poly2(terms):
    return MultiPoly(2, terms)


@pytest.fixture(scope="session")
def henon():
    """f(x, y) = (y, y^2 - x), inverse (x^2 - y, x)."""
    f = PolyMap([Y, Y * Y - X])
    g = PolyMap([X * X - Y, X])
    return RegularAutomorphism.validate(f, g)


@pytest.fixture(scope="session")
def henon_cert(henon):
    return build_certificate_n2(henon)


@pytest.fixture(scope="session")
def henon_two():
    """f(x, y) = (y, y^2 - 2x), inverse ((x^2 - y)/2, x): bad at p = 2."""
    f = PolyMap([Y, Y * Y - 2 * X])
    g = PolyMap([(X * X - Y) * Fraction(1, 2), X])
    return RegularAutomorphism.validate(f, g)


@pytest.fixture(scope="session")
def henon_two_cert(henon_two):
    return build_certificate_n2(henon_two)


@pytest.fixture(scope="session")
def scaled():
    """f(x, y) = (y, 2y^2 - x), inverse (2x^2 - y, x): integral, C_2 = 2."""
    f = PolyMap([Y, 2 * (Y * Y) - X])
    g = PolyMap([2 * (X * X) - Y, X])
    return RegularAutomorphism.validate(f, g)


@pytest.fixture(scope="session")
def scaled_cert(scaled):
    return build_certificate_n2(scaled)


@pytest.fixture(scope="session")
def elementary_map():
    """Shear e(x, y) = (x, y + x^2): an automorphism but not regular."""
    return PolyMap([X, Y + X * X])


@pytest.fixture(scope="session")
def elementary_inverse():
    return PolyMap([X, Y - X * X])


@pytest.fixture(scope="session")
def triple(request):
    """Validated dimension-3 pair from the shipped map file."""
    path = request.config.rootpath / "maps" / "triple.map"
    return load_map_file(path)


def rational_points(count, seed, bound=100, dim=2):
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        pts.append(
            tuple(
                Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
                for _ in range(dim)
            )
        )
    return pts
