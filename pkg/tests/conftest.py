import random

import pytest

from wittram import build_extension


@pytest.fixture(scope="session")
def gaussian():
    return build_extension("quadratic-gaussian")


@pytest.fixture(scope="session")
def sqrt2():
    return build_extension("quadratic-sqrt2")


@pytest.fixture(scope="session")
def sqrt2_hi():
    # precision clears the guard for length-3 Witt vectors (m = 2)
    return build_extension("quadratic-sqrt2", precision=48)


@pytest.fixture(scope="session")
def cyclo():
    return build_extension("cyclotomic-step")


@pytest.fixture(scope="session")
def all_extensions(gaussian, sqrt2, cyclo):
    return (gaussian, sqrt2, cyclo)


def random_ol(ext, rng: random.Random, shift: int = 0):
    tower = ext.tower
    coords = [[rng.randrange(tower.pN) for _ in range(tower.e_K)]
              for _ in range(tower.p)]
    a = tower.ol([tower.ok(c) for c in coords])
    if shift:
        a = a * tower.pi_L ** shift
    return a
