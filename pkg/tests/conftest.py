import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dvrcert.linalg import RING_O, ExactMatrix
from dvrcert.groups import generate_group
from dvrcert.scalars import DvrDescriptor


@pytest.fixture(scope="session")
def z3():
    return DvrDescriptor("int-localized", 3)


@pytest.fixture(scope="session")
def z5():
    return DvrDescriptor("int-localized", 5)


@pytest.fixture(scope="session")
def f5t():
    return DvrDescriptor("ratfunc-localized", 5)


@pytest.fixture(scope="session")
def s2_z3(z3):
    return generate_group([ExactMatrix.from_ints(RING_O, z3, [[0, 1], [1, 0]])])


@pytest.fixture(scope="session")
def s3_z5(z5):
    return generate_group([
        ExactMatrix.from_ints(RING_O, z5, [[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
        ExactMatrix.from_ints(RING_O, z5, [[1, 0, 0], [0, 0, 1], [0, 1, 0]]),
    ])


@pytest.fixture(scope="session")
def b2_z3(z3):
    return generate_group([
        ExactMatrix.from_ints(RING_O, z3, [[0, 1], [1, 0]]),
        ExactMatrix.from_ints(RING_O, z3, [[1, 0], [0, -1]]),
    ])


@pytest.fixture(scope="session")
def c4_f5t(f5t):
    return generate_group([ExactMatrix.from_ints(RING_O, f5t, [[2]])])


@pytest.fixture(scope="session")
def neg_identity_z23():
    d23 = DvrDescriptor("int-localized", 23)
    return generate_group([ExactMatrix.from_ints(RING_O, d23, [[-1, 0], [0, -1]])])


@pytest.fixture(scope="session")
def s2_z2():
    d2 = DvrDescriptor("int-localized", 2)
    return generate_group([ExactMatrix.from_ints(RING_O, d2, [[0, 1], [1, 0]])])


def random_unit_int(rng: random.Random, p: int) -> int:
    while True:
        u = rng.randint(-3 * p, 3 * p)
        if u % p:
            return u


def random_unimodular(descriptor: DvrDescriptor, n: int, rng: random.Random) -> ExactMatrix:
    """Random basis change of O^n: unit-triangular factors and a permutation."""
    lower = [[0] * n for _ in range(n)]
    upper = [[0] * n for _ in range(n)]
    for i in range(n):
        lower[i][i] = 1
        upper[i][i] = random_unit_int(rng, descriptor.p)
        for j in range(i):
            lower[i][j] = rng.randint(-2, 2)
            upper[j][i] = rng.randint(-2, 2)
    perm = list(range(n))
    rng.shuffle(perm)
    pmat = [[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)]
    m = ExactMatrix.from_ints(RING_O, descriptor, lower)
    m = m * ExactMatrix.from_ints(RING_O, descriptor, upper)
    return m * ExactMatrix.from_ints(RING_O, descriptor, pmat)
