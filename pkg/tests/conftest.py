import numpy as np
import pytest

from kuga.symplectic import SpElement


def block(A, B, C, D):
    return np.block([[np.asarray(A), np.asarray(B)], [np.asarray(C), np.asarray(D)]]).astype(np.int64)


Z2 = np.zeros((2, 2), dtype=np.int64)
I2 = np.eye(2, dtype=np.int64)


def translation(S):
    return SpElement(block(I2, S, Z2, I2))


def lower(S):
    return SpElement(block(I2, Z2, S, I2))


def rotation(U):
    U = np.asarray(U, dtype=np.int64)
    Uinv_t = np.rint(np.linalg.inv(U)).astype(np.int64).T
    return SpElement(block(U, Z2, Z2, Uinv_t))


def random_symmetric(rng, lo=-2, hi=2, mult=(1, 1, 1)):
    a, b, c = (int(rng.integers(lo, hi + 1)) * m for m in mult)
    return np.array([[a, b], [b, c]], dtype=np.int64)


def random_symplectic(rng, steps=3):
    """Short random word in elementary generators of Sp(4, Z)."""
    units = [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[0, 1], [1, 0]], [[-1, 0], [0, 1]]]
    h = SpElement.identity()
    for _ in range(steps):
        kind = rng.integers(3)
        if kind == 0:
            g = translation(random_symmetric(rng, -1, 1))
        elif kind == 1:
            g = lower(random_symmetric(rng, -1, 1))
        else:
            g = rotation(units[rng.integers(len(units))])
        h = h @ g
    return h


def random_gamma_p(rng, p, steps=3):
    """Random product of elements known to lie in Gamma_p."""
    gens = [
        lambda: translation(random_symmetric(rng, mult=(1, p, p * p))),
        lambda: lower(random_symmetric(rng)),
        lambda: SpElement([[0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 1, 0], [0, 0, 0, 1]]),
    ]
    h = SpElement.identity()
    for _ in range(steps):
        h = h @ gens[rng.integers(len(gens))]()
    return h


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
