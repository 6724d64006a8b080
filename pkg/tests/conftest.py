import random

import pytest

from gaudin.algebra import AlgebraSignature, Mode


@pytest.fixture
def q1():
    return AlgebraSignature(2, 1, Mode.QUANTUM)


@pytest.fixture
def q2():
    return AlgebraSignature(2, 2, Mode.QUANTUM)


@pytest.fixture
def q3():
    return AlgebraSignature(2, 3, Mode.QUANTUM)


@pytest.fixture
def c2():
    return AlgebraSignature(2, 2, Mode.CLASSICAL)


@pytest.fixture
def c3():
    return AlgebraSignature(2, 3, Mode.CLASSICAL)


@pytest.fixture
def rng():
    return random.Random(0xBEEF)
