import numpy as np
import pytest

from canonmap import fixtures, random_space


@pytest.fixture
def p2():
    return fixtures.p2()


@pytest.fixture
def p3():
    return fixtures.p3()


@pytest.fixture
def t4():
    return fixtures.t4()


@pytest.fixture(scope="session")
def a2_model():
    return fixtures.a2(4, 33, 2.0)


def seeded_corpus(count, max_n, base_seed=0, min_n=2):
    """Deterministic corpus of random valid spaces (total mass 1)."""
    spaces = []
    for k in range(count):
        rng = np.random.default_rng(base_seed + 1000 + k)
        n = int(rng.integers(min_n, max_n + 1))
        spaces.append(random_space(n, seed=base_seed + k))
    return spaces


@pytest.fixture(scope="session")
def corpus30():
    return seeded_corpus(100, 30)


@pytest.fixture(scope="session")
def corpus20():
    return seeded_corpus(50, 20, base_seed=7)
