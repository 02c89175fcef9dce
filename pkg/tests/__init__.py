import os

import numpy as np
import pytest
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics import PermutationGroup

from abelquot.certifier import wreath_product
from abelquot.named_groups import cyclic
from abelquot.permutation import GroupSpec, from_cycles

TEST_GROUPS = os.path.join(os.path.dirname(__file__), "test_groups")


def _group(degree, generators, label):
    return GroupSpec.from_cycles(degree, generators, label)


@pytest.fixture
def c4():
    return _group(4, ["(1,2,3,4)"], "C4")


@pytest.fixture
def d4():
    return _group(4, ["(1,2,3,4)", "(1,3)"], "D4")


@pytest.fixture
def s4():
    return _group(4, ["(1,2,3,4)", "(1,2)"], "S4")


@pytest.fixture
def a4():
    return _group(4, ["(1,2,3)", "(2,3,4)"], "A4")


@pytest.fixture
def s5():
    return _group(5, ["(1,2,3,4,5)", "(1,2)"], "S5")


@pytest.fixture
def a5():
    return _group(5, ["(1,2,3)", "(1,2,3,4,5)"], "A5")


@pytest.fixture
def c6():
    return _group(6, ["(1,2,3,4,5,6)"], "C6")


@pytest.fixture
def c3_wr_c3():
    return wreath_product(cyclic(3), cyclic(3))


@pytest.fixture
def group_file():
    def path(name):
        return os.path.join(TEST_GROUPS, name)

    return path


def random_groups(count, seed=2023):
    """Seeded groups of degree 3..8 with one to three random cycles as
    generators."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(3, 9))
        generators = []
        for _ in range(int(rng.integers(1, 4))):
            length = int(rng.integers(2, n + 1))
            cycle = [int(v) for v in rng.permutation(n)[:length]]
            generators.append(from_cycles(n, [cycle]))
        yield GroupSpec(n, generators)


def sympy_group(group):
    return PermutationGroup(
        [SympyPermutation(list(g.images)) for g in group.generators]
    )
