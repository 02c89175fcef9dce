from fractions import Fraction

import pytest

from abelquot.enumeration import transitive_groups
from abelquot.errors import CapExceededError, InputError, NotNormalError
from abelquot.named_groups import (
    affine_line,
    alternating,
    cyclic,
    dihedral,
    symmetric,
)
from abelquot.permutation import GroupSpec, from_cycles, identity
from abelquot.stabchain import chain_of, elements
from abelquot.structure import (
    ARInvariant,
    CompositionFactor,
    a_invariant,
    abelianization_order,
    composition_factors,
    derived_subgroup,
    is_normal,
    normal_closure,
    quotient_action,
    subgroup_order,
)

from . import c3_wr_c3, c6, d4, random_groups, s4, s5, sympy_group


def test_normal_closure(s4, s5):
    assert subgroup_order(normal_closure(s4, [identity(4)])) == 1
    v4 = normal_closure(s4, [from_cycles(4, [(0, 1), (2, 3)])])
    assert subgroup_order(v4) == 4
    a5 = normal_closure(s5, [from_cycles(5, [(0, 1, 2)])])
    assert subgroup_order(a5) == 60
    with pytest.raises(InputError):
        normal_closure(cyclic(4), [from_cycles(4, [(0, 1)])])


def test_is_normal(s4):
    v4 = GroupSpec.from_cycles(4, ["(1,2)(3,4)", "(1,3)(2,4)"])
    assert is_normal(s4, v4)
    assert not is_normal(s4, GroupSpec.from_cycles(4, ["(1,2)"]))


def test_derived_subgroup(s4, d4):
    assert subgroup_order(derived_subgroup(cyclic(5))) == 1
    derived = derived_subgroup(s4)
    assert subgroup_order(derived) == 12
    assert derived.label == "S4'"
    derived = derived_subgroup(d4)
    assert subgroup_order(derived) == 2
    members = set(elements(chain_of(derived)))
    assert from_cycles(4, [(0, 2), (1, 3)]) in members


def test_abelianization_order(d4, c3_wr_c3):
    assert abelianization_order(alternating(5)) == 1
    assert abelianization_order(alternating(6)) == 1
    assert abelianization_order(d4) == 4
    assert abelianization_order(c3_wr_c3) == 9
    assert abelianization_order(symmetric(5)) == 2
    assert abelianization_order(cyclic(7)) == 7


@pytest.mark.parametrize(
    "group",
    [
        symmetric(4),
        dihedral(6),
        affine_line(7),
        alternating(5),
        GroupSpec.from_cycles(6, ["(1,2,3)", "(4,5)", "(1,4)(2,5)(3,6)"]),
    ],
)
def test_abelianization_matches_sympy(group):
    derived = sympy_group(group).derived_subgroup()
    expected = sympy_group(group).order() // derived.order()
    assert abelianization_order(group) == expected


def test_derived_subgroup_matches_sympy():
    for group in random_groups(50, seed=99):
        oracle = sympy_group(group)
        derived = derived_subgroup(group)
        assert subgroup_order(derived) == oracle.derived_subgroup().order()
        assert abelianization_order(group) == (
            oracle.order() // oracle.derived_subgroup().order()
        )


def test_quotient_action(s4, c6):
    assert quotient_action(s4, s4).degree == 1

    v4 = GroupSpec.from_cycles(4, ["(1,2)(3,4)", "(1,3)(2,4)"])
    image = quotient_action(s4, v4)
    assert image.degree == 6
    assert subgroup_order(image) == 6

    c2 = GroupSpec.from_cycles(6, ["(1,4)(2,5)(3,6)"])
    image = quotient_action(c6, c2)
    assert image.degree == 3
    assert subgroup_order(image) == 3

    with pytest.raises(NotNormalError):
        quotient_action(s4, GroupSpec.from_cycles(4, ["(1,2)"]))
    with pytest.raises(CapExceededError):
        quotient_action(s4, GroupSpec.trivial(4), cap=10)


def test_composition_factors(s4, s5, c6):
    assert composition_factors(c6) == [
        CompositionFactor(2, True),
        CompositionFactor(3, True),
    ]
    assert composition_factors(s4) == [
        CompositionFactor(2, True),
        CompositionFactor(2, True),
        CompositionFactor(2, True),
        CompositionFactor(3, True),
    ]
    assert composition_factors(s5) == [
        CompositionFactor(2, True),
        CompositionFactor(60, False),
    ]
    assert composition_factors(GroupSpec.trivial(3)) == []
    with pytest.raises(CapExceededError):
        composition_factors(symmetric(6), cap=100)


@pytest.mark.parametrize("n", range(2, 8))
def test_composition_product_on_catalog(n):
    for group in transitive_groups(n, use_cache=False):
        product = 1
        for factor in composition_factors(group):
            product *= factor.order
        assert product == subgroup_order(group)


@pytest.mark.parametrize("seed", [0, 1, 5])
def test_composition_factors_independent_series(s4, s5, seed):
    assert composition_factors(s4, seed=seed) == composition_factors(s4)
    assert composition_factors(s5, seed=seed) == composition_factors(s5)


def test_a_invariant():
    assert a_invariant(cyclic(2)).counts == ((2, 1),)
    assert a_invariant(cyclic(2)).bits().lo == 1

    s3 = a_invariant(symmetric(3))
    assert s3.product == 6
    assert s3.as_dict() == {2: 1, 3: 1}

    s4 = a_invariant(symmetric(4))
    assert s4.product == 24
    assert s4.counts == ((2, 3), (3, 1))
    bits = s4.bits()
    assert Fraction(4584, 1000) < bits.lo <= bits.hi < Fraction(4585, 1000)

    assert a_invariant(alternating(5)).counts == ()
    assert a_invariant(symmetric(5)).product == 2


def test_ar_invariant_bound():
    for r in (2, 3, 4, 5):
        assert a_invariant(symmetric(r)).ar_bound_holds(r)
    assert a_invariant(cyclic(2)).ar_bound_holds(2)
    # 2**10 is far above 24**(-1/3) * 2**(1 + c0)
    assert not ARInvariant(((2, 10),)).ar_bound_holds(2)
