"""Derived subgroups, coset actions, composition factors and the
abelian-factor invariant a(R).
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from sympy import factorint, isprime

from . import config
from .errors import CapExceededError, InputError, NotNormalError
from .inequalities import primitive_ar_bound
from .intervals import Interval, decide, interval_log2
from .permutation import (
    GroupSpec,
    Permutation,
    commutator,
    conjugate,
    identity,
)
from .stabchain import (
    build_chain,
    canonical_coset_representative,
    chain_of,
    contains,
    elements,
    extend_chain,
    remember_chain,
)

logger = logging.getLogger(__name__)


class CompositionFactor(NamedTuple):
    order: int
    is_abelian: bool


@dataclass(frozen=True)
class ARInvariant:
    """Abelian composition factors of a group, counted by prime.

    Attributes
    ----------
    counts : tuple of (int, int)
        Sorted pairs ``(p, a_p)`` with ``a_p > 0``: the number of abelian
        composition factors of order ``p``.

    """

    counts: tuple

    @classmethod
    def from_factors(cls, factors):
        tally = {}
        for factor in factors:
            if factor.is_abelian:
                tally[factor.order] = tally.get(factor.order, 0) + 1
        return cls(tuple(sorted(tally.items())))

    def as_dict(self):
        return dict(self.counts)

    @property
    def product(self):
        """Exact ``prod p ** a_p``."""
        result = 1
        for p, count in self.counts:
            result *= p**count
        return result

    def bits(self, precision=config.DEFAULT_PRECISION):
        """Enclosure of ``a(R) = sum a_p * log2(p)``.

        Parameters
        ----------
        precision : int
            Working precision in bits.

        Returns
        -------
        Interval

        """
        total = Interval.exact(0)
        for p, count in self.counts:
            total = total + interval_log2(p, precision) * count
        return total

    def ar_bound_holds(self, r, precision=config.DEFAULT_PRECISION):
        """Check ``product <= 24**(-1/3) * r**(1 + c0)`` rigorously.

        Decided in logarithmic form, ``a(R) <= primitive_ar_bound(r)``, with
        precision escalation.
        """
        return decide(
            lambda bits: primitive_ar_bound(r, bits) - self.bits(bits),
            precision=precision,
        )


def subgroup_order(group):
    """Exact order of a group."""
    return chain_of(group).order


def is_normal(group, subgroup):
    """True iff every conjugate of a subgroup generator by a group generator
    lies in the subgroup."""
    sub_chain = chain_of(subgroup)
    return all(
        contains(sub_chain, conjugate(h, g))
        for h in subgroup.nontrivial_generators
        for g in group.nontrivial_generators
    )


def normal_closure(group, seeds):
    """Smallest normal subgroup of ``group`` containing ``seeds``.

    Parameters
    ----------
    group : GroupSpec
        The ambient group.
    seeds : iterable of Permutation
        Elements of ``group``.

    Returns
    -------
    GroupSpec

    """
    group_chain = chain_of(group)
    gens = []
    for s in seeds:
        if not contains(group_chain, s):
            raise InputError(f"Seed {s} is not an element of the group")
        if not s.is_identity and s not in gens:
            gens.append(s)
    if not gens:
        return GroupSpec.trivial(group.degree)
    chain = build_chain(GroupSpec(group.degree, tuple(gens)))
    queue = list(gens)
    for x in queue:
        for g in group.nontrivial_generators:
            c = conjugate(x, g)
            if not contains(chain, c):
                gens.append(c)
                queue.append(c)
                chain = extend_chain(chain, [c])
    closure = GroupSpec(group.degree, tuple(gens))
    remember_chain(closure, chain)
    return closure


def derived_subgroup(group):
    """The commutator subgroup G'.

    Returns
    -------
    GroupSpec
        Normal closure of the commutators of all generator pairs.

    """
    gens = group.nontrivial_generators
    commutators = [
        commutator(a, b)
        for i, a in enumerate(gens)
        for b in gens[i + 1:]
    ]
    derived = normal_closure(group, commutators)
    if group.label:
        derived = derived.with_label(f"{group.label}'")
    return derived


def abelianization_order(group):
    """Exact ``|G / G'|``."""
    return subgroup_order(group) // subgroup_order(derived_subgroup(group))


def quotient_action(group, normal, cap=None):
    """Action of ``group`` on the right cosets of a normal subgroup.

    Cosets are identified by canonical representatives (see
    :func:`abelquot.stabchain.canonical_coset_representative`) and
    numbered in breadth-first order from the coset ``N`` itself.

    Parameters
    ----------
    group : GroupSpec
        The ambient group.
    normal : GroupSpec
        A normal subgroup of ``group``.
    cap : int
        Largest accepted index (default ``config.QUOTIENT_CAP``).

    Returns
    -------
    GroupSpec
        Group of degree ``|G:N|`` whose generators are the coset
        permutations of the generators of ``group``.

    """
    cap = config.QUOTIENT_CAP if cap is None else cap
    if normal.degree != group.degree:
        raise InputError("Subgroup and group must have the same degree")
    index = subgroup_order(group) // subgroup_order(normal)
    if index > cap:
        raise CapExceededError("Refusing to build coset action", index, cap)
    if not is_normal(group, normal):
        raise NotNormalError("Subgroup is not normal in the group")
    full_chain = build_chain(normal, base=range(group.degree))
    start = canonical_coset_representative(full_chain, identity(group.degree))
    reps = [start]
    position = {start: 0}
    tables = [[] for _ in group.generators]
    for rep in reps:
        for k, g in enumerate(group.generators):
            image = canonical_coset_representative(full_chain, rep * g)
            target = position.get(image)
            if target is None:
                target = len(reps)
                position[image] = target
                reps.append(image)
            tables[k].append(target)
    generators = tuple(Permutation(table, check=False) for table in tables)
    label = f"{group.label}/N" if group.label else ""
    logger.debug("Coset action of index %d built", len(reps))
    return GroupSpec(len(reps), generators, label)


def _proper_normal_subgroup(group, size, cap, rng):
    items = list(elements(chain_of(group), cap))
    if rng is not None:
        items = [items[i] for i in rng.permutation(len(items))]
    seen = set()
    gens = group.nontrivial_generators
    for x in items:
        if x.is_identity or x in seen:
            continue
        conjugacy_class = [x]
        seen.add(x)
        for y in conjugacy_class:
            for g in gens:
                c = conjugate(y, g)
                if c not in seen:
                    seen.add(c)
                    conjugacy_class.append(c)
        closure = normal_closure(group, [x])
        if subgroup_order(closure) < size:
            return closure
    return None


def composition_factors(group, cap=None, seed=None):
    """Composition factors of a group as a sorted multiset.

    Parameters
    ----------
    group : GroupSpec
        Any permutation group.
    cap : int
        Largest accepted group order (default ``config.COMPOSITION_CAP``).
    seed : int
        When given, elements are tried in a shuffled order and every split
        goes through a coset action, giving an independent composition
        series. When None, non-perfect groups are split along G' first.

    Returns
    -------
    list of CompositionFactor
        Sorted by order; the orders multiply to ``|G|``.

    """
    cap = config.COMPOSITION_CAP if cap is None else cap
    size = subgroup_order(group)
    if size == 1:
        return []
    if size > cap:
        raise CapExceededError(
            "Refusing to compute composition factors", size, cap
        )
    if isprime(size):
        return [CompositionFactor(size, True)]
    if seed is None:
        derived = derived_subgroup(group)
        derived_size = subgroup_order(derived)
        if derived_size < size:
            factors = [
                CompositionFactor(int(p), True)
                for p, e in factorint(size // derived_size).items()
                for _ in range(e)
            ]
            return sorted(factors + composition_factors(derived, cap))
    rng = np.random.default_rng(seed) if seed is not None else None
    normal = _proper_normal_subgroup(group, size, cap, rng)
    if normal is None:
        logger.debug("Found simple nonabelian factor of order %d", size)
        return [CompositionFactor(size, False)]
    quotient = quotient_action(group, normal, cap)
    return sorted(
        composition_factors(normal, cap, seed)
        + composition_factors(quotient, cap, seed)
    )


def a_invariant(group, cap=None, seed=None):
    """The invariant a(R) of a group, as an :class:`ARInvariant`."""
    return ARInvariant.from_factors(composition_factors(group, cap, seed))
