"""Deterministic Schreier-Sims stabilizer chains.

A chain stores, for every base point, the transversal of the base point's
orbit under the pointwise stabilizer of the earlier base points, with
coset representatives kept as explicit permutations. Products are read
left to right (see ``abelquot.permutation``).
"""
import itertools
import logging
import math
from functools import reduce

from . import config
from .errors import CapExceededError, DegreeMismatchError
from .permutation import GroupSpec, identity, inverse, support

logger = logging.getLogger(__name__)


class ChainLevel:
    """One level of a stabilizer chain.

    Attributes
    ----------
    base_point : int
        The point whose orbit this level describes.
    generators : list of Permutation
        Strong generators fixing all earlier base points.
    transversal : dict
        Maps every orbit point ``beta`` to a permutation sending
        ``base_point`` to ``beta``.

    """

    def __init__(self, base_point, degree):
        self.base_point = base_point
        self.generators = []
        self.transversal = {base_point: identity(degree)}
        self._inverses = {}

    def rebuild_orbit(self):
        """Breadth-first orbit and transversal under the level generators."""
        base_id = self.transversal[self.base_point]
        transversal = {self.base_point: base_id}
        queue = [self.base_point]
        for point in queue:
            u = transversal[point]
            for s in self.generators:
                image = s.images[point]
                if image not in transversal:
                    transversal[image] = u * s
                    queue.append(image)
        self.transversal = transversal
        self._inverses = {}

    def inverse_representative(self, point):
        rep = self._inverses.get(point)
        if rep is None:
            rep = inverse(self.transversal[point])
            self._inverses[point] = rep
        return rep

    @property
    def orbit(self):
        return sorted(self.transversal)


class StabilizerChain:
    """Base and strong generating set of a permutation group.

    Build instances with :func:`build_chain`; a finished chain is never
    mutated again.

    Attributes
    ----------
    degree : int
        Degree of the group.
    levels : list of ChainLevel
        One level per base point.

    """

    def __init__(self, degree, levels):
        self.degree = degree
        self.levels = levels

    @property
    def base(self):
        return [level.base_point for level in self.levels]

    @property
    def order(self):
        return order(self)

    def strong_generators(self):
        """All strong generators, without repetition, in level order."""
        seen = set()
        result = []
        for level in self.levels:
            for s in level.generators:
                if s not in seen:
                    seen.add(s)
                    result.append(s)
        return result

    def to_group(self, label=""):
        gens = self.strong_generators() or [identity(self.degree)]
        return GroupSpec(self.degree, tuple(gens), label)

    def __contains__(self, p):
        return contains(self, p)


def sift(chain, p, start=0):
    """Strip ``p`` through the chain.

    Parameters
    ----------
    chain : StabilizerChain
        Chain to sift through.
    p : Permutation
        Element to sift.
    start : int
        First level to use.

    Returns
    -------
    (Permutation, int)
        The residue and the level at which sifting stopped. The element
        lies in the group iff the level equals ``len(chain.levels)`` and
        the residue is the identity.

    """
    h = p
    levels = chain.levels
    for k in range(start, len(levels)):
        level = levels[k]
        beta = h.images[level.base_point]
        if beta not in level.transversal:
            return h, k
        h = h * level.inverse_representative(beta)
    return h, len(levels)


def _schreier_sims(degree, generators, base_prefix):
    levels = [ChainLevel(point, degree) for point in base_prefix]
    base = list(base_prefix)

    def ensure_moved(g):
        if all(g.images[b] == b for b in base):
            point = support(g)[0]
            base.append(point)
            levels.append(ChainLevel(point, degree))

    gens = [g for g in generators if not g.is_identity]
    for g in gens:
        ensure_moved(g)
    for k, level in enumerate(levels):
        fixed = base[:k]
        level.generators = [
            g for g in gens if all(g.images[b] == b for b in fixed)
        ]
        level.rebuild_orbit()
    return _complete_levels(degree, levels)


def _complete_levels(degree, levels):
    """Run Schreier-Sims to completion over partially built levels.

    Every Schreier generator of every level must sift to the identity
    through the levels below it; residues that do not become new strong
    generators.
    """
    i = len(levels) - 1
    while i >= 0:
        level = levels[i]
        residue = None
        for beta in list(level.transversal):
            u_beta = level.transversal[beta]
            for s in level.generators:
                image = s.images[beta]
                h = u_beta * s * level.inverse_representative(image)
                if h.is_identity:
                    continue
                stripped = StabilizerChain(degree, levels)
                residue, j = sift(stripped, h, i + 1)
                if j < len(levels) or not residue.is_identity:
                    break
                residue = None
            if residue is not None:
                break
        if residue is None:
            i -= 1
            continue
        if j == len(levels):
            levels.append(ChainLevel(support(residue)[0], degree))
        for k in range(i + 1, j + 1):
            levels[k].generators.append(residue)
            levels[k].rebuild_orbit()
        i = j
    return levels


def build_chain(group, base=None):
    """Build the stabilizer chain of a group.

    The construction is deterministic: base points are chosen as the
    smallest point moved by the generator (or residue) that needs a new
    level.

    Parameters
    ----------
    group : GroupSpec
        Group to analyse.
    base : sequence of int
        Optional base prefix. Passing ``range(degree)`` yields a chain with
        one (possibly trivial) level per point, as needed for canonical
        coset representatives.

    Returns
    -------
    StabilizerChain

    """
    prefix = list(base) if base is not None else []
    levels = _schreier_sims(group.degree, group.generators, prefix)
    if base is None:
        levels = [level for level in levels if len(level.transversal) > 1]
    chain = StabilizerChain(group.degree, levels)
    logger.debug(
        "Built chain for %s: degree %d, base %s, order %d",
        group.label or "group",
        group.degree,
        chain.base,
        order(chain),
    )
    return chain


def order(chain):
    """Exact group order, the product of the transversal sizes."""
    return math.prod(len(level.transversal) for level in chain.levels)


def contains(chain, p):
    """Exact membership test by sifting."""
    if p.degree != chain.degree:
        raise DegreeMismatchError(
            f"Permutation of degree {p.degree} tested against a chain of "
            f"degree {chain.degree}"
        )
    residue, level = sift(chain, p)
    return level == len(chain.levels) and residue.is_identity


def elements(chain, cap=None):
    """Enumerate the group once per element in a fixed order.

    Elements are the products ``u_{k-1} * ... * u_1 * u_0`` of transversal
    representatives, ordered lexicographically by the base images chosen
    at levels 0, 1, ..., k-1.

    Parameters
    ----------
    chain : StabilizerChain
        Chain of the group.
    cap : int
        Refuse groups larger than this (default ``config.ELEMENT_CAP``).

    Yields
    ------
    Permutation

    """
    cap = config.ELEMENT_CAP if cap is None else cap
    size = order(chain)
    if size > cap:
        raise CapExceededError("Refusing to enumerate group", size, cap)
    return _iter_elements(chain)


def _iter_elements(chain):
    if not chain.levels:
        yield identity(chain.degree)
        return
    choices = [
        [level.transversal[point] for point in level.orbit]
        for level in chain.levels
    ]
    for reps in itertools.product(*choices):
        yield reduce(lambda acc, u: u * acc, reps)


def random_element(chain, rng):
    """Uniformly random element.

    Parameters
    ----------
    chain : StabilizerChain
        Chain of the group.
    rng : numpy.random.Generator
        Source of randomness.

    """
    result = identity(chain.degree)
    for level in chain.levels:
        orbit = level.orbit
        result = level.transversal[orbit[rng.integers(len(orbit))]] * result
    return result


def canonical_coset_representative(chain, p):
    """Least element (by image tuple) of the right coset ``N * p``.

    Parameters
    ----------
    chain : StabilizerChain
        Chain of ``N`` built with the full base prefix ``0..n-1``.
    p : Permutation
        Any element of the coset.

    Returns
    -------
    Permutation

    """
    y = p
    for level in chain.levels:
        images = y.images
        best = min(level.transversal, key=lambda beta: images[beta])
        y = level.transversal[best] * y
    return y


def extend_chain(chain, new_generators):
    """Chain of the group generated by ``chain``'s group and more elements.

    The existing levels are reused as the starting point of Schreier-Sims,
    so extending by an element that is already a member is cheap.

    Parameters
    ----------
    chain : StabilizerChain
        Chain to extend; it is not modified.
    new_generators : iterable of Permutation
        Additional generators.

    Returns
    -------
    StabilizerChain

    """
    levels = []
    for old in chain.levels:
        level = ChainLevel(old.base_point, chain.degree)
        level.generators = list(old.generators)
        level.transversal = dict(old.transversal)
        levels.append(level)
    base = [level.base_point for level in levels]
    for g in new_generators:
        if g.is_identity or contains(StabilizerChain(chain.degree, levels), g):
            continue
        if all(g.images[b] == b for b in base):
            point = support(g)[0]
            base.append(point)
            levels.append(ChainLevel(point, chain.degree))
        for k, level in enumerate(levels):
            if all(g.images[b] == b for b in base[:k]):
                level.generators.append(g)
                level.rebuild_orbit()
        levels = _complete_levels(chain.degree, levels)
        base = [level.base_point for level in levels]
    return StabilizerChain(chain.degree, levels)


_CHAIN_CACHE = {}
_CHAIN_CACHE_SIZE = 4096


def chain_of(group):
    """Memoised :func:`build_chain` (chains are immutable once built)."""
    chain = _CHAIN_CACHE.get(group)
    if chain is None:
        chain = build_chain(group)
        remember_chain(group, chain)
    return chain


def remember_chain(group, chain):
    """Record an already built chain for ``group``."""
    if len(_CHAIN_CACHE) >= _CHAIN_CACHE_SIZE:
        _CHAIN_CACHE.clear()
    _CHAIN_CACHE[group] = chain
