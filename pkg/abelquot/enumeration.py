"""Catalogs of transitive permutation groups of small degree.

:func:`transitive_groups` finds every transitive subgroup of Sym(n) up to
conjugacy by cyclic extension: starting from the trivial group and the
perfect subgroups, each class representative ``H`` is extended by elements
``x`` of prime-power order that normalize ``H`` and satisfy ``x**p in H``.
Every subgroup is reached this way because its quotient by its perfect
core is solvable. :func:`fixtures` gives curated groups for larger
degrees.
"""
import itertools
import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from multiprocessing import Pool

import numpy as np
from sympy import factorint, isprime

from . import config
from .blocks import is_transitive, orbits
from .certifier import iterated_wreath, wreath_product
from .errors import UnsupportedDegreeError
from .named_groups import (
    affine_line,
    alternating,
    cyclic,
    dihedral,
    symmetric,
)
from .permutation import (
    GroupSpec,
    Permutation,
    conjugate,
    cycle_type,
    identity,
    is_even,
    order_of,
    read_group_file,
    write_group_file,
)
from .report_writer import (
    catalog_index_frame,
    read_catalog_index,
    write_catalog_index,
)
from .stabchain import (
    build_chain,
    chain_of,
    contains,
    elements,
    extend_chain,
    remember_chain,
)
from .structure import derived_subgroup, subgroup_order

logger = logging.getLogger(__name__)

INDEX_FILE = "index.csv"


@dataclass(frozen=True)
class TransitiveCatalog:
    """Transitive groups of one degree, pairwise non-conjugate.

    Attributes
    ----------
    degree : int
        Common degree of the groups.
    groups : tuple of GroupSpec
        The groups, in a fixed order.
    method : str
        ``"exhaustive"``, ``"fixture"`` or ``"brute-force"``.

    """

    degree: int
    groups: tuple
    method: str

    def __len__(self):
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)


@lru_cache(maxsize=None)
def symmetric_elements(n):
    """All elements of Sym(n) in lexicographic order of image tuples."""
    if n > config.OPT_IN_DEGREE:
        raise UnsupportedDegreeError(
            f"Refusing to list Sym({n}); the limit is degree "
            f"{config.OPT_IN_DEGREE}"
        )
    return tuple(
        Permutation(images, check=False)
        for images in itertools.permutations(range(n))
    )


def conjugator(first, second):
    """An element ``s`` of Sym(n) with ``s^-1 first s == second``, or None."""
    if first.degree != second.degree:
        return None
    second_chain = chain_of(second)
    if chain_of(first).order != second_chain.order:
        return None
    gens = first.nontrivial_generators
    for s in symmetric_elements(first.degree):
        if all(contains(second_chain, conjugate(g, s)) for g in gens):
            return s
    return None


def are_conjugate(first, second):
    """Whether two groups are conjugate in Sym(n) (degree at most 8)."""
    return conjugator(first, second) is not None


def _cheap_invariant(group):
    return (
        chain_of(group).order,
        tuple(sorted(len(orbit) for orbit in orbits(group))),
    )


def cycle_type_histogram(group):
    """Multiset of cycle types over all elements of the group.

    Returns
    -------
    tuple of (tuple of int, int)
        Pairs ``(counts, multiplicity)`` where ``counts[k]`` is the number
        of cycles of length ``k + 1``.

    """
    n = group.degree
    rows = []
    for g in elements(chain_of(group)):
        row = np.zeros(n, dtype=np.int64)
        for length in cycle_type(g):
            row[length - 1] += 1
        rows.append(row)
    types, counts = np.unique(np.array(rows), axis=0, return_counts=True)
    return tuple(
        (tuple(int(v) for v in t), int(c)) for t, c in zip(types, counts)
    )


class ClassRegistry:
    """Subgroups of Sym(n) up to conjugacy.

    Candidates are compared by order and orbit lengths first, then by their
    cycle-type histogram, and only then by an explicit conjugator search.
    """

    def __init__(self):
        self._buckets = {}
        self.representatives = []

    def add(self, group):
        """Record ``group`` unless a conjugate is already known.

        Returns
        -------
        bool
            True when ``group`` is new.

        """
        bucket = self._buckets.setdefault(_cheap_invariant(group), [])
        if bucket:
            histogram = cycle_type_histogram(group)
            for entry in bucket:
                if entry[1] is None:
                    entry[1] = cycle_type_histogram(entry[0])
                if entry[1] == histogram and are_conjugate(group, entry[0]):
                    return False
            bucket.append([group, histogram])
        else:
            bucket.append([group, None])
        self.representatives.append(group)
        return True


def _perfect_subgroups(n):
    """Nontrivial perfect subgroups of Sym(n) up to conjugacy.

    Perfect subgroups lie in Alt(n). Each one found here is generated by an
    involution and one further element; at degree 7 and below every
    nontrivial perfect subgroup is simple and so has such generators.
    """
    even = [
        x for x in symmetric_elements(n) if is_even(x) and not x.is_identity
    ]
    involution_classes = {}
    for x in even:
        if order_of(x) == 2:
            involution_classes.setdefault(cycle_type(x), x)
    registry = ClassRegistry()
    tried = []
    for t in involution_classes.values():
        for y in even:
            group = GroupSpec(n, (t, y))
            chain = build_chain(group)
            if len(factorint(chain.order)) < 3:
                continue
            # equal order and containing both generators means equal groups
            if any(
                other.order == chain.order
                and contains(other, t)
                and contains(other, y)
                for other in tried
            ):
                continue
            tried.append(chain)
            remember_chain(group, chain)
            if subgroup_order(derived_subgroup(group)) == chain.order:
                registry.add(group)
    logger.info(
        "Degree %d: %d perfect subgroup classes",
        n,
        len(registry.representatives),
    )
    return registry.representatives


@lru_cache(maxsize=None)
def _prime_power_elements(n):
    result = []
    for x in symmetric_elements(n):
        if x.is_identity:
            continue
        primes = factorint(order_of(x))
        if len(primes) == 1:
            result.append((x, int(next(iter(primes)))))
    return tuple(result)


def _normalizes(x, group, chain):
    return all(
        contains(chain, conjugate(g, x)) for g in group.nontrivial_generators
    )


def _extensions(h):
    """Groups <h, x> for prime-power x normalising h with x**p in h,
    one per distinct group."""
    n = h.degree
    h_chain = chain_of(h)
    found = []
    result = []
    for x, p in _prime_power_elements(n):
        if contains(h_chain, x) or not contains(h_chain, x**p):
            continue
        if any(contains(chain, x) for chain in found):
            continue
        if not _normalizes(x, h, h_chain):
            continue
        extension = GroupSpec(n, tuple(h.nontrivial_generators) + (x,))
        chain = extend_chain(h_chain, [x])
        remember_chain(extension, chain)
        found.append(chain)
        result.append(extension)
    return result


def _grow(registry, frontier, mapper):
    while frontier:
        logger.debug("Extending a frontier of %d classes", len(frontier))
        next_frontier = []
        # frontier order fixes which representative of a class is kept
        for extensions in mapper(_extensions, frontier):
            for extension in extensions:
                if registry.add(extension):
                    next_frontier.append(extension)
        frontier = next_frontier


def subgroup_classes(n, jobs=1):
    """Representatives of all conjugacy classes of subgroups of Sym(n).

    Parameters
    ----------
    n : int
        Degree, at most 8.
    jobs : int
        Worker processes extending each frontier batch; deduplication
        stays in this process.

    Returns
    -------
    list of GroupSpec

    """
    registry = ClassRegistry()
    frontier = []
    for seed in [GroupSpec.trivial(n)] + _perfect_subgroups(n):
        if registry.add(seed):
            frontier.append(seed)
    if jobs > 1:
        with Pool(processes=jobs) as pool:
            _grow(registry, frontier, pool.map)
    else:
        _grow(registry, frontier, map)
    logger.info(
        "Degree %d: %d subgroup classes", n, len(registry.representatives)
    )
    return registry.representatives


def _sort_key(group):
    return (chain_of(group).order, tuple(g.images for g in group.generators))


def _check_degree(n, allow_degree_8):
    limit = config.EXHAUSTIVE_MAX_DEGREE
    if allow_degree_8:
        limit = config.OPT_IN_DEGREE
    if n < 2 or n > limit:
        hint = "" if allow_degree_8 else " (degree 8 is opt-in)"
        raise UnsupportedDegreeError(
            f"Exhaustive enumeration supports degrees 2..{limit}{hint}, "
            f"got {n}"
        )


def transitive_groups(n, allow_degree_8=False, use_cache=True, jobs=1):
    """All transitive subgroups of Sym(n) up to conjugacy.

    Parameters
    ----------
    n : int
        Degree, 2..7, or 8 with ``allow_degree_8``.
    allow_degree_8 : bool
        Permit the slow degree-8 enumeration.
    use_cache : bool
        Read and write the catalog cache named by ABELQUOT_CACHE.
    jobs : int
        Worker processes for the subgroup enumeration.

    Returns
    -------
    TransitiveCatalog

    """
    _check_degree(n, allow_degree_8)
    cache = config.cache_dir() if use_cache else None
    cached = os.path.join(cache, f"degree-{n}") if cache else None
    if cached and os.path.exists(os.path.join(cached, INDEX_FILE)):
        logger.info("Reading degree %d catalog from %s", n, cached)
        return import_catalog(cached, method="exhaustive")[n]
    found = [g for g in subgroup_classes(n, jobs) if is_transitive(g)]
    found.sort(key=_sort_key)
    groups = tuple(g.with_label(f"E{n}.{k}") for k, g in enumerate(found, 1))
    catalog = TransitiveCatalog(n, groups, "exhaustive")
    if cached:
        export_catalog(catalog, cached)
    return catalog


def _closure(generators):
    """Every element of the group generated by ``generators``."""
    start = identity(generators[0].degree)
    found = {start}
    queue = [start]
    for x in queue:
        for g in generators:
            y = x * g
            if y not in found:
                found.add(y)
                queue.append(y)
    return frozenset(found)


def _canonical_form(subgroup, n):
    return min(
        tuple(sorted(conjugate(x, s).images for x in subgroup))
        for s in symmetric_elements(n)
    )


def brute_force_transitive_groups(n):
    """Transitive subgroups of Sym(n) up to conjugacy by naive closure.

    Every subgroup of Sym(n) for ``n <= 5`` is generated by two elements, so
    closing all pairs finds them all. Used as an independent check of
    :func:`transitive_groups`.
    """
    if n < 2 or n > config.BRUTE_FORCE_MAX_DEGREE:
        raise UnsupportedDegreeError(
            f"Brute force supports degrees 2..{config.BRUTE_FORCE_MAX_DEGREE}"
        )
    members = symmetric_elements(n)
    seen = {}
    for i, a in enumerate(members):
        for b in members[i:]:
            if not is_transitive(GroupSpec(n, (a, b))):
                continue
            subgroup = _closure((a, b))
            if subgroup not in seen:
                seen[subgroup] = (a, b)
    classes = {}
    for subgroup, pair in seen.items():
        classes.setdefault(_canonical_form(subgroup, n), (len(subgroup), pair))
    groups = sorted(
        (GroupSpec(n, pair) for _, pair in classes.values()), key=_sort_key
    )
    groups = tuple(g.with_label(f"B{n}.{k}") for k, g in enumerate(groups, 1))
    return TransitiveCatalog(n, groups, "brute-force")


def cross_check(exhaustive):
    """Compare a :func:`transitive_groups` catalog with the brute-force
    oracle of the same degree.

    Returns
    -------
    bool
        True when both give the same number of classes and every
        brute-force group is conjugate to exactly one catalog group.

    """
    n = exhaustive.degree
    naive = brute_force_transitive_groups(n)
    if len(exhaustive) != len(naive):
        logger.warning(
            "Degree %d: %d classes against %d by brute force",
            n,
            len(exhaustive),
            len(naive),
        )
        return False
    return all(
        sum(are_conjugate(group, other) for other in exhaustive) == 1
        for group in naive
    )

def _add_fixture(found, group, n):
    if not is_transitive(group):
        return
    chain = chain_of(group)
    for other in found:
        if n <= config.OPT_IN_DEGREE:
            if are_conjugate(group, other):
                return
        elif chain_of(other).order == chain.order and all(
            contains(chain, g) for g in other.generators
        ):
            return
    found.append(group)


def fixtures(n):
    """Curated transitive groups of degree ``n``.

    Cyclic, dihedral, alternating and symmetric groups, AGL(1, p) for prime
    degree, and wreath products for composite degree, including iterated
    wreaths of cyclic groups of prime order at prime-power degree.

    Parameters
    ----------
    n : int
        Degree, 2..81.

    Returns
    -------
    TransitiveCatalog
        Duplicates up to conjugacy removed at degree 8 and below, equal
        groups removed above.

    """
    if n < 2 or n > config.FIXTURE_MAX_DEGREE:
        raise UnsupportedDegreeError(
            f"Fixtures exist for degrees 2..{config.FIXTURE_MAX_DEGREE}, "
            f"got {n}"
        )
    candidates = [cyclic(n)]
    if n >= 3:
        candidates.append(dihedral(n))
    if isprime(n):
        candidates.append(affine_line(n))
    if n <= 12:
        if n >= 3:
            candidates.append(alternating(n))
        candidates.append(symmetric(n))
    for r in range(2, n):
        if n % r:
            continue
        d = n // r
        candidates.append(wreath_product(cyclic(r), cyclic(d)))
        if r <= 5 and d <= 9:
            candidates.append(wreath_product(symmetric(r), symmetric(d)))
        elif r <= 5:
            candidates.append(wreath_product(symmetric(r), cyclic(d)))
    primes = factorint(n)
    if len(primes) == 1:
        p, k = next(iter(primes.items()))
        if k >= 3:
            candidates.append(iterated_wreath([cyclic(p)] * k))
    found = []
    for group in candidates:
        _add_fixture(found, group, n)
    return TransitiveCatalog(n, tuple(found), "fixture")


def export_catalog(catalog, directory):
    """Write a catalog as group files plus an index CSV.

    Returns
    -------
    str
        Path of the index file.

    """
    os.makedirs(directory, exist_ok=True)
    names = []
    for k, group in enumerate(catalog.groups, 1):
        name = f"degree{catalog.degree}-{k:03d}.grp"
        write_group_file(group, os.path.join(directory, name))
        names.append(name)
    index_path = os.path.join(directory, INDEX_FILE)
    write_catalog_index(catalog_index_frame(catalog, names), index_path)
    logger.info("Wrote %d groups to %s", len(names), directory)
    return index_path


def import_catalog(directory, method="imported"):
    """Read catalogs written by :func:`export_catalog`.

    Returns
    -------
    dict
        Maps each degree to its TransitiveCatalog, groups in index order.

    """
    index = read_catalog_index(os.path.join(directory, INDEX_FILE))
    by_degree = {}
    for row in index.itertuples(index=False):
        group = read_group_file(os.path.join(directory, row.file))
        by_degree.setdefault(int(row.degree), []).append(group)
    return {
        degree: TransitiveCatalog(degree, tuple(groups), method)
        for degree, groups in by_degree.items()
    }
