"""Orbits, blocks of imprimitivity and the two groups a block system
induces: the action on the blocks and the action of a block stabilizer on
its block.
"""
import logging
from dataclasses import dataclass

from .errors import BlockInvarianceError, InputError, NotTransitiveError
from .permutation import GroupSpec, Permutation, identity, inverse, restricted

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockSystem:
    """A partition of the domain into blocks of equal size.

    Attributes
    ----------
    degree : int
        Size of the domain, ``n``.
    blocks : tuple of tuple of int
        The blocks, each sorted, ordered by their smallest point.
    block_of : tuple of int
        ``block_of[point]`` is the index of the block holding ``point``.

    """

    degree: int
    blocks: tuple
    block_of: tuple

    @classmethod
    def from_blocks(cls, degree, blocks):
        """Validate and normalise a partition into equal-size blocks."""
        blocks = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0])
        block_of = [None] * degree
        for index, block in enumerate(blocks):
            for point in block:
                if point < 0 or point >= degree:
                    raise InputError(
                        f"Point {point} is outside 0..{degree - 1}"
                    )
                if block_of[point] is not None:
                    raise InputError(f"Point {point} lies in two blocks")
                block_of[point] = index
        if None in block_of:
            raise InputError("Blocks do not cover the domain")
        if len({len(b) for b in blocks}) != 1:
            raise InputError("Blocks must all have the same size")
        return cls(degree, tuple(blocks), tuple(block_of))

    @property
    def block_size(self):
        """The block size ``r``."""
        return len(self.blocks[0])

    @property
    def block_count(self):
        """The number of blocks ``d = n / r``."""
        return len(self.blocks)

    @property
    def is_trivial(self):
        return self.block_size in (1, self.degree)

    def check_invariant(self, group):
        """Raise BlockInvarianceError unless every generator maps blocks to
        blocks."""
        for g in group.generators:
            for block in self.blocks:
                target = self.block_of[g.images[block[0]]]
                if any(self.block_of[g.images[p]] != target for p in block):
                    raise BlockInvarianceError(
                        f"Generator {g} does not preserve block "
                        f"{tuple(p + 1 for p in block)}"
                    )


def orbits(group):
    """Orbit partition of the domain.

    Returns
    -------
    list of list of int
        Sorted orbits, ordered by their smallest point.

    """
    seen = [False] * group.degree
    result = []
    gens = group.generators
    for start in range(group.degree):
        if seen[start]:
            continue
        seen[start] = True
        orbit = [start]
        for point in orbit:
            for g in gens:
                image = g.images[point]
                if not seen[image]:
                    seen[image] = True
                    orbit.append(image)
        result.append(sorted(orbit))
    return result


def is_transitive(group):
    return len(orbits(group)) == 1


def require_transitive(group):
    if not is_transitive(group):
        name = f" {group.label}" if group.label else ""
        raise NotTransitiveError(
            f"Group{name} of degree {group.degree} is not transitive"
        )


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def _finest_invariant_partition(group, alpha, beta):
    parent = list(range(group.degree))
    parent[_find(parent, beta)] = _find(parent, alpha)
    pending = [(alpha, beta)]
    while pending:
        a, b = pending.pop()
        for g in group.generators:
            ra = _find(parent, g.images[a])
            rb = _find(parent, g.images[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
                pending.append((g.images[a], g.images[b]))
    return [_find(parent, x) for x in range(group.degree)]


def minimal_block(group, seed):
    """Smallest block containing both points of ``seed``.

    Runs Atkinson's union-find refinement: the seed pair is merged and
    every merge is pushed through all generators until the partition is
    invariant.

    Parameters
    ----------
    group : GroupSpec
        A transitive group.
    seed : (int, int)
        Two distinct points.

    Returns
    -------
    tuple of int
        The sorted block.

    """
    require_transitive(group)
    alpha, beta = seed
    if alpha == beta:
        raise InputError("Seed points must be distinct")
    roots = _finest_invariant_partition(group, alpha, beta)
    root = roots[alpha]
    return tuple(p for p in range(group.degree) if roots[p] == root)


def block_system_from_block(group, block):
    """The block system formed by the images of ``block``."""
    block = frozenset(block)
    found = {block}
    queue = [block]
    for current in queue:
        for g in group.generators:
            image = frozenset(g.images[p] for p in current)
            if image not in found:
                if any(image & other for other in found):
                    raise BlockInvarianceError(
                        f"{sorted(p + 1 for p in block)} is not a block"
                    )
                found.add(image)
                queue.append(image)
    covered = set().union(*found)
    if len(covered) != group.degree:
        raise NotTransitiveError(
            "Block images do not cover the domain; group is not transitive"
        )
    return BlockSystem.from_blocks(group.degree, found)


def minimal_block_system(group):
    """System generated by an inclusion-minimal nontrivial block.

    Among the blocks ``minimal_block(0, beta)`` for ``beta != 0`` the
    smallest proper one is taken, ties broken by the smallest ``beta``.

    Parameters
    ----------
    group : GroupSpec
        A transitive group of degree at least 2.

    Returns
    -------
    BlockSystem or None
        None when the group is primitive.

    """
    if group.degree < 2:
        raise InputError("Block systems need degree at least 2")
    require_transitive(group)
    best = None
    for beta in range(1, group.degree):
        block = minimal_block(group, (0, beta))
        if len(block) == group.degree:
            continue
        if best is None or len(block) < len(best):
            best = block
            if len(best) == 2:
                break
    if best is None:
        return None
    system = block_system_from_block(group, best)
    logger.debug(
        "Minimal block system of %s: r=%d, d=%d",
        group.label or "group",
        system.block_size,
        system.block_count,
    )
    return system


def is_primitive(group):
    return minimal_block_system(group) is None


def _block_permutation(g, system):
    system_images = []
    for block in system.blocks:
        target = system.block_of[g.images[block[0]]]
        if any(system.block_of[g.images[p]] != target for p in block):
            raise BlockInvarianceError(
                f"Generator {g} does not preserve the block system"
            )
        system_images.append(target)
    return Permutation(system_images, check=False)


def block_action(group, system):
    """The image of the group acting on the blocks of ``system``.

    Returns
    -------
    GroupSpec
        Group of degree ``system.block_count``; generator ``k`` is the
        block permutation induced by generator ``k`` of ``group``.

    """
    generators = tuple(_block_permutation(g, system) for g in group.generators)
    label = f"pi({group.label})" if group.label else ""
    return GroupSpec(system.block_count, generators, label)


def block_stabilizer_generators(group, system, index):
    """Schreier generators of the setwise stabilizer of one block.

    The stabilizer is the preimage of the point stabilizer of ``index`` in
    the block action. Transversal elements are the group elements sending
    block ``index`` to each block of its orbit.

    Returns
    -------
    list of Permutation
        Generators of the stabilizer in ``group`` (degree ``n``), without
        repetition; empty when the stabilizer is trivial.

    """
    block_gens = [(g, _block_permutation(g, system)) for g in group.generators]
    transversal = {index: identity(group.degree)}
    queue = [index]
    for delta in queue:
        u = transversal[delta]
        for g, bg in block_gens:
            image = bg.images[delta]
            if image not in transversal:
                transversal[image] = u * g
                queue.append(image)
    inverses = {delta: inverse(u) for delta, u in transversal.items()}
    seen = set()
    result = []
    for delta in queue:
        u = transversal[delta]
        for g, bg in block_gens:
            h = u * g * inverses[bg.images[delta]]
            if not h.is_identity and h not in seen:
                seen.add(h)
                result.append(h)
    return result


def induced_block_group(group, system, index):
    """Group induced on block ``index`` by its setwise stabilizer.

    Unlike :func:`block_restriction` this does not require transitivity;
    points are relabelled by their sorted order inside the block.
    """
    block = system.blocks[index]
    local = set()
    for h in block_stabilizer_generators(group, system, index):
        image = restricted(h, block)
        if not image.is_identity:
            local.add(image)
    generators = tuple(sorted(local)) or (identity(len(block)),)
    label = f"R({group.label})" if group.label else ""
    return GroupSpec(len(block), generators, label)


def block_restriction(group, system, index=0):
    """The block group ``R``: the setwise stabilizer restricted to a block.

    Parameters
    ----------
    group : GroupSpec
        A transitive group.
    system : BlockSystem
        A block system of ``group``.
    index : int
        Which block to restrict to.

    Returns
    -------
    GroupSpec
        Group of degree ``system.block_size``.

    """
    if system.is_trivial:
        raise InputError("Block restriction needs a nontrivial block system")
    require_transitive(group)
    return induced_block_group(group, system, index)
