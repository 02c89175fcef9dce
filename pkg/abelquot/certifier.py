"""Certificates for the abelianization bound of transitive groups.

A transitive group is either primitive, where ``|G_ab| <= n`` gives the
bound ``log2 n``, or it has a minimal block system with block group ``R``
on ``r`` points and block action ``pi(G)`` on ``d = n / r`` blocks, where

    log2 |G_ab| <= a(R) * b' * d / sqrt(log2 d) + log2 |pi(G)_ab|.

:func:`certify` unrolls this recursion into a :class:`Certificate` tree and
:func:`verify_theorem` checks the exact abelianization against
``4**(n / sqrt(log2 n))``.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import partial, reduce
from multiprocessing import Pool
from typing import NamedTuple

from . import config
from .blocks import (
    block_action,
    block_restriction,
    induced_block_group,
    is_transitive,
    minimal_block_system,
    require_transitive,
)
from .errors import IndeterminateError, InputError
from .inequalities import constants, spread, theorem_rhs_bits
from .intervals import Interval, decide, interval_log2
from .permutation import GroupSpec, Permutation, identity, inverse
from .stabchain import chain_of, contains
from .structure import ARInvariant, a_invariant, abelianization_order

logger = logging.getLogger(__name__)


class CertificateKind(Enum):
    PRIMITIVE_BASE = "primitive-base"
    IMPRIMITIVE_STEP = "imprimitive-step"
    KP_BASE = "small-degree-KP-base"


@dataclass(frozen=True)
class Certificate:
    """One node of a certificate tree.

    Attributes
    ----------
    degree : int
        Degree of the group at this node.
    kind : CertificateKind
        How the bound at this node was obtained.
    bound : Interval
        Its upper end bounds ``log2 |G_ab|`` for the group at this node.
    r, d : int
        Block size and number of blocks (imprimitive steps only).
    ar : ARInvariant
        Abelian composition factors of the block group (steps only).
    ar_bound_holds : bool
        Whether a(R) stays within
        :func:`~abelquot.inequalities.primitive_ar_bound` for the primitive
        block group (steps only).
    term : Interval
        ``a(R) * b' * d / sqrt(log2 d)`` (steps only).
    child : Certificate
        Certificate of the block action (steps only).
    label : str
        Label of the group, if any.

    """

    degree: int
    kind: CertificateKind
    bound: Interval
    r: int = None
    d: int = None
    ar: ARInvariant = None
    term: Interval = None
    child: "Certificate" = None
    label: str = field(default="", compare=False)
    ar_bound_holds: bool = field(default=None, compare=False)

    @property
    def bound_hi(self):
        return self.bound.hi

    def nodes(self):
        """Nodes from the root down to the leaf."""
        node = self
        while node is not None:
            yield node
            node = node.child

    @property
    def leaf(self):
        return list(self.nodes())[-1]


@dataclass(frozen=True)
class WreathSpec:
    """A bottom group ``R`` on ``r`` points and a top group ``T`` on ``d``
    points; :meth:`build` gives the imprimitive wreath product on ``r * d``
    points."""

    bottom: GroupSpec
    top: GroupSpec

    @property
    def degree(self):
        return self.bottom.degree * self.top.degree

    def build(self):
        return wreath_product(self.bottom, self.top)


def wreath_product(bottom, top):
    """Imprimitive wreath product ``bottom wr top``.

    Point ``i`` of fiber ``j`` is numbered ``j * r + i``. Each generator of
    ``bottom`` acts on fiber 0 only and each generator of ``top`` permutes
    the fibers rigidly, so for transitive ``top`` the result is the full
    wreath product with the fibers as blocks.

    Parameters
    ----------
    bottom : GroupSpec
        Group ``R`` of degree ``r``.
    top : GroupSpec
        Group ``T`` of degree ``d``.

    Returns
    -------
    GroupSpec
        Group of degree ``r * d``.

    """
    r, d = bottom.degree, top.degree
    n = r * d
    generators = []
    for g in bottom.nontrivial_generators:
        images = list(range(n))
        images[:r] = g.images
        generators.append(Permutation(images, check=False))
    for t in top.nontrivial_generators:
        images = [t.images[j] * r + i for j in range(d) for i in range(r)]
        generators.append(Permutation(images, check=False))
    if not generators:
        generators.append(identity(n))
    label = ""
    if bottom.label and top.label:
        label = f"{bottom.label} wr {top.label}"
    return GroupSpec(n, tuple(generators), label)


def iterated_wreath(groups):
    """Left-nested wreath product ``((g0 wr g1) wr g2) ...``."""
    if not groups:
        raise InputError("Need at least one group for an iterated wreath")
    return reduce(wreath_product, groups)


class HypothesisReport(NamedTuple):
    """Outcome of :func:`hypothesis_check`."""

    block_action_transitive: bool
    block_groups_agree: bool
    diagnostics: list

    def __bool__(self):
        return self.block_action_transitive and self.block_groups_agree


def _same_group(first, second):
    first_chain, second_chain = chain_of(first), chain_of(second)
    return (
        first_chain.order == second_chain.order
        and all(contains(second_chain, g) for g in first.generators)
        and all(contains(first_chain, g) for g in second.generators)
    )


def _transport(local_group, source, target, u):
    """Move a group on block ``source`` to block ``target`` along ``u``."""
    position = {point: k for k, point in enumerate(target)}
    sigma = Permutation(
        [position[u.images[point]] for point in source], check=False
    )
    sigma_inverse = inverse(sigma)
    generators = tuple(
        sigma_inverse * g * sigma for g in local_group.generators
    )
    return GroupSpec(len(target), generators)


def hypothesis_check(group, system):
    """Check the two structural hypotheses of the imprimitive step.

    (1) The group permutes the blocks transitively. (2) For every block,
    the group its setwise stabilizer induces on it is the block group of
    block 0 carried over by an element mapping block 0 to it.

    Parameters
    ----------
    group : GroupSpec
        The group.
    system : BlockSystem
        A block system of ``group``.

    Returns
    -------
    HypothesisReport
        Truthy when both hypotheses hold.

    Raises
    ------
    BlockInvarianceError
        If ``system`` is not invariant under ``group``.

    """
    system.check_invariant(group)
    diagnostics = []
    top = block_action(group, system)
    transitive = is_transitive(top)
    if not transitive:
        diagnostics.append("block action is not transitive")

    reference = induced_block_group(group, system, 0)
    carriers = {0: identity(group.degree)}
    queue = [0]
    for delta in queue:
        for g, bg in zip(group.generators, top.generators):
            image = bg.images[delta]
            if image not in carriers:
                carriers[image] = carriers[delta] * g
                queue.append(image)

    agree = True
    for delta in range(system.block_count):
        if delta not in carriers:
            agree = False
            diagnostics.append(f"block {delta} is not reachable from block 0")
            continue
        induced = induced_block_group(group, system, delta)
        expected = _transport(
            reference, system.blocks[0], system.blocks[delta], carriers[delta]
        )
        if not _same_group(induced, expected):
            agree = False
            diagnostics.append(
                f"group induced on block {delta} differs from block 0"
            )
    return HypothesisReport(transitive, agree, diagnostics)


def _kp_bits(n, precision):
    return (constants(precision).log3 * n / 3).round_outward(precision)


def certify(
    group,
    kp_base_degree=0,
    precision=config.DEFAULT_PRECISION,
    cap=None,
):
    """Build a certificate bounding ``log2 |G_ab|`` for a transitive group.

    Parameters
    ----------
    group : GroupSpec
        Transitive group of degree at least 2.
    kp_base_degree : int
        Nodes of degree at most this become leaves with the bound
        ``(n / 3) log2 3``, valid for every permutation group.
    precision : int
        Working precision in bits.
    cap : int
        Order cap for the composition factors of block groups.

    Returns
    -------
    Certificate

    """
    if group.degree < 2:
        raise InputError("Certificates need degree at least 2")
    require_transitive(group)
    n = group.degree
    if n <= kp_base_degree:
        return Certificate(
            n,
            CertificateKind.KP_BASE,
            _kp_bits(n, precision),
            label=group.label,
        )
    system = minimal_block_system(group)
    if system is None:
        return Certificate(
            n,
            CertificateKind.PRIMITIVE_BASE,
            interval_log2(n, precision),
            label=group.label,
        )
    r, d = system.block_size, system.block_count
    ar = a_invariant(block_restriction(group, system), cap)
    term = (
        ar.bits(precision) * constants(precision).bprime * spread(d, precision)
    ).round_outward(precision)
    ar_bound_holds = ar.ar_bound_holds(r, precision)
    if not ar_bound_holds:
        logger.warning(
            "Degree %d: a(R) for r=%d exceeds the primitive bound", n, r
        )
    child = certify(
        block_action(group, system), kp_base_degree, precision, cap
    )
    logger.debug(
        "Degree %d: r=%d, d=%d, a(R) counts %s", n, r, d, ar.as_dict()
    )
    return Certificate(
        n,
        CertificateKind.IMPRIMITIVE_STEP,
        child.bound + term,
        r=r,
        d=d,
        ar=ar,
        term=term,
        child=child,
        label=group.label,
        ar_bound_holds=ar_bound_holds,
    )


@dataclass(frozen=True)
class TheoremReport:
    """Result of :func:`verify_theorem` for one group.

    Attributes
    ----------
    holds : bool
        ``|G_ab| <= 4**(n / sqrt(log2 n))``, decided rigorously.
    kp_holds : bool
        ``|G_ab| <= 3**(n/3)``, compared exactly as ``m**3 <= 3**n``.
    primitive_bound_holds : bool or None
        ``|G_ab| <= n`` for primitive groups, None otherwise.
    certificate_suffices : bool
        Whether the certificate's bound alone is below the theorem bound.
    block_bounds_hold : bool
        Whether every imprimitive step of the certificate has a block group
        within the primitive a(R) bound.

    """

    label: str
    degree: int
    order: int
    abelianization_order: int
    log2_abelianization: Interval
    theorem_rhs: Interval
    holds: bool
    kp_holds: bool
    primitive: bool
    primitive_bound_holds: bool
    certificate: Certificate
    certificate_suffices: bool
    certificate_sound: bool
    block_bounds_hold: bool


def verify_theorem(
    group,
    precision=config.DEFAULT_PRECISION,
    cap=None,
    kp_base_degree=0,
):
    """Check the abelianization bound for one transitive group.

    Parameters
    ----------
    group : GroupSpec
        Transitive group of degree at least 2.
    precision : int
        Starting precision in bits.
    cap : int
        Order cap for composition factors of block groups.
    kp_base_degree : int
        Passed on to :func:`certify`.

    Returns
    -------
    TheoremReport

    Raises
    ------
    IndeterminateError
        If a comparison cannot be decided at the precision floor.

    """
    if group.degree < 2:
        raise InputError("The bound is stated for degree at least 2")
    require_transitive(group)
    n = group.degree
    m = abelianization_order(group)
    holds = decide(
        lambda bits: theorem_rhs_bits(n, bits) - interval_log2(m, bits),
        precision,
    )
    certificate = certify(group, kp_base_degree, precision, cap)
    primitive = certificate.kind is CertificateKind.PRIMITIVE_BASE
    rhs = theorem_rhs_bits(n, precision)
    log2_m = interval_log2(m, precision)
    report = TheoremReport(
        label=group.label,
        degree=n,
        order=chain_of(group).order,
        abelianization_order=m,
        log2_abelianization=log2_m,
        theorem_rhs=rhs,
        holds=holds,
        kp_holds=m**3 <= 3**n,
        primitive=primitive,
        primitive_bound_holds=(m <= n) if primitive else None,
        certificate=certificate,
        certificate_suffices=certificate.bound.hi <= rhs.lo,
        certificate_sound=log2_m.hi <= certificate.bound.hi
        or decide(
            lambda bits: Interval.exact(certificate.bound.hi)
            - interval_log2(m, bits),
            precision,
        ),
        block_bounds_hold=all(
            node.ar_bound_holds
            for node in certificate.nodes()
            if node.kind is CertificateKind.IMPRIMITIVE_STEP
        ),
    )
    logger.info(
        "%s (n=%d): |G_ab| = %d, bound holds: %s",
        group.label or "group",
        n,
        m,
        holds,
    )
    return report


def _verify_or_undecided(group, **kwargs):
    try:
        return verify_theorem(group, **kwargs)
    except IndeterminateError as e:
        return e


def verify_many(groups, jobs=1, keep_going=False, **kwargs):
    """Run :func:`verify_theorem` on many groups, keeping input order.

    Parameters
    ----------
    groups : iterable of GroupSpec
        Groups to check.
    jobs : int
        Worker processes; 1 runs in this process.
    keep_going : bool
        Return an IndeterminateError in place of the report of a group
        whose comparison stayed undecided, instead of raising it.
    **kwargs
        Passed to :func:`verify_theorem`.

    Returns
    -------
    list of TheoremReport

    """
    groups = list(groups)
    target = _verify_or_undecided if keep_going else verify_theorem
    worker = partial(target, **kwargs)
    if jobs > 1 and len(groups) > 1:
        with Pool(processes=jobs) as pool:
            return pool.map(worker, groups)
    return [worker(group) for group in groups]
