"""The numeric side of the abelianization bound: the constants c0 and b',
the crossover with the 3**(n/3) bound, the block-group bound on a(R) and
the finite sweep of the imprimitive-case inequality.

All quantities are Intervals measured in bits (base-2 logarithms).
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from multiprocessing import Pool
from typing import NamedTuple

from sympy import divisors

from . import config
from .errors import IndeterminateError, InputError
from .intervals import (
    Interval,
    decide,
    interval_log2,
    interval_pi,
    interval_pow2,
    interval_sqrt,
)

logger = logging.getLogger(__name__)

SWEEP_CHUNK = 2000


@dataclass(frozen=True)
class Constants:
    """Enclosures of the constants used by the bound.

    Attributes
    ----------
    c0 : Interval
        ``log_9(48 * 24**(1/3))``.
    bprime : Interval
        ``2 / sqrt(pi)``.
    log24_over_3 : Interval
        ``log2(24) / 3``.
    log3 : Interval
        ``log2(3)``.
    cube_root_24 : Interval
        ``24**(1/3)``.
    kp_exponent : Interval
        ``36 / log2(3)**2``; ``2**kp_exponent`` is the crossover degree.

    """

    precision: int
    c0: Interval
    bprime: Interval
    log24_over_3: Interval
    log3: Interval
    cube_root_24: Interval
    kp_exponent: Interval


@lru_cache(maxsize=None)
def constants(precision=config.DEFAULT_PRECISION):
    log3 = interval_log2(3, precision)
    log24_over_3 = (interval_log2(24, precision) / 3).round_outward(precision)
    c0 = (
        (interval_log2(48, precision) + log24_over_3)
        / interval_log2(9, precision)
    ).round_outward(precision)
    root_pi = interval_sqrt(interval_pi(precision), precision)
    bprime = (2 / root_pi).round_outward(precision)
    return Constants(
        precision=precision,
        c0=c0,
        bprime=bprime,
        log24_over_3=log24_over_3,
        log3=log3,
        cube_root_24=interval_pow2(log24_over_3, precision),
        kp_exponent=(36 / (log3 * log3)).round_outward(precision),
    )


class ConstantRow(NamedTuple):
    name: str
    lo: str
    hi: str
    width: float


def constants_report(precision=config.DEFAULT_PRECISION, places=None):
    """Decimal expansions of every constant, with enclosure widths.

    Returns
    -------
    list of ConstantRow

    """
    places = config.DECIMAL_PLACES if places is None else places
    values = constants(precision)
    named = [
        ("c0", values.c0),
        ("bprime", values.bprime),
        ("log2(24)/3", values.log24_over_3),
        ("log2(3)", values.log3),
        ("24^(1/3)", values.cube_root_24),
        ("36/log2(3)^2", values.kp_exponent),
        ("kp_threshold", Interval.exact(kp_threshold(precision))),
    ]
    rows = []
    for name, value in named:
        lo, hi = value.to_decimal(places)
        rows.append(ConstantRow(name, lo, hi, float(value.width)))
    return rows


def kp_threshold(precision=config.DEFAULT_PRECISION):
    """Largest ``n`` with ``3**(n/3) <= 4**(n/sqrt(log2 n))``.

    The inequality is equivalent to ``log2 n <= 36 / log2(3)**2``, so the
    answer is ``floor(2**(36/log2(3)**2))``; precision is raised until the
    floor of the enclosure is unambiguous.
    """
    bits = precision
    while True:
        value = interval_pow2(constants(bits).kp_exponent, bits)
        lo, hi = math.floor(value.lo), math.floor(value.hi)
        if lo == hi:
            return lo
        if bits >= config.MAX_PRECISION:
            raise IndeterminateError(f"Threshold floor undecided: {value}")
        bits *= 2


def _require_degree(n):
    if n < 2:
        raise InputError(f"Degree must be at least 2, got {n}")


@lru_cache(maxsize=1 << 16)
def spread(d, precision):
    """Enclosure of ``d / sqrt(log2 d)``."""
    root = interval_sqrt(interval_log2(d, precision), precision)
    return (Interval.exact(d) / root).round_outward(precision)


def theorem_rhs_bits(n, precision=config.DEFAULT_PRECISION):
    """``2n / sqrt(log2 n)``: the bound on ``log2 |G_ab|`` for degree ``n``."""
    _require_degree(n)
    return 2 * spread(n, precision)


def kp_bound_holds(n, precision=config.DEFAULT_PRECISION):
    """Decide ``3**(n/3) <= 4**(n/sqrt(log2 n))``."""
    _require_degree(n)
    return decide(
        lambda bits: theorem_rhs_bits(n, bits) - constants(bits).log3 * n / 3,
        precision=precision,
    )


def primitive_case_holds(n, precision=config.DEFAULT_PRECISION):
    """Decide ``n <= 4**(n/sqrt(log2 n))``, the bound used for primitive
    groups."""
    _require_degree(n)
    return decide(
        lambda bits: theorem_rhs_bits(n, bits) - interval_log2(n, bits),
        precision=precision,
    )


def primitive_ar_bound(r, precision=config.DEFAULT_PRECISION):
    """``(1 + c0) log2 r - log2(24) / 3``, the bound on a(R) for a
    primitive block group of degree ``r``."""
    if r < 2:
        raise InputError(f"Block size must be at least 2, got {r}")
    values = constants(precision)
    return (
        (1 + values.c0) * interval_log2(r, precision) - values.log24_over_3
    ).round_outward(precision)


def ar_bound(r, precision=config.DEFAULT_PRECISION):
    """Largest possible a(R) used in the sweep for block size ``r``.

    Exact extremes for ``r <= 4`` (C2, S3 and S4), otherwise
    :func:`primitive_ar_bound`.
    """
    if r == 2:
        return Interval.exact(1)
    if r == 3:
        return 1 + interval_log2(3, precision)
    if r == 4:
        return 3 + interval_log2(3, precision)
    return primitive_ar_bound(r, precision)


@lru_cache(maxsize=4096)
def _aux_factor(r, precision):
    return (
        constants(precision).bprime * ar_bound(r, precision) + 2
    ).round_outward(precision)


def rhs_aux(n, r, precision=config.DEFAULT_PRECISION, bprime=None):
    """Right-hand side of the imprimitive-case inequality in bits.

    ``b' * a * d / sqrt(log2 d) + 2d / sqrt(log2 d)`` with ``d = n / r`` and
    ``a`` the a(R) bound of :func:`ar_bound`.

    Parameters
    ----------
    n : int
        Degree.
    r : int
        Block size, a divisor of ``n`` with ``n / r >= 2``.
    precision : int
        Working precision in bits.
    bprime : Interval
        Replacement for ``2 / sqrt(pi)``; only for exercising the checker.

    Returns
    -------
    Interval

    """
    if r < 2 or n % r or n // r < 2:
        raise InputError(
            f"Block size {r} must divide {n} with at least two blocks"
        )
    if bprime is None:
        factor = _aux_factor(r, precision)
    else:
        factor = bprime * ar_bound(r, precision) + 2
    return spread(n // r, precision) * factor


class AuxViolation(NamedTuple):
    n: int
    r: int
    rhs_aux_hi: float
    theorem_rhs_lo: float


class SweepRow(NamedTuple):
    """Tightest check for one degree; ``r = 1`` stands for the primitive
    case ``log2 n``."""

    n: int
    r: int
    rhs_aux_hi: float
    theorem_rhs_lo: float
    margin: float


class SweepResult(NamedTuple):
    rows: list
    violations: list


def _holds(n, r, precision, bprime):
    """Compare the two sides, escalating precision only when they overlap."""

    def lhs(bits):
        if r == 1:
            return interval_log2(n, bits)
        return rhs_aux(n, r, bits, bprime)

    left = lhs(precision)
    right = theorem_rhs_bits(n, precision)
    if left.hi <= right.lo:
        return True, left, right
    holds = decide(
        lambda bits: theorem_rhs_bits(n, bits) - lhs(bits), precision
    )
    return holds, left, right


def _sweep_range(payload):
    start, stop, precision, bprime = payload
    rows = []
    violations = []
    for n in range(start, stop):
        block_sizes = [r for r in divisors(n) if 2 <= r < n]
        worst = None
        for r in [1] + block_sizes:
            holds, left, right = _holds(n, r, precision, bprime)
            margin = right.lo - left.hi
            if worst is None or margin < worst[0]:
                worst = (margin, r, left, right)
            if not holds:
                violations.append(
                    AuxViolation(n, r, float(left.hi), float(right.lo))
                )
        margin, r, left, right = worst
        rows.append(
            SweepRow(n, r, float(left.hi), float(right.lo), float(margin))
        )
    return rows, violations


def sweep_margins(
    n_min=config.SWEEP_NMIN,
    n_max=config.SWEEP_NMAX,
    precision=config.DEFAULT_PRECISION,
    jobs=1,
    bprime=None,
):
    """Check the imprimitive-case inequality for every degree in a range.

    For every ``n`` and every divisor ``r`` of ``n`` with ``2 <= r < n`` the
    value :func:`rhs_aux` must not exceed :func:`theorem_rhs_bits`; the
    primitive case ``log2 n`` is checked too.

    Parameters
    ----------
    n_min, n_max : int
        Inclusive range; ``n_min`` may not be below ``config.SWEEP_NMIN``,
        where the small-degree bound takes over.
    precision : int
        Starting precision in bits.
    jobs : int
        Worker processes; the range is split into chunks and merged in
        order, so the result does not depend on ``jobs``.
    bprime : Interval
        Optional replacement for ``b'``.

    Returns
    -------
    SweepResult
        One row per degree (its tightest check) and the violations found.

    """
    if n_min < config.SWEEP_NMIN:
        raise InputError(
            f"Sweep must start at n >= {config.SWEEP_NMIN}; below that the "
            f"3^(n/3) bound applies"
        )
    if n_max < n_min:
        raise InputError(f"Empty sweep range {n_min}..{n_max}")
    payloads = [
        (start, min(start + SWEEP_CHUNK, n_max + 1), precision, bprime)
        for start in range(n_min, n_max + 1, SWEEP_CHUNK)
    ]
    rows = []
    violations = []
    if jobs > 1:
        logger.info(
            "Sweeping %d..%d on %d processes (%d chunks)",
            n_min,
            n_max,
            jobs,
            len(payloads),
        )
        with Pool(processes=jobs) as pool:
            for chunk_rows, chunk_violations in pool.imap(
                _sweep_range, payloads
            ):
                rows.extend(chunk_rows)
                violations.extend(chunk_violations)
    else:
        for payload in payloads:
            chunk_rows, chunk_violations = _sweep_range(payload)
            rows.extend(chunk_rows)
            violations.extend(chunk_violations)
            logger.debug("Swept up to n=%d", payload[1] - 1)
    logger.info(
        "Sweep %d..%d finished with %d violations",
        n_min,
        n_max,
        len(violations),
    )
    return SweepResult(rows, violations)


def check_aux_sweep(
    n_min=config.SWEEP_NMIN,
    n_max=config.SWEEP_NMAX,
    precision=config.DEFAULT_PRECISION,
    jobs=1,
    bprime=None,
):
    """Violations of :func:`sweep_margins`; empty when the inequality holds
    throughout the range."""
    return sweep_margins(n_min, n_max, precision, jobs, bprime).violations
