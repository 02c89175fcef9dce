"""Interval arithmetic over exact rational endpoints.

Addition, subtraction, multiplication and division are exact. The
transcendental enclosures (``ln``, ``log2``, ``sqrt``, ``2**x``, ``pi``) are
evaluated in integer fixed point with ``precision + config.GUARD_BITS``
fractional bits, every partial result rounded in the safe direction, and
the final endpoints rounded outward to ``precision`` bits.
"""
import logging
import math
from enum import IntEnum, unique
from fractions import Fraction
from functools import lru_cache

from . import config
from .errors import DomainError, IndeterminateError, InputError

logger = logging.getLogger(__name__)


@unique
class IntervalOrder(IntEnum):
    """Classification of an interval against zero."""

    STRICTLY_NEGATIVE = -2
    NONPOSITIVE = -1
    CONTAINS_ZERO = 0
    NONNEGATIVE = 1
    STRICTLY_POSITIVE = 2


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InputError(f"Cannot use {value!r} as an interval endpoint")


class Interval:
    """Closed interval ``[lo, hi]`` enclosing one real number.

    Parameters
    ----------
    lo, hi : int, Fraction or str
        Endpoints; ``hi`` defaults to ``lo`` (a point interval). Strings are
        read exactly as decimal fractions.

    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = _as_fraction(lo)
        hi = lo if hi is None else _as_fraction(hi)
        if lo > hi:
            raise InputError(f"Empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def exact(cls, value):
        return cls(value, value)

    def __repr__(self):
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def __contains__(self, value):
        if isinstance(value, Interval):
            return self.lo <= value.lo and value.hi <= self.hi
        return self.lo <= _as_fraction(value) <= self.hi

    def classify(self):
        """Position of the interval relative to zero."""
        if self.lo > 0:
            return IntervalOrder.STRICTLY_POSITIVE
        if self.hi < 0:
            return IntervalOrder.STRICTLY_NEGATIVE
        if self.lo == 0:
            return IntervalOrder.NONNEGATIVE
        if self.hi == 0:
            return IntervalOrder.NONPOSITIVE
        return IntervalOrder.CONTAINS_ZERO

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __add__(self, other):
        other = _coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.lo <= 0 <= other.hi:
            raise DomainError(
                f"Division by an interval containing zero: {other}"
            )
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def round_outward(self, precision):
        """Widen the endpoints to multiples of ``2**-precision``."""
        scale = 1 << precision
        lo = math.floor(self.lo * scale)
        hi = math.ceil(self.hi * scale)
        return Interval(Fraction(lo, scale), Fraction(hi, scale))

    def to_decimal(self, places=config.DECIMAL_PLACES):
        """Decimal strings for the endpoints, rounded outward.

        Returns
        -------
        (str, str)
            Lower end rounded down and upper end rounded up to ``places``
            decimal places.

        """
        scale = 10**places
        return (
            format_decimal(math.floor(self.lo * scale), places),
            format_decimal(math.ceil(self.hi * scale), places),
        )

    @classmethod
    def from_decimal(cls, lo, hi):
        return cls(Fraction(lo), Fraction(hi))


def _coerce(value):
    if isinstance(value, Interval):
        return value
    return Interval.exact(value)


def format_decimal(scaled, places):
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _working_bits(precision):
    if precision < 1:
        raise InputError("Precision must be a positive number of bits")
    return precision + config.GUARD_BITS


def _finish(lo_scaled, hi_scaled, bits, precision):
    scale = 1 << bits
    return Interval(
        Fraction(lo_scaled, scale), Fraction(hi_scaled, scale)
    ).round_outward(precision)


def _floor_fixed(x, bits):
    return math.floor(x * (1 << bits))


def _ceil_fixed(x, bits):
    return math.ceil(x * (1 << bits))


def _atanh_lower(t_scaled, bits):
    """Lower bound on ``atanh(t) * 2**bits`` for ``0 <= t <= 1/3``."""
    one = 1 << bits
    square = t_scaled * t_scaled // one
    power = t_scaled
    total = 0
    k = 0
    while power:
        total += power // (2 * k + 1)
        power = power * square // one
        k += 1
    return total


def _atanh_upper(t_scaled, bits):
    """Upper bound on ``atanh(t) * 2**bits`` for ``0 <= t <= 1/3``."""
    if t_scaled == 0:
        return 0
    one = 1 << bits
    square = -(-t_scaled * t_scaled // one)
    power = t_scaled
    total = 0
    k = 0
    while power > 1:
        total += -(-power // (2 * k + 1))
        power = -(-power * square // one)
        k += 1
    # remaining terms are at most power * 9/8 for t <= 1/3
    return total + 2 * power + 1


@lru_cache(maxsize=None)
def _ln2_scaled(bits):
    third = Fraction(1, 3)
    lo = 2 * _atanh_lower(_floor_fixed(third, bits), bits)
    hi = 2 * _atanh_upper(_ceil_fixed(third, bits), bits)
    return lo, hi


def _split_power_of_two(x):
    """Write ``x > 0`` as ``m * 2**e`` with ``1 <= m < 2``."""
    e = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** e
    if m < 1:
        e -= 1
        m *= 2
    elif m >= 2:
        e += 1
        m /= 2
    return m, e


def _ln_mantissa_scaled(m, bits):
    t = (m - 1) / (m + 1)
    lo = 2 * _atanh_lower(_floor_fixed(t, bits), bits)
    hi = 2 * _atanh_upper(_ceil_fixed(t, bits), bits)
    return lo, hi


def _ln_point(x, bits):
    """Enclosure of ``ln x * 2**bits`` as an unrounded Interval."""
    m, e = _split_power_of_two(x)
    m_lo, m_hi = _ln_mantissa_scaled(m, bits)
    two_lo, two_hi = _ln2_scaled(bits)
    return Interval(two_lo, two_hi) * e + Interval(m_lo, m_hi)


def _log2_point(x, bits):
    """Enclosure of ``log2 x`` (exact when ``x`` is a power of two)."""
    m, e = _split_power_of_two(x)
    m_lo, m_hi = _ln_mantissa_scaled(m, bits)
    if m_hi == 0:
        return Interval.exact(e)
    two_lo, two_hi = _ln2_scaled(bits)
    return Interval(m_lo, m_hi) / Interval(two_lo, two_hi) + e


def _positive(x, name):
    x = _coerce(x)
    if x.lo <= 0:
        raise DomainError(f"{name} needs a positive argument, got {x}")
    return x


def interval_ln(x, precision=config.DEFAULT_PRECISION):
    """Outward-rounded enclosure of the natural logarithm.

    Raises
    ------
    DomainError
        If the interval reaches zero or below.

    """
    x = _positive(x, "ln")
    bits = _working_bits(precision)
    lo = _ln_point(x.lo, bits).lo
    hi = _ln_point(x.hi, bits).hi
    scale = 1 << bits
    return Interval(lo / scale, hi / scale).round_outward(precision)


@lru_cache(maxsize=1 << 16)
def _log2_integer(n, precision):
    bits = _working_bits(precision)
    return _log2_point(Fraction(n), bits).round_outward(precision)


def interval_log2(x, precision=config.DEFAULT_PRECISION):
    """Outward-rounded enclosure of the base-2 logarithm.

    Integer arguments are cached, which keeps long sweeps cheap. Powers of
    two give exact point intervals.

    Parameters
    ----------
    x : int, Fraction or Interval
        Positive argument.
    precision : int
        Bits of the result.

    Returns
    -------
    Interval

    """
    if isinstance(x, int):
        if x <= 0:
            raise DomainError(f"log2 needs a positive argument, got {x}")
        return _log2_integer(x, precision)
    x = _positive(x, "log2")
    bits = _working_bits(precision)
    lo = _log2_point(x.lo, bits).lo
    hi = _log2_point(x.hi, bits).hi
    return Interval(lo, hi).round_outward(precision)


def interval_sqrt(x, precision=config.DEFAULT_PRECISION):
    """Outward-rounded square root; the interval must not reach below 0."""
    x = _coerce(x)
    if x.lo < 0:
        raise DomainError(f"sqrt needs a nonnegative argument, got {x}")
    bits = _working_bits(precision)
    lo = math.isqrt(_floor_fixed(x.lo, 2 * bits))
    radicand = _ceil_fixed(x.hi, 2 * bits)
    hi = math.isqrt(radicand)
    if hi * hi < radicand:
        hi += 1
    return _finish(lo, hi, bits, precision)


def _exp_lower(y_scaled, bits):
    one = 1 << bits
    term = one
    total = 0
    j = 0
    while term:
        total += term
        j += 1
        term = term * y_scaled // (one * j)
    return total


def _exp_upper(y_scaled, bits):
    one = 1 << bits
    term = one
    total = 0
    j = 0
    while term > 1:
        total += term
        j += 1
        term = -(-term * y_scaled // (one * j))
    # for 0 <= y < 1 the tail is at most twice its first term
    return total + 2 * term + 1


def _pow2_point(x, bits):
    k = math.floor(x)
    f = x - k
    two_lo, two_hi = _ln2_scaled(bits)
    y_lo = math.floor(f * two_lo)
    y_hi = math.ceil(f * two_hi)
    scale = Fraction(2) ** k
    return Interval(
        scale * Fraction(_exp_lower(y_lo, bits), 1 << bits),
        scale * Fraction(_exp_upper(y_hi, bits), 1 << bits),
    )


def interval_pow2(x, precision=config.DEFAULT_PRECISION):
    """Outward-rounded enclosure of ``2**x``."""
    x = _coerce(x)
    bits = _working_bits(precision)
    lo = _pow2_point(x.lo, bits).lo
    hi = _pow2_point(x.hi, bits).hi
    return Interval(lo, hi).round_outward(precision)


def interval_pow(base, exponent, precision=config.DEFAULT_PRECISION):
    """``base**exponent`` for a positive base.

    Computed as ``2**(exponent * log2 base)``.
    """
    base = _positive(base, "pow")
    guarded = precision + config.GUARD_BITS
    return interval_pow2(
        _coerce(exponent) * interval_log2(base, guarded), precision
    )


def _atan_inverse_scaled(m, bits):
    """``atan(1/m) * 2**bits`` truncated term by term, with its error."""
    one = 1 << bits
    total = 0
    k = 0
    while True:
        term = one // ((2 * k + 1) * m ** (2 * k + 1))
        if term == 0:
            break
        total += -term if k % 2 else term
        k += 1
    return total, k + 1


@lru_cache(maxsize=None)
def interval_pi(precision=config.DEFAULT_PRECISION):
    """Enclosure of pi from Machin's formula
    ``pi = 16 atan(1/5) - 4 atan(1/239)``."""
    bits = _working_bits(precision)
    a, err_a = _atan_inverse_scaled(5, bits)
    b, err_b = _atan_inverse_scaled(239, bits)
    centre = 16 * a - 4 * b
    error = 16 * err_a + 4 * err_b
    return _finish(centre - error, centre + error, bits, precision)


def decide(
    fn,
    precision=config.DEFAULT_PRECISION,
    max_precision=config.MAX_PRECISION,
):
    """Decide the sign of a quantity by escalating precision.

    Parameters
    ----------
    fn : callable
        ``fn(bits)`` returns an Interval enclosing the quantity when
        evaluated at ``bits`` of precision.
    precision : int
        Starting precision; doubled after every undecided evaluation.
    max_precision : int
        Largest precision tried.

    Returns
    -------
    bool
        True when the quantity is ``>= 0``, False when it is ``< 0``.

    Raises
    ------
    IndeterminateError
        When the sign is still unknown at ``max_precision`` or the enclosure
        has become narrower than ``2**-WIDTH_FLOOR_BITS`` around zero.

    """
    floor = Fraction(1, 1 << config.WIDTH_FLOOR_BITS)
    bits = precision
    while True:
        value = fn(bits)
        order = value.classify()
        if order >= IntervalOrder.NONNEGATIVE:
            return True
        if order == IntervalOrder.STRICTLY_NEGATIVE:
            return False
        if value.width < floor:
            raise IndeterminateError(
                f"Sign undecided with enclosure width below 2^-"
                f"{config.WIDTH_FLOOR_BITS}: {value}"
            )
        if bits >= max_precision:
            raise IndeterminateError(
                f"Sign undecided at {bits} bits: {value}"
            )
        logger.debug("Escalating precision from %d bits", bits)
        bits = min(2 * bits, max_precision)
