from fractions import Fraction

import mpmath
import numpy as np
import pytest

from abelquot.errors import DomainError, IndeterminateError, InputError
from abelquot.intervals import (
    Interval,
    IntervalOrder,
    decide,
    interval_ln,
    interval_log2,
    interval_pi,
    interval_pow,
    interval_pow2,
    interval_sqrt,
)

mpmath.mp.dps = 60


def _encloses(interval, reference):
    """Compare against a 60-digit mpmath value, exactly."""
    mantissa, exponent = mpmath.mpf(reference).man_exp
    value = Fraction(int(mantissa)) * Fraction(2) ** int(exponent)
    slack = abs(value) / 10**50 + Fraction(1, 10**55)
    return interval.lo - slack <= value <= interval.hi + slack


def test_interval_basics():
    x = Interval(1, 2)
    y = Interval("0.5", "1.5")
    assert (x + y) == Interval("1.5", "3.5")
    assert (x - y) == Interval("-0.5", "1.5")
    assert (x * y) == Interval("0.5", 3)
    assert (x / Interval(2)) == Interval("0.5", 1)
    assert (Interval(-1, 2) * Interval(-3, 1)) == Interval(-6, 3)
    assert 1 - x == Interval(-1, 0)
    assert Fraction(3, 2) in x
    assert Interval("1.2", "1.3") in x
    assert x.width == 1
    assert x.mid == Fraction(3, 2)
    with pytest.raises(InputError):
        Interval(2, 1)
    with pytest.raises(DomainError):
        x / Interval(-1, 1)


def test_classify():
    assert Interval(1, 2).classify() is IntervalOrder.STRICTLY_POSITIVE
    assert Interval(-2, -1).classify() is IntervalOrder.STRICTLY_NEGATIVE
    assert Interval(0, 1).classify() is IntervalOrder.NONNEGATIVE
    assert Interval(-1, 0).classify() is IntervalOrder.NONPOSITIVE
    assert Interval(-1, 1).classify() is IntervalOrder.CONTAINS_ZERO


def test_round_outward_and_decimal():
    third = Interval(Fraction(1, 3))
    rounded = third.round_outward(10)
    assert Fraction(1, 3) in rounded
    assert rounded.width <= Fraction(1, 1 << 10)
    assert Interval(Fraction(1, 3)).to_decimal(4) == ("0.3333", "0.3334")
    assert Interval(Fraction(-1, 3)).to_decimal(2) == ("-0.34", "-0.33")
    assert Interval(2).to_decimal(3) == ("2.000", "2.000")


def test_log2_exact_powers():
    assert interval_log2(4) == Interval(2)
    assert interval_log2(1) == Interval(0)
    assert interval_log2(Fraction(1, 8)) == Interval(-3)
    assert interval_log2(2, precision=64).width <= Fraction(1, 1 << 64)
    with pytest.raises(DomainError):
        interval_log2(0)
    with pytest.raises(DomainError):
        interval_ln(Interval(-1, 2))


@pytest.mark.parametrize("precision", [64, 128, 256])
def test_known_constants(precision):
    assert _encloses(interval_sqrt(2, precision), mpmath.sqrt(2))
    assert _encloses(interval_pow2(Fraction(1, 2), precision), mpmath.sqrt(2))
    assert _encloses(interval_pi(precision), mpmath.pi)
    assert _encloses(interval_ln(2, precision), mpmath.log(2))
    assert _encloses(interval_log2(3, precision), mpmath.log(3, 2))
    cube_root = interval_pow(24, Fraction(1, 3), precision)
    assert _encloses(cube_root, mpmath.cbrt(24))
    for value in (interval_pi(precision), interval_log2(3, precision)):
        assert value.width <= Fraction(4, 1 << precision)


def test_sqrt_of_pow2():
    value = interval_sqrt(interval_pow2(3))
    assert _encloses(value, mpmath.sqrt(8))
    assert value.width < Fraction(1, 1 << 100)


def test_soundness_random_rationals():
    rng = np.random.default_rng(1234)
    for _ in range(300):
        numerator = int(rng.integers(1, 10**9))
        denominator = int(rng.integers(1, 10**6))
        x = Fraction(numerator, denominator)
        reference = mpmath.mpf(numerator) / denominator
        assert _encloses(interval_ln(x), mpmath.log(reference))
        assert _encloses(interval_log2(x), mpmath.log(reference, 2))
        assert _encloses(interval_sqrt(x), mpmath.sqrt(reference))
        exponent = Fraction(int(rng.integers(-4000, 4000)), 100)
        power = mpmath.power(
            2, mpmath.mpf(exponent.numerator) / exponent.denominator
        )
        assert _encloses(interval_pow2(exponent), power)


def test_interval_arguments():
    value = interval_log2(Interval(2, 4))
    assert value.lo <= 1 and value.hi >= 2
    value = interval_sqrt(Interval(4, 9))
    assert value.lo <= 2 and value.hi >= 3
    with pytest.raises(DomainError):
        interval_sqrt(Interval(-1, 1))


def test_decide():
    assert decide(lambda bits: interval_log2(3, bits) - Interval("1.58"))
    assert not decide(lambda bits: Interval("1.58") - interval_log2(3, bits))
    assert decide(lambda bits: Interval(0))

    calls = []

    def shrinking(bits):
        calls.append(bits)
        return interval_log2(3, bits) - Interval("1.584962500721156")

    assert decide(shrinking, precision=8)
    assert calls[0] == 8

    with pytest.raises(IndeterminateError):
        decide(lambda bits: Interval(-1, 1), max_precision=256)
    tiny = Fraction(1, 1 << 300)
    with pytest.raises(IndeterminateError):
        decide(lambda bits: Interval(-tiny, tiny))
