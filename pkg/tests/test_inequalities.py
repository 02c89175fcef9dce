from fractions import Fraction

import mpmath
import pytest

from abelquot import config
from abelquot.errors import InputError
from abelquot.inequalities import (
    ar_bound,
    check_aux_sweep,
    constants,
    constants_report,
    kp_bound_holds,
    kp_threshold,
    primitive_ar_bound,
    primitive_case_holds,
    rhs_aux,
    sweep_margins,
    theorem_rhs_bits,
)
from abelquot.intervals import Interval
from abelquot.named_groups import cyclic, symmetric
from abelquot.structure import a_invariant

mpmath.mp.dps = 60


def _close(interval, expected, tolerance):
    return abs(float(interval.mid) - expected) < tolerance


def _mp_fraction(value):
    mantissa, exponent = mpmath.mpf(value).man_exp
    return Fraction(int(mantissa)) * Fraction(2) ** int(exponent)


def test_constants_enclose_references():
    values = constants()
    c0 = mpmath.log(48 * mpmath.cbrt(24)) / mpmath.log(9)
    bprime = 2 / mpmath.sqrt(mpmath.pi)
    slack = Fraction(1, 10**50)
    for interval, reference in [
        (values.c0, c0),
        (values.bprime, bprime),
        (values.log3, mpmath.log(3, 2)),
        (values.cube_root_24, mpmath.cbrt(24)),
    ]:
        value = _mp_fraction(reference)
        assert interval.lo - slack <= value <= interval.hi + slack
        assert interval.width < Fraction(1, 1 << 100)
    assert _close(values.c0, 2.2440, 1e-3)


def test_constants_report():
    rows = constants_report(places=20)
    names = [row.name for row in rows]
    assert names[:2] == ["c0", "bprime"]
    threshold = rows[-1]
    assert threshold.name == "kp_threshold"
    assert threshold.lo == threshold.hi == "20603." + "0" * 20
    for row in rows:
        assert Fraction(row.lo) <= Fraction(row.hi)


def test_kp_threshold():
    assert kp_threshold() == config.KP_THRESHOLD == 20603
    assert kp_bound_holds(20603)
    assert not kp_bound_holds(20604)
    assert kp_bound_holds(3)
    assert kp_bound_holds(2)


def test_theorem_rhs_bits():
    assert theorem_rhs_bits(2) == Interval(4)
    assert theorem_rhs_bits(16) == Interval(16)
    assert _close(theorem_rhs_bits(20604), 10885.9, 0.5)
    with pytest.raises(InputError):
        theorem_rhs_bits(1)


def test_primitive_case():
    for n in range(2, 200):
        assert primitive_case_holds(n)


def test_primitive_ar_bound():
    assert _close(primitive_ar_bound(2), 1.716, 0.01)
    assert _close(primitive_ar_bound(3), 3.614, 0.01)
    assert primitive_ar_bound(2).lo > 1
    # the extreme block groups of degree 2, 3 and 4 stay below the bound
    for r in (2, 3, 4):
        exact = a_invariant(symmetric(r)).bits()
        assert exact.hi <= primitive_ar_bound(r).lo
        assert exact.hi <= ar_bound(r).hi
        assert exact.lo >= ar_bound(r).lo
    assert a_invariant(cyclic(2)).bits() == ar_bound(2)
    with pytest.raises(InputError):
        primitive_ar_bound(1)


def test_rhs_aux():
    assert _close(rhs_aux(20604, 2), 8827.1, 0.5)
    assert _close(rhs_aux(20604, 6), 9756.8, 0.5)
    assert rhs_aux(20604, 6).hi < theorem_rhs_bits(20604).lo
    # d = 2 has log2 d = 1
    half = rhs_aux(20604, 10302)
    assert half.hi < Fraction(10**6)
    for r in (1, 5, 20604):
        with pytest.raises(InputError):
            rhs_aux(20604, r)


def test_sweep():
    result = sweep_margins(20604, 21000)
    assert result.violations == []
    assert [row.n for row in result.rows] == list(range(20604, 21001))
    assert all(row.margin > 0 for row in result.rows)


def test_sweep_jobs_match():
    single = sweep_margins(20604, 24700, jobs=1)
    parallel = sweep_margins(20604, 24700, jobs=2)
    assert single == parallel


def test_sweep_detects_violations():
    violations = check_aux_sweep(20604, 20620, bprime=Interval(10))
    assert violations
    assert all(v.rhs_aux_hi > v.theorem_rhs_lo for v in violations)


def test_sweep_range_errors():
    with pytest.raises(InputError):
        sweep_margins(20000, 21000)
    with pytest.raises(InputError):
        sweep_margins(30000, 21000)
