import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import iv, mp

from zdecheck.numerics import (ComplexBox, DomainError, Interval, LogMagnitude, complex_gamma,
                               digamma_real_part_upper, precision)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_exact_endpoint_arithmetic():
    s = Interval(1, 2) + Interval(3, 4)
    assert (s.lo, s.hi) == (4, 6)
    p = Interval(-1, 1) * Interval(0, 0)
    assert (p.lo, p.hi) == (0, 0)


def test_exp_one_against_series():
    with mp.workprec(200):
        e = mpmath.nsum(lambda k: 1 / mpmath.factorial(k), [0, mpmath.inf])
    assert Interval.of(1).exp().contains(e)


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite, finite)
def test_operations_enclose_real_results(a, b, c, d):
    x, y = Interval.hull(a, b), Interval.hull(c, d)
    for u in (a, b):
        for v in (c, d):
            with mp.workprec(300):
                assert (x + y).contains(mp.mpf(u) + mp.mpf(v))
                assert (x - y).contains(mp.mpf(u) - mp.mpf(v))
                assert (x * y).contains(mp.mpf(u) * mp.mpf(v))


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1e6))
def test_log_sqrt_enclose(x):
    i = Interval.of(x)
    with mp.workprec(300):
        assert i.log().contains(mp.log(mp.mpf(x)))
        assert i.sqrt().contains(mp.sqrt(mp.mpf(x)))


def test_precision_context_restores():
    old = mp.prec
    with precision(200):
        assert mp.prec == 200
    assert mp.prec == old


def test_log_domain_product_and_order():
    prod = LogMagnitude.from_log10(103) * LogMagnitude.from_log10(-7029.2)
    assert prod.log10_abs == pytest.approx(-6926.2)
    a = LogMagnitude.from_log10(math.log10(1.24) - 6926)
    b = LogMagnitude.from_log10(math.log10(1.28) - 6926)
    assert a < b
    x = LogMagnitude.from_float(3.5)
    assert (x * LogMagnitude.from_float(1.0)).log10_abs == pytest.approx(x.log10_abs)


def test_log_magnitude_zero_and_sign():
    z = LogMagnitude.zero()
    assert z.sign == 0 and z.to_float() == 0
    assert LogMagnitude.from_float(-2.0) < LogMagnitude.from_float(1.0)


def test_digamma_bound_examples():
    bound, actual = digamma_real_part_upper(1)
    assert bound.contains(-mp.euler)
    assert float(actual.mid) == pytest.approx(float(mp.digamma(0.5)), abs=1e-12)
    assert actual.hi <= bound.lo
    bound, actual = digamma_real_part_upper(complex(1, 1))
    assert float(bound.mid) == pytest.approx(0.5 * math.log(2) - float(mp.euler), abs=1e-12)
    assert float(bound.mid) == pytest.approx(-0.23066, abs=5e-5)
    with pytest.raises(DomainError):
        digamma_real_part_upper(0.25)


@pytest.mark.parametrize("w", [complex(0.5, 0), complex(3, 4), complex(0.25, -10)])
def test_complex_gamma_against_mpmath(w):
    g = ComplexBox.from_iv(complex_gamma(iv.mpc(w.real, w.imag)))
    ref = mp.gamma(mp.mpc(w))
    assert abs(g.mid - complex(ref)) <= 1e-12 * abs(complex(ref))
