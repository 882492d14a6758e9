import math
import random

import mpmath
import pytest
from mpmath import mp

from zdecheck.certificate import HOLDS
from zdecheck.sieve import (SieveInstance, integrated_lhs, integrated_lhs_quadrature, integrated_sieve_check,
                            large_sieve_check, least_prime_factor, mertens_bounds, mertens_sweep,
                            random_instances, sifted_support)


def _is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def test_sifted_support():
    assert sifted_support(3, 0, 20) == [1, 5, 7, 11, 13, 17, 19]
    assert least_prime_factor(1) == math.inf
    assert least_prime_factor(91) == 7
    with pytest.raises(ValueError):
        SieveInstance(3, 0, 20, {9: 1.0})
    with pytest.raises(ValueError):
        SieveInstance(3, 0, 20, {23: 1.0})


def test_large_sieve_example():
    inst = SieveInstance(3, 0, 20, {n: 1.0 for n in (5, 7, 11, 13, 17, 19)})
    c = large_sieve_check(inst)
    # only q = 1 carries weight log 3 (no primitive character mod 2): lhs = 36 log 3
    assert c.observed_interval.contains(36 * mpmath.log(3)) or \
        abs(float(c.observed_interval.mid) - 36 * math.log(3)) < 1e-12
    assert c.bound_interval.contains(28 * 6)
    assert c.verdict == HOLDS


def test_large_sieve_against_direct_sum():
    rng = random.Random(5)
    supp = sifted_support(5, 40, 60)
    coeffs = {n: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for n in supp}
    inst = SieveInstance(5, 40, 60, coeffs)
    # independent evaluation from the definition with mpmath characters
    with mp.workdps(30):
        lhs = mp.mpf(0)
        for q, chars in ((1, [lambda n: 1]),
                         (3, [lambda n: [0, 1, -1][n % 3]]),
                         (4, [lambda n: [0, 1, 0, -1][n % 4]])):
            for chi in chars:
                lhs += mp.log(mp.mpf(5) / q) * abs(mp.fsum([mp.mpc(a) * chi(n) for n, a in coeffs.items()])) ** 2
        # q = 2 has no primitive character; q = 5 has weight 0
    assert large_sieve_check(inst).observed_interval.contains(lhs)


def test_integrated_example_against_mp_quadrature():
    inst = SieveInstance(3, 0, 13, {n: 1.0 for n in (5, 7, 11, 13)}, T=10.0)
    with mp.workdps(30):
        f = lambda t: abs(mp.fsum([mp.mpf(n) ** (-1j * t) for n in (5, 7, 11, 13)])) ** 2  # noqa: E731
        ref = mp.log(3) * mp.quad(f, mp.linspace(-10, 10, 41))
    assert integrated_lhs(inst).contains(ref)
    c = integrated_sieve_check(inst)
    assert c.bound_interval.contains(7 * (36 + 4 * 90))
    assert c.verdict == HOLDS


def test_random_sweep_and_quadrature():
    insts = random_instances(200, seed=9)
    for inst in insts:
        assert large_sieve_check(inst).verdict == HOLDS
        assert integrated_sieve_check(inst).verdict == HOLDS
    for inst in insts[:10]:
        closed = integrated_lhs(inst)
        q, e = integrated_lhs_quadrature(inst)
        assert abs(float(closed.mid) - q) <= 1e-6 * abs(q) + 10 * e + 1e-300


def _prime_sum_oracle(x):
    return sum(math.log(p) / p for p in range(2, int(x) + 1) if _is_prime(p))


def test_prime_sum_oracle_value():
    # the prime sum at x = 100 is 3.369470875 (a worked figure of 3.2299 is a slip)
    s = _prime_sum_oracle(100)
    assert s == pytest.approx(3.369470875, abs=1e-9)
    lower, upper, _ = mertens_bounds(100, 100)
    assert upper.observed_interval.contains(s) or abs(float(upper.observed_interval.mid) - s) < 1e-12
    assert lower.verdict == upper.verdict == HOLDS


def test_mertens_tail_example():
    certs = mertens_bounds(1000, 10**6)
    assert all(c.verdict == HOLDS for c in certs)
    sq = certs[2]
    l3, l6 = math.log(1e3), math.log(1e6)
    assert float(sq.bound_interval.mid) == pytest.approx((l6 * l6 + 4 * l6 - l3 * l3) / 2)
    assert float(sq.observed_interval.mid) == pytest.approx(71.277, abs=1e-3)


def test_mertens_empty_tail():
    sq = mertens_bounds(50, 50)[2]
    assert sq.observed_interval.contains(0)
    assert float(sq.bound_interval.mid) == pytest.approx(2 * math.log(50))
    with pytest.raises(ValueError):
        mertens_bounds(1, 10)


def test_mertens_sweep_small():
    sw = mertens_sweep(10**5, grid=40)
    assert sw.ok and sw.worst_upper_margin > 0 and sw.worst_lower_margin > 0 and sw.worst_squares_margin > 0
