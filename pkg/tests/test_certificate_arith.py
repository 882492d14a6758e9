import json
import math

import numpy as np
import pytest
import sympy

from zdecheck.arith import is_prime_array, mobius, prime_powers_up_to, primes_up_to, von_mangoldt_array
from zdecheck.certificate import BoundCertificate, compare_verdict
from zdecheck.numerics import Interval


def test_compare_verdict():
    assert compare_verdict(Interval(1, 2), Interval(2, 3)) == "holds"
    assert compare_verdict(Interval(1, 2.5), Interval(2, 3)) == "inconclusive"
    assert compare_verdict(Interval(3.5, 4), Interval(2, 3)) == "violated"


def test_certificate_json():
    c = BoundCertificate.from_interval("x", {"q": 3}, Interval(1, 2), Interval.of("1e5000"))
    d = json.loads(c.to_json())
    assert d["verdict"] == "holds" and d["bound_log10"] == pytest.approx(5000)
    assert c.ok
    na = BoundCertificate.not_applicable("y", {}, "out of range")
    assert na.ok and na.to_dict()["verdict"] == "not_applicable"


def test_primes_against_sympy():
    assert list(primes_up_to(1000)) == list(sympy.primerange(2, 1001))
    assert is_prime_array(30).nonzero()[0].tolist() == list(sympy.primerange(2, 31))


def test_von_mangoldt_and_mobius():
    lam = von_mangoldt_array(100)
    for n in range(1, 101):
        f = sympy.factorint(n)
        want = math.log(next(iter(f))) if len(f) == 1 else 0.0
        assert lam[n] == pytest.approx(want)
        assert mobius(n) == sympy.mobius(n)
    pp, base = prime_powers_up_to(50)
    assert 32 in pp.tolist() and 12 not in pp.tolist()
    assert np.all(pp % base == 0)
