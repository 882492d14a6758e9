import cmath
import math
from math import gcd

import numpy as np
import pytest

from zdecheck.characters import (DirichletCharacter, enumerate_characters, enumerate_primitive, gauss_sum,
                                 parity_and_order, primitive_count)


def _mobius(n):
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


def _phi(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def _primitive_oracle(q):
    return sum(_mobius(q // d) * _phi(d) for d in range(1, q + 1) if q % d == 0)


def test_small_counts():
    assert len(enumerate_characters(1)) == 1
    assert len(enumerate_primitive(3)) == 1
    assert len(enumerate_primitive(8)) == 2


@pytest.mark.parametrize("q", range(1, 61))
def test_primitive_count_matches_mobius_formula(q):
    assert len(enumerate_primitive(q)) == _primitive_oracle(q) == primitive_count(q)


@pytest.mark.parametrize("q", [1, 4, 5, 8, 12, 15, 24, 49])
def test_values_are_multiplicative_and_orthogonal(q):
    chars = enumerate_characters(q)
    assert len(chars) == _phi(q)
    for chi in chars:
        v = chi.values
        for a in range(q):
            for b in range(q):
                assert abs(v[(a * b) % q] - v[a] * v[b]) < 1e-12
    units = [a for a in range(q) if gcd(a, q) == 1]
    for c1 in chars:
        for c2 in chars:
            s = sum(c1.values[a] * np.conj(c2.values[a]) for a in units)
            assert abs(s - (len(units) if c1 == c2 else 0)) < 1e-9


@pytest.mark.parametrize("q", [1, 3, 4, 5, 7, 8, 9, 12, 13, 16, 25, 27, 40])
def test_gauss_sum_modulus(q):
    for chi in enumerate_primitive(q):
        g = gauss_sum(chi)
        assert g.abs().contains(math.sqrt(q)) or abs(float(g.abs().mid) - math.sqrt(q)) < 1e-12
        direct = sum(chi.values[j % q] * cmath.exp(2j * math.pi * j / q) for j in range(1, q + 1))
        assert abs(g.mid - direct) < 1e-9


def test_gauss_sum_examples():
    assert abs(gauss_sum(DirichletCharacter(1, ())).mid - 1) < 1e-15
    chi4 = enumerate_primitive(4)[0]
    assert abs(gauss_sum(chi4).mid - 2j) < 1e-12


def test_parity_and_order_examples():
    assert parity_and_order(DirichletCharacter(1, ())) == (0, 1)
    assert parity_and_order(enumerate_primitive(4)[0]) == (1, 2)
    assert (1, 4) in {parity_and_order(c) for c in enumerate_primitive(5)}


def test_label_round_trip_and_conjugate():
    for q in (5, 12, 21):
        for chi in enumerate_characters(q):
            assert DirichletCharacter.from_label(chi.label) == chi
            assert np.allclose(chi.conj().values, np.conj(chi.values))
