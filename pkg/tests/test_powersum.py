import cmath
import math
import random

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from zdecheck.powersum import (PowerSumInstance, adversarial_instances, nonneg_witness, sharpness_probe,
                               sweep_nonneg, sweep_turan, turan_constant, turan_witness)


def _oracle_turan(z, M):
    """Independent scan in mpmath: best ratio |sum z^k| / |z_1|^k over k in [M+1, M+N]."""
    N = len(z)
    with mp.workdps(40):
        best = max(range(M + 1, M + N + 1),
                   key=lambda k: abs(mp.fsum([mp.mpc(x) ** k for x in z])) / abs(mp.mpc(z[0])) ** k)
        s = abs(mp.fsum([mp.mpc(x) ** best for x in z]))
        req = mp.mpf("1.007") * (4 * mp.e * (1 + mp.mpf(M) / N)) ** (-N) * abs(mp.mpc(z[0])) ** best
        return best, float(mp.log10(s)), float(mp.log10(req))


def test_single_term():
    w = turan_witness(PowerSumInstance((0.7 + 0.1j,), 5))
    assert w.k == 6 and w.ok
    assert w.attained.log10_abs == pytest.approx(6 * math.log10(abs(0.7 + 0.1j)))


def test_sixth_roots_of_unity():
    roots = tuple(cmath.exp(2j * math.pi * j / 6) for j in range(6))
    w = turan_witness(PowerSumInstance(roots, 0))
    assert w.k == 6 and w.ok
    assert w.attained.log10_abs == pytest.approx(math.log10(6), abs=1e-12)
    assert w.required.log10_abs == pytest.approx(math.log10(1.007) - 6 * math.log10(4 * math.e))


def test_constant_formula():
    assert turan_constant(0, 1) == pytest.approx(math.log10(1.007 / (4 * math.e)))
    assert turan_constant(10, 5) == pytest.approx(math.log10(1.007) - 5 * math.log10(12 * math.e))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_turan_matches_mp_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    z = [cmath.exp(1j * rng.uniform(0, 6.3))] + [rng.uniform(0.2, 1) * cmath.exp(1j * rng.uniform(0, 6.3))
                                                  for _ in range(n - 1)]
    M = rng.randint(0, 60)
    w = turan_witness(PowerSumInstance(tuple(z), M))
    k, att, req = _oracle_turan(z, M)
    assert w.ok and att >= req
    assert w.attained.log10_abs == pytest.approx(att, abs=1e-8) or w.k != k
    assert w.required.log10_abs == pytest.approx(req, abs=1e-9) or w.k != k


def test_turan_limits():
    with pytest.raises(ValueError):
        turan_witness(PowerSumInstance(tuple([1.0] * 13)))
    with pytest.raises(ValueError):
        turan_witness(PowerSumInstance((1.0,), 200))


def test_nonneg_examples():
    w = nonneg_witness(PowerSumInstance((2.0,), 0, 1.0))
    assert w.k == 1 and w.ok
    w = nonneg_witness(PowerSumInstance((1.0, -0.99), 0, 1.0))
    assert w.k == 2 and w.ok
    assert w.attained.to_float() == pytest.approx(1 + 0.99 ** 2)


def _oracle_nonneg(z, eps, b=None):
    b = b or [1.0] * len(z)
    a1 = abs(z[0])
    if b == [1.0] * len(z):
        jmax = math.floor((8 + eps) * sum(abs(x) for x in z) / a1 * (1 + 1e-12))
    else:
        jmax = math.floor((8 + eps) / b[0] * sum(bn * abs(x) / (a1 + abs(x)) for bn, x in zip(b, z)) * (1 + 1e-12))
    with mp.workdps(40):
        for j in range(1, jmax + 1):
            s = mp.fsum([bn * (mp.mpc(x) ** j).real for bn, x in zip(b, z)])
            if s >= mp.mpf(eps) / (32 + 4 * mp.mpf(eps)) * b[0] * abs(mp.mpc(z[0])) ** j:
                return j
    return None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1 / 40, 1.0]), st.booleans())
def test_nonneg_matches_oracle(seed, eps, weighted):
    rng = random.Random(seed)
    n = rng.randint(1, 12)
    z = [rng.uniform(0.2, 1) * cmath.exp(1j * rng.uniform(0, 6.3)) for _ in range(n)]
    b = [rng.uniform(0.1, 2) for _ in range(n)] if weighted else None
    w = nonneg_witness(PowerSumInstance(tuple(z), 0, eps), b)
    assert w.ok
    assert w.k == _oracle_nonneg(z, eps, b)


def test_nonneg_bad_weights():
    with pytest.raises(ValueError):
        nonneg_witness(PowerSumInstance((1.0, 0.5)), b=[0.0, 1.0])


def test_instance_round_trip():
    inst = PowerSumInstance((1 + 2j, -0.5j), 3, 0.025)
    assert PowerSumInstance.from_dict(inst.to_dict()) == inst


def test_adversarial_families_hold():
    for inst in adversarial_instances():
        assert turan_witness(inst).ok


def test_small_sweeps():
    assert sweep_turan(500, seed=11).ok
    assert sweep_nonneg(500, seed=11).ok


def test_sharpness_probe_runs():
    probe = sharpness_probe(6)
    assert probe and all("log10_ratio" in p for p in probe)
    assert min(p["log10_ratio"] for p in probe) >= 0
