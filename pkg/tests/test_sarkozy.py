from fractions import Fraction

import pytest
from mpmath import mp

from zdecheck.certificate import HOLDS
from zdecheck.sarkozy import (B, AvoidingSet, compute_c_and_kappa, constants, forbidden_differences,
                              is_avoiding, recheck_avoiding, sarkozy_search, verify_B_inequality,
                              zde_application_chain)


def _is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def _close(iv, ref):
    with mp.workdps(50):
        return abs(iv.mid - ref) <= iv.width + mp.mpf("1e-35") * abs(ref)


def _brute_max(N):
    """Largest avoiding subset of 1..N by plain recursion over include/exclude."""
    best = 0

    def go(i, chosen):
        nonlocal best
        if len(chosen) + (N - i + 1) <= best:
            return
        if i > N:
            best = max(best, len(chosen))
            return
        if all(not _is_prime(i - b + 1) for b in chosen):
            go(i + 1, chosen + [i])
        go(i + 1, chosen)

    go(1, [])
    return best


def test_chain_against_mp_oracle():
    with mp.workdps(50):
        bl = B - 198
        sup = 103 + mp.log10(mp.mpf(2 * B - 198) / bl) - mp.mpf(bl) / 20 / mp.log(10)
        inv4m = -mp.log10(4 * 7 * 3 ** 6) - 22993 * mp.log10(2)
    ch = zde_application_chain()
    assert _close(ch.sup_log10, sup)
    assert _close(ch.inv4M_log10, inv4m)
    assert abs(float(ch.sup_log10.mid) - mp.log10(mp.mpf("1.24e-6926"))) < 0.01
    assert abs(float(ch.inv4M_log10.mid) - mp.log10(mp.mpf("1.28e-6926"))) < 0.01
    assert all(c.verdict == HOLDS for c in ch.certificates)
    assert ch.value.log10_abs <= float(ch.sup_log10.hi)
    with pytest.raises(ValueError):
        zde_application_chain(5)


def test_M_constant():
    with mp.workdps(50):
        ref = mp.log10(7 * 3 ** 6) + 22993 * mp.log10(2)
    assert _close(constants().M_log10, ref)


def test_c_and_kappa():
    ck = compute_c_and_kappa()
    assert ck.kappa_gap == Fraction(132, 10**20)
    assert ck.first_term == Fraction(1, 5182480)
    assert ck.c_max.contains(mp.mpf("9.79780036e-14")) or abs(float(ck.c_max.mid) - 9.79780036e-14) < 1e-21
    assert ck.c_max.certainly_gt(Fraction(9, 10**14))
    assert round(float(ck.c_max.mid), 16) == pytest.approx(9.79e-14, abs=1e-16)
    assert ck.certificate.verdict == HOLDS


def test_B_inequality():
    rep = verify_B_inequality()
    assert rep.inconclusive == 0 and rep.boxes >= 1000
    assert rep.certificate.verdict == HOLDS
    assert rep.analytic_cutoff == pytest.approx((2 * B - 1) / B ** 2)


def test_B_inequality_fails_past_two():
    # e^{-Bx} + x/2 <= 1 breaks once x > 2; the scan must not certify it there
    rep = verify_B_inequality(lo=1.0, hi=Fraction(3), initial_boxes=50, max_depth=6)
    assert rep.certificate.verdict != HOLDS


def test_forbidden_differences():
    assert forbidden_differences(12) == [1, 2, 4, 6, 10]


def test_small_searches():
    assert sarkozy_search(3, "exhaustive").size == 1
    s4 = sarkozy_search(4, "exhaustive")
    assert s4.size == 2 and s4.elements == (1, 4)


@pytest.mark.parametrize("N", range(1, 21))
def test_search_against_brute_force(N):
    want = _brute_max(N)
    for method in ("exhaustive", "dp"):
        s = sarkozy_search(N, method)
        assert s.size == want and recheck_avoiding(s)


def test_greedy_is_valid_and_bounded():
    g = sarkozy_search(200, "greedy")
    assert recheck_avoiding(g)
    assert g.size <= sarkozy_search(200, "dp").size


def test_recheck_catches_bad_sets():
    assert not is_avoiding([1, 2])
    assert not recheck_avoiding(AvoidingSet(5, (1, 7), "dp"))
    assert not recheck_avoiding(AvoidingSet(5, (1, 1), "dp"))


def test_limits():
    with pytest.raises(ValueError):
        sarkozy_search(41, "exhaustive")
    with pytest.raises(ValueError):
        sarkozy_search(10, "magic")
