"""One test per acceptance criterion; each records a PASS/FAIL line printed at the end of the run."""

import random
import time
from fractions import Fraction

import pytest
from mpmath import mp

from conftest import ACCEPTANCE
from zdecheck.bounds import sweep_requests, verify_against_zeros
from zdecheck.characters import DirichletCharacter, enumerate_primitive
from zdecheck.constants import PRINTED, detection_constant, ledger, matches_printed
from zdecheck.lfunctions import functional_equation_residual, l_value
from zdecheck.powersum import sweep_nonneg, sweep_turan
from zdecheck.sarkozy import (compute_c_and_kappa, recheck_avoiding, sarkozy_search, verify_B_inequality,
                              zde_application_chain)
from zdecheck.sieve import (integrated_lhs, integrated_lhs_quadrature, integrated_sieve_check,
                            large_sieve_check, mertens_sweep, random_instances)
from zdecheck.suites import RunConfig, ZETA_ZEROS, run_suite


class Criterion:
    """Context manager that times a block, collects failed checks and records the verdict."""

    def __init__(self, number: int, desc: str, limit_s: float):
        self.number, self.desc, self.limit = number, desc, limit_s
        self.failures: list[str] = []

    def check(self, ok: bool, what: str) -> None:
        if not ok:
            self.failures.append(what)

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        wall = time.perf_counter() - self.t0
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        self.check(wall <= self.limit, f"took {wall:.1f}s > {self.limit:.0f}s")
        ok = not self.failures
        ACCEPTANCE[self.number] = (ok, f"{self.desc} [{wall:.1f}s]" + ("" if ok else " -- " + "; ".join(self.failures)))
        print(f"criterion {self.number}: {'PASS' if ok else 'FAIL'}  {ACCEPTANCE[self.number][1]}")
        if exc is None:
            assert ok, "; ".join(self.failures)
        return False


def test_criterion_01_constants():
    with Criterion(1, "constants reproduce every printed digit", 10) as c:
        led = ledger()
        vals = {k: getattr(led, k) for k in ("alpha", "A", "V", "A0", "A1")}
        vals["detection"] = detection_constant(led)
        for key, printed in PRINTED.items():
            m = matches_printed(vals[key], printed)
            c.check(m["truncation"] or m["rounding"], f"{key} does not reproduce {printed}")
        d = vals["detection"]
        c.check(d.certainly_ge(Fraction("3.804416849672")) and d.certainly_le(Fraction("3.804416849673")),
                "detection constant outside [3.804416849672, 3.804416849673]")


def test_criterion_02_sarkozy_chain():
    with Criterion(2, "kappa gap, c_max and the 1e-6926 chain", 1) as c:
        ck = compute_c_and_kappa()
        c.check(ck.kappa_gap == Fraction(132, 10**20), f"kappa gap {ck.kappa_gap}")
        c.check(ck.c_max.certainly_gt(Fraction(9, 10**14)), "c_max not above 9e-14")
        c.check(ck.c_max.certainly_ge(Fraction(979, 10**16)) and ck.c_max.certainly_lt(Fraction(980, 10**16)),
                "c_max outside the printed window [9.79e-14, 9.80e-14)")
        ch = zde_application_chain()
        for val, printed in ((ch.sup_log10, "1.24e-6926"), (ch.inv4M_log10, "1.28e-6926")):
            dev = abs(float(val.mid) - float(mp.log10(mp.mpf(printed))))
            c.check(dev <= 0.01, f"{printed}: log10 off by {dev:.3g}")
        c.check(all(x.verdict == "holds" for x in ch.certificates), "chain certificates")


def test_criterion_03_B_inequality():
    with Criterion(3, "e^{-Bx} + x/2 <= 1 on (1e-9, 1/20]", 10) as c:
        rep = verify_B_inequality(1e-9, Fraction(1, 20), initial_boxes=1000)
        c.check(rep.certificate.verdict == "holds", f"verdict {rep.certificate.verdict}")
        c.check(rep.inconclusive == 0, f"{rep.inconclusive} inconclusive boxes")


def test_criterion_04_zero_corpus(full_corpus):
    corpus, build_s = full_corpus
    with Criterion(4, f"zero corpus q <= 50, T = 50 ({len(corpus.sets)} characters)", 30 * 60) as c:
        c.t0 -= build_s
        want = sum(len(enumerate_primitive(q)) for q in range(1, 51))
        c.check(len(corpus.sets) == want, f"{len(corpus.sets)} sets, expected {want}")
        for zs in corpus.sets:
            c.check(zs.complete and zs.rectangle.count == len(zs.zeros), f"{zs.character.label} incomplete")
            c.check(all(z.beta.contains(Fraction(1, 2)) for z in zs.zeros), f"{zs.character.label} beta")
        zeta = corpus.by_label(DirichletCharacter(1, ()).label)
        pos = sorted(float(z.gamma.mid) for z in zeta.zeros if z.gamma.lo > 0)
        widths = [float(z.gamma.width) for z in zeta.zeros]
        for g, printed in zip(pos, ZETA_ZEROS):
            c.check(f"{g:.6f}" == printed, f"zeta ordinate {g:.7f} vs {printed}")
        c.check(len(pos) >= 3 and max(widths) < 5e-7, "zeta ordinates not resolved to 6 decimals")


def test_criterion_05_bound_sweep(full_corpus):
    corpus, _ = full_corpus
    with Criterion(5, "disc counts, density and repulsion bounds never violated on the corpus", 600) as c:
        certs = verify_against_zeros(corpus, sweep_requests(corpus, 1000, seed=2024))
        per = {}
        for x in certs:
            per.setdefault(x.name, []).append(x.verdict)
        for name in ("lem:Linnik", "cor:Linnik_lemma", "prop:HB_zero-count", "lem:basic_density",
                     "thm:GLFZDE.N", "thm:GLFZDE.Nstar", "cor:GLFZDE.N", "cor:GLFZDE.Nstar"):
            v = per.get(name, [])
            c.check(len(v) >= 1000, f"{name}: only {len(v)} samples")
            c.check(all(x == "holds" for x in v), f"{name}: {sum(x != 'holds' for x in v)} not holding")
        c.check(not any(x.verdict == "violated" for x in certs), "violations")


def test_criterion_06_convexity():
    with Criterion(6, "convexity for q <= 20, |t| <= 30 step 0.1; |zeta(1/2)| <= 1.461", 600) as c:
        recs = run_suite("convexity", RunConfig(q_max=20, T_max=30))
        per_char = [r for r in recs if r["name"] == "prop:sharp_convexity" and "step" in r["inputs"]]
        want = sum(len(enumerate_primitive(q)) for q in range(1, 21))
        c.check(len(per_char) == want, f"{len(per_char)} characters, expected {want}")
        c.check(all(r["verdict"] == "holds" for r in recs), "non-holding convexity certificate")
        z = l_value(DirichletCharacter(1, ()), (mp.mpf(0.5), mp.mpf(0))).abs()
        c.check(z.hi <= mp.mpf("1.461"), "|zeta(1/2)| above 1.461")
        c.check(abs(float(z.mid) - 1.4603545) < 5e-8, f"|zeta(1/2)| = {float(z.mid)}")


def test_criterion_07_power_sums():
    with Criterion(7, "power sums: 1e4 instances per lemma, no violation", 300) as c:
        t = sweep_turan(10_000, seed=7)
        n = sweep_nonneg(10_000, seed=7)
        c.check(t.count >= 10_000 and t.ok, f"Turan-type: {len(t.violations)} violations")
        c.check(n.count >= 10_000 and n.ok, f"nonnegative-real: {len(n.violations)} violations")


def test_criterion_08_large_sieve():
    with Criterion(8, "large sieve: 1e3 instances, 50 quadrature spot checks", 300) as c:
        insts = random_instances(1000, seed=8, qmax=5, vmax=200, tmax=20)
        c.check(all(i.Q <= 5 and i.V <= 200 and i.T <= 20 for i in insts), "instance ranges")
        for inst in insts:
            c.check(large_sieve_check(inst).verdict == "holds", f"lemma fails at {inst.to_dict()}")
            c.check(integrated_sieve_check(inst).verdict == "holds", f"corollary fails at {inst.to_dict()}")
        for inst in random.Random(8).sample(insts, 50):
            closed = integrated_lhs(inst)
            q, e = integrated_lhs_quadrature(inst)
            c.check(abs(float(closed.mid) - q) <= 1e-6 * abs(q) + 10 * e + float(closed.width) + 1e-300,
                    "closed form disagrees with quadrature")


def test_criterion_09_mertens():
    with Criterion(9, "both prime-sum bounds up to 1e7", 60) as c:
        sw = mertens_sweep(10**7)
        c.check(sw.ok, "violated")
        c.check(sw.worst_upper_margin > 0 and sw.worst_lower_margin > 0 and sw.worst_squares_margin > 0, "margins")


def test_criterion_10_sarkozy_search():
    with Criterion(10, "exhaustive = branch-and-bound for N <= 40; N=3 -> 1, N=4 -> 2", 300) as c:
        for N in range(1, 41):
            ex, dp = sarkozy_search(N, "exhaustive"), sarkozy_search(N, "dp")
            c.check(ex.size == dp.size, f"N = {N}: {ex.size} vs {dp.size}")
            c.check(recheck_avoiding(ex) and recheck_avoiding(dp), f"N = {N}: recheck failed")
        c.check(sarkozy_search(3, "exhaustive").size == 1, "N = 3")
        c.check(sarkozy_search(4, "exhaustive").size == 2, "N = 4")


def test_criterion_11_functional_equation():
    with Criterion(11, "functional-equation residual contains 0 for 500 random (chi, s), q <= 50", 300) as c:
        rng = random.Random(11)
        chars = [x for q in range(1, 51) for x in enumerate_primitive(q)]
        for _ in range(500):
            chi = rng.choice(chars)
            s = (mp.mpf(rng.uniform(-0.5, 1.5)), mp.mpf(rng.uniform(-30, 30)))
            c.check(functional_equation_residual(chi, s).contains_zero, f"{chi.label} at {s}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
