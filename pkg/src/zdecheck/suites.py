"""Verification suites run by the command-line front end.

Each suite takes a :class:`RunConfig` and a shared context dict and returns a
list of certificate records (plain dicts with ``name``, ``inputs``,
``verdict`` and friends).  Records are deterministic for a fixed config.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from mpmath import mp

from .bounds import sweep_requests, verify_against_zeros
from .certificate import HOLDS, INCONCLUSIVE, NOT_APPLICABLE, VIOLATED, BoundCertificate
from .characters import enumerate_primitive
from .constants import PRINTED, detection_constant, ledger, matches_printed, nchoice_facts
from .lfunctions import (convexity_certificate, functional_equation_residual, l_values_fast,
                         zeta_small_height_certificate)
from .numerics import ComplexBox, Interval, precision
from .powersum import sweep_nonneg, sweep_turan
from .sarkozy import (PRINTED_CHAIN, PRINTED_INV4M, compute_c_and_kappa, recheck_avoiding,
                      sarkozy_search, verify_B_inequality, zde_application_chain)
from .sieve import (integrated_lhs, integrated_lhs_quadrature, integrated_sieve_check,
                    large_sieve_check, mertens_bounds, mertens_sweep, random_instances)
from .zeros import ZeroCorpus, build_corpus

__all__ = ["RunConfig", "SUITES", "run_suite", "record", "ZETA_ZEROS"]

DESK_Q = 100
DESK_T = 100.0

# first three ordinates of zeta, to six decimals
ZETA_ZEROS = ("14.134725", "21.022040", "25.010858")


@dataclass
class RunConfig:
    """Settings for one run.  ``q_max`` and ``T_max`` are capped at desk scale."""

    suites: list[str] = field(default_factory=list)
    q_max: int = 50
    T_max: float = 50.0
    precision_bits: int = 53
    seeds: dict[str, int] = field(default_factory=dict)
    output_dir: str = "zdecheck-out"
    samples: int = 1000
    jobs: int = 1

    def validate(self) -> None:
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s): {', '.join(unknown)}; known: {', '.join(SUITES)}")
        if not 1 <= self.q_max <= DESK_Q:
            raise ValueError(f"q_max must be in [1, {DESK_Q}]")
        if not 0 < self.T_max <= DESK_T:
            raise ValueError(f"T_max must be in (0, {DESK_T}]")
        if self.precision_bits < 53:
            raise ValueError("precision_bits must be at least 53")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")
        bad = [s for s in self.seeds if s not in SUITES]
        if bad:
            raise ValueError(f"seed given for unknown suite(s): {', '.join(bad)}")

    def seed(self, suite: str) -> int:
        return int(self.seeds.get(suite, 0))


def record(name: str, inputs: dict, verdict: str, observed=None, bound=None, notes: str = "") -> dict:
    return {"name": name, "inputs": inputs, "verdict": verdict, "observed": observed,
            "bound": bound, "notes": notes}


def _cert(c: BoundCertificate) -> dict:
    return c.to_dict()


def _verdict(ok: bool) -> str:
    return HOLDS if ok else VIOLATED


def _corpus(cfg: RunConfig, ctx: dict) -> ZeroCorpus:
    key = ("corpus", cfg.q_max, cfg.T_max)
    if key not in ctx:
        ctx[key] = build_corpus(cfg.q_max, cfg.T_max)
    return ctx[key]


# --------------------------------------------------------------------------


def suite_constants(cfg: RunConfig, ctx: dict) -> list[dict]:
    led = ledger()
    values = {k: getattr(led, k) for k in ("alpha", "A", "V", "A0", "A1")}
    values["detection"] = detection_constant(led)
    out = [record("constants.ledger", {}, HOLDS, led.to_dict())]
    for key, printed in PRINTED.items():
        m = matches_printed(values[key], printed)
        out.append(record(f"constants.{key}", {"printed": printed},
                          _verdict(m["truncation"] or m["rounding"]), values[key].to_json(),
                          notes=", ".join(k for k, v in m.items() if v) or "no match"))
    for key, res in led.residuals().items():
        out.append(record(f"constants.residual.{key}", {}, _verdict(res.contains(0)), res.to_json()))
    facts = nchoice_facts(10**6, led=led)
    obs = {k: (v.to_json() if isinstance(v, Interval) else v) for k, v in vars(facts).items()}
    out.append(record("constants.nchoice", {"Q": 10**6}, _verdict(facts.M_ok and facts.N_ok), obs))
    return out


def suite_sarkozy_constants(cfg: RunConfig, ctx: dict) -> list[dict]:
    out = []
    rep = verify_B_inequality()
    d = _cert(rep.certificate)
    d["inputs"] = dict(d["inputs"], boxes=rep.boxes, inconclusive=rep.inconclusive,
                       analytic_cutoff=rep.analytic_cutoff)
    out.append(d)
    chain = zde_application_chain()
    out.extend(_cert(c) for c in chain.certificates)
    for key, printed, val in (("chain", PRINTED_CHAIN, chain.sup_log10),
                              ("inv4M", PRINTED_INV4M, chain.inv4M_log10)):
        target = float(mp.log10(mp.mpf(printed)))
        dev = abs(float(val.mid) - target)
        out.append(record(f"sarkozy.printed.{key}", {"printed": printed}, _verdict(dev <= 0.01),
                          val.to_json(), 0.01, f"|log10 difference| = {dev:.3g}"))
    ck = compute_c_and_kappa()
    out.append(_cert(ck.certificate))
    out.append(record("sarkozy.kappa_gap", {}, _verdict(ck.kappa_gap == Fraction(132, 10**20)),
                      str(ck.kappa_gap), "1.32e-18", "exact rational"))
    return out


def suite_zeros(cfg: RunConfig, ctx: dict) -> list[dict]:
    corpus = _corpus(cfg, ctx)
    out = []
    for zs in corpus.sets:
        half = all(z.beta.contains(Fraction(1, 2)) for z in zs.zeros)
        verdict = HOLDS if zs.complete and half else (INCONCLUSIVE if not zs.complete else VIOLATED)
        out.append(record("zeros.complete", {"chi": zs.character.label, "T": zs.T}, verdict,
                          len(zs.zeros), zs.rectangle.count, zs.notes))
    zeta = corpus.by_label(enumerate_primitive(1)[0].label)
    pos = sorted((z for z in zeta.zeros if z.gamma.lo > 0), key=lambda z: z.gamma.lo)
    for i, printed in enumerate(ZETA_ZEROS):
        if i >= len(pos):
            out.append(record("zeros.zeta_ordinate", {"index": i + 1}, NOT_APPLICABLE,
                              notes="beyond the scanned height"))
            continue
        g = pos[i].gamma
        ok = round(float(g.mid), 6) == float(printed) and float(g.width) < 5e-7
        out.append(record("zeros.zeta_ordinate", {"index": i + 1, "printed": printed},
                          _verdict(ok), g.to_json()))
    windows = [{"name": "lem:basic_density.window", "chi": zs.character.label, "T": T}
               for zs in corpus.sets for T in np.arange(10.0, cfg.T_max + 1e-9, 10.0).tolist()]
    out.extend(_cert(c) for c in verify_against_zeros(corpus, windows))
    return out


def suite_bounds(cfg: RunConfig, ctx: dict) -> list[dict]:
    corpus = _corpus(cfg, ctx)
    reqs = sweep_requests(corpus, cfg.samples, cfg.seed("bounds"))
    return [_cert(c) for c in verify_against_zeros(corpus, reqs)]


def suite_convexity(cfg: RunConfig, ctx: dict) -> list[dict]:
    out = []
    tmax = min(30.0, cfg.T_max)
    n = int(round(10 * tmax))
    ts = np.arange(-n, n + 1) / 10.0
    for q in range(1, min(20, cfg.q_max) + 1):
        for chi in enumerate_primitive(q):
            vals, rad = l_values_fast(chi, 0.5 + 1j * ts)
            counts = {HOLDS: 0, INCONCLUSIVE: 0, VIOLATED: 0}
            worst = 0.0
            for t, v, r in zip(ts, vals, rad):
                c = convexity_certificate(chi, t, ComplexBox.around(complex(v), float(r)))
                counts[c.verdict] += 1
                worst = max(worst, float(c.observed_interval.hi / c.bound_interval.lo))
                if c.verdict != HOLDS:
                    out.append(_cert(c))
            verdict = VIOLATED if counts[VIOLATED] else (INCONCLUSIVE if counts[INCONCLUSIVE] else HOLDS)
            out.append(record("prop:sharp_convexity", {"chi": chi.label, "t_max": tmax, "step": 0.1},
                              verdict, worst, 1.0, f"max |L|/bound over {len(ts)} points"))
    for t in np.arange(-6, 7) / 2.0:
        out.append(_cert(zeta_small_height_certificate(float(t))))
    return out


def suite_powersum(cfg: RunConfig, ctx: dict) -> list[dict]:
    seed = cfg.seed("powersum")
    count = max(cfg.samples, 10_000)
    out = []
    for rep in (sweep_turan(count, seed), sweep_nonneg(count, seed)):
        out.append(record(rep.lemma, {"seed": seed, "count": rep.count}, _verdict(rep.ok),
                          len(rep.violations), 0,
                          f"min log10 margin {rep.min_margin_log10:.4g}; mp rechecks {rep.rechecked}"))
        for v in rep.violations:
            out.append(record(rep.lemma + ".instance", v, VIOLATED))
    return out


def suite_sieve(cfg: RunConfig, ctx: dict) -> list[dict]:
    seed = cfg.seed("sieve")
    insts = random_instances(cfg.samples, seed)
    out = []
    for inst in insts:
        out.append(_cert(large_sieve_check(inst)))
        out.append(_cert(integrated_sieve_check(inst)))
    for inst in random.Random(seed + 1).sample(insts, min(50, len(insts))):
        closed = integrated_lhs(inst)
        quad, err = integrated_lhs_quadrature(inst)
        tol = 1e-6 * abs(quad) + 10 * err + float(closed.width) + 1e-300
        dev = abs(float(closed.mid) - quad)
        out.append(record("cor:Ramare1.quadrature", {"Q": inst.Q, "U": inst.U, "V": inst.V, "T": inst.T},
                          _verdict(dev <= tol), dev, tol))
    return out


def suite_mertens(cfg: RunConfig, ctx: dict) -> list[dict]:
    sw = mertens_sweep(10**7)
    out = [record("mertens.sweep", {"xmax": sw.xmax}, _verdict(sw.ok), sw.to_dict())]
    for x, y in ((10.0, 100.0), (100.0, 10**4), (10**3, 10**6), (10**4, 10**7)):
        out.extend(_cert(c) for c in mertens_bounds(x, y))
    return out


def suite_sarkozy_search(cfg: RunConfig, ctx: dict) -> list[dict]:
    out = []
    for N in range(1, 41):
        ex = sarkozy_search(N, "exhaustive")
        dp = sarkozy_search(N, "dp")
        ok = ex.size == dp.size and recheck_avoiding(ex) and recheck_avoiding(dp)
        out.append(record("sarkozy.search", {"N": N}, _verdict(ok), list(ex.elements), dp.size))
    for N, size in ((3, 1), (4, 2)):
        got = sarkozy_search(N, "exhaustive").size
        out.append(record("sarkozy.search.small", {"N": N}, _verdict(got == size), got, size))
    return out


def suite_functional_equation(cfg: RunConfig, ctx: dict) -> list[dict]:
    rng = random.Random(cfg.seed("functional-equation"))
    chars = [c for q in range(1, cfg.q_max + 1) for c in enumerate_primitive(q)]
    tmax = min(30.0, cfg.T_max)
    out = []
    for _ in range(min(500, cfg.samples)):
        chi = rng.choice(chars)
        s = complex(rng.uniform(-0.5, 1.5), rng.uniform(-tmax, tmax))
        chk = functional_equation_residual(chi, (mp.mpf(s.real), mp.mpf(s.imag)))
        out.append(record("eqn:functional_equation", {"chi": chi.label, "s": [s.real, s.imag]},
                          _verdict(chk.contains_zero), float(chk.residual.hi), 0,
                          "residual enclosure must contain 0"))
    return out


SUITES: dict[str, Callable[[RunConfig, dict], list[dict]]] = {
    "constants": suite_constants,
    "sarkozy-constants": suite_sarkozy_constants,
    "zeros": suite_zeros,
    "bounds": suite_bounds,
    "convexity": suite_convexity,
    "powersum": suite_powersum,
    "sieve": suite_sieve,
    "mertens": suite_mertens,
    "sarkozy-search": suite_sarkozy_search,
    "functional-equation": suite_functional_equation,
}


def run_suite(name: str, cfg: RunConfig, ctx: dict | None = None) -> list[dict]:
    with precision(cfg.precision_bits):
        return SUITES[name](cfg, {} if ctx is None else ctx)

