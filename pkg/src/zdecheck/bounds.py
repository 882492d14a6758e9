"""Evaluators for the explicit bounds, and a comparator against computed zeros.

Every evaluator returns enclosures (``Interval``) or log-domain magnitudes
(``LogMagnitude``).  Bounds whose hypotheses fail raise ``DomainError``;
``verify_against_zeros`` turns that into a ``not_applicable`` certificate.
Certificate names follow the labels of the source statements so they can be
grepped, e.g. ``thm:GLFZDE.N`` or ``lem:Linnik``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .certificate import HOLDS, BoundCertificate, compare_verdict
from .characters import DirichletCharacter
from .numerics import ComplexBox, DomainError, Interval, LogMagnitude
from .zeros import ZeroCorpus, disc_count, rvm_count_window

__all__ = [
    "BoundCertificate",
    "C1",
    "page_constant",
    "landau_constant",
    "zfr_boundary",
    "landau_pair_bound",
    "DENSITY_VARIANTS",
    "density_bound",
    "density_bound_log10",
    "DHResult",
    "dh_repulsion",
    "dh_lower_constant",
    "dh_lower_log10",
    "lemma29_bound",
    "cor212_bound",
    "prop211_bound",
    "cor212_proof_bound",
    "disc_bounds",
    "basic_density_bound",
    "basic_density_interval",
    "nonexceptional_bound",
    "nonexceptional_log10",
    "verify_against_zeros",
    "sweep_requests",
]

_I = Interval.of
C1 = 1 / _I("9.645908801")
_LOG10 = _I(10).log()
_SQRT2 = _I(2).sqrt()
_SQRT5 = _I(5).sqrt()


def _ln(x) -> Interval:
    return _I(x).log()


def _lm(x: Interval) -> LogMagnitude:
    """Log-domain magnitude of a positive enclosure, taken at its midpoint."""
    if x.lo <= 0:
        raise DomainError("log-domain magnitude needs a positive value")
    return LogMagnitude.from_log10(float(mp.log10(x.mid)))


def _lm_log10(l10: Interval) -> LogMagnitude:
    return LogMagnitude.from_log10(float(l10.mid))


# --------------------------------------------------------------------------
# zero-free regions


def page_constant() -> Interval:
    """``(15 - 10 sqrt 2) / (2 (5 - sqrt 5))``, the Page-interval constant."""
    return (_I(15) - 10 * _SQRT2) / (2 * (_I(5) - _SQRT5))


def landau_constant() -> Interval:
    return (_I(15) - 10 * _SQRT2) / (_I(5) - _SQRT5)


def zfr_boundary(Q, t) -> Interval:
    """``1 - c1 / log max{Q, Q|t|}``; zeros other than ``beta_1(Q)`` lie to the left."""
    if Q < 3:
        raise DomainError("zero-free region needs Q >= 3")
    m = max(mp.mpf(Q), mp.mpf(Q) * abs(mp.mpf(t)))
    return 1 - C1 / _ln(m)


def landau_pair_bound(q: int, qp: int) -> Interval:
    """Upper bound for the smaller of two real zeros of distinct real characters.

    The stated form needs ``min(q, q') > 400000``; below that no real zero
    exists near 1 at all, so callers should treat smaller moduli as vacuous.
    """
    if q * qp <= 17:
        raise DomainError("needs q q' > 17")
    return 1 - landau_constant() / _ln(Fraction(q * qp, 17))


# --------------------------------------------------------------------------
# density estimates


DENSITY_VARIANTS = {
    # name: (sigma_min, leading log10, base log10 constant, Q exponent, starred)
    "thm_N": (Fraction(39, 40), 88, 421, 99, False),
    "thm_Nstar": (Fraction(39, 40), 93, 466, 170, True),
    "cor_N": (Fraction(0), 88, 421, 127, False),
    "cor_Nstar": (Fraction(0), 93, 466, 198, True),
}

DENSITY_NAMES = {
    "thm_N": "thm:GLFZDE.N",
    "thm_Nstar": "thm:GLFZDE.Nstar",
    "cor_N": "cor:GLFZDE.N",
    "cor_Nstar": "cor:GLFZDE.Nstar",
}


def density_bound_log10(variant: str, sigma, Q, beta1_gap=None) -> Interval:
    """Enclosure of ``log10`` of the stated bound for ``N`` or ``N*``."""
    if variant not in DENSITY_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    smin, lead, base, qexp, starred = DENSITY_VARIANTS[variant]
    s = _I(sigma)
    if float(sigma) < float(smin):
        hint = "use cor_N / cor_Nstar for sigma >= 0" if smin > 0 else "sigma must be >= 0"
        raise DomainError(f"{variant} needs sigma >= {smin}; {hint}")
    if Q < 3:
        raise DomainError("density bounds need Q >= 3")
    lq = _ln(Q)
    out = _I(lead) + (1 - s) * (_I(base) + qexp * lq / _LOG10)
    if starred and beta1_gap is not None:
        f = _I(beta1_gap) * lq
        capped = Interval(min(f.lo, mp.mpf(1)), min(f.hi, mp.mpf(1)))
        out = out + capped.log() / _LOG10
    return out


def density_bound(variant: str, sigma, Q, beta1_gap=None) -> LogMagnitude:
    """Stated bound for ``N(sigma, Q)`` or ``N*(sigma, Q)`` in the log domain.

    Starred variants without ``beta1_gap`` use the cap ``min{1, .} <= 1``.
    """
    return _lm_log10(density_bound_log10(variant, sigma, Q, beta1_gap))


# --------------------------------------------------------------------------
# Deuring-Heilbronn repulsion


_DH = (_I("670564.676"), _I("347029.502"), _I("107906.278"),
       _I("104.645"), _I("54.156"), _I("16.84"))


@dataclass(frozen=True)
class DHResult:
    """Repulsion bound; ``bound`` is ``None`` when the statement is vacuous."""

    bound: Interval | None
    trivial: bool
    notes: str


def dh_repulsion(Q, T, beta1) -> DHResult:
    """Upper bound for ``beta`` of any other zero with ``beta > 1/2`` and ``|gamma| <= T``."""
    if Q <= 400000:
        raise DomainError("repulsion bound needs Q > 400000")
    if T < 1:
        raise DomainError("repulsion bound needs T >= 1")
    lq, lt = _ln(Q), _ln(T)
    gap = 1 - _I(beta1)
    if not gap.certainly_gt(0):
        raise DomainError("beta1 must be < 1")
    if (1 - C1 / lq).certainly_gt(_I(beta1)):
        return DHResult(None, True, "beta1 below the zero-free boundary: no exceptional zero")
    a0, a1, a2, b0, b1, b2 = _DH
    x = a0 + a1 * lq + a2 * lt
    arg = 1 / (gap * x)
    if not arg.certainly_gt(1):
        return DHResult(None, True, "gap too large: the bound is >= 1 and says nothing")
    den = b0 + b1 * lq + b2 * lt
    return DHResult(1 - arg.log() / den, False, "")


def dh_lower_constant() -> Interval:
    """``670564.676 / log 400000 + 454935.78``; rounds up to 506921."""
    a0, a1, a2 = _DH[:3]
    return a0 / _ln(400000) + (a1 + a2)


def dh_lower_log10(sigma, Q, beta1_gap) -> Interval:
    """``log10`` of ``506921 (1-beta1) (log Q) (e^104.645 Q^71)^(1-sigma)``."""
    lq = _ln(Q)
    val = (_I(506921) * _I(beta1_gap) * lq).log() + (1 - _I(sigma)) * (_I("104.645") + 71 * lq)
    return val / _LOG10


# --------------------------------------------------------------------------
# disc counts


def lemma29_bound(r, q, T) -> Interval:
    """``r (2 log(qT) - 1) + 4`` for ``0 < r <= 1``, ``T >= 1``."""
    if not 0 < r <= 1:
        raise DomainError("disc bound needs 0 < r <= 1")
    if T < 1 or q < 1:
        raise DomainError("needs q >= 1 and T >= 1")
    return _I(r) * (2 * _ln(_I(q) * _I(T)) - 1) + 4


def cor212_bound(r, Q, T) -> Interval:
    """``r (1+1e-7)^-1 ((2/3) log(QT) + 13.04) + 2`` for ``1/(3 log QT) <= r <= 1/10``."""
    lqt = _ln(_I(Q) * _I(T))
    ri = _I(r)
    # the range check reads r as the decimal it was written as, so r = 0.1 is admitted
    if not (float(r) <= 0.1 and ri.hi >= (1 / (3 * lqt)).lo):
        raise DomainError("refined disc bound needs 1/(3 log QT) <= r <= 1/10")
    return ri / (1 + _I(Fraction(1, 10**7))) * (_I(2) / 3 * lqt + _I("13.04")) + 2


def _prop211_terms(r, q, T, const: str) -> Interval:
    ri = _I(r)
    lqt = _ln(_I(q) * _I(T))
    one2r = 1 + 2 * ri
    t1 = (lqt + _I(const)) / (4 + 8 * ri)
    t2 = (4 / _I(mp.pi) - 1) * (1 + 1 / ri).log() / one2r
    t4 = 8 * ri / (one2r * one2r) * (ri * (2 * lqt - 1) + 4)
    return t1 + t2 + _I("2.6908") + t4 + 1 / ri


def prop211_bound(r, q, T, const: str = "4.7098") -> Interval:
    """Bound for ``sum Re 1/(1+r+it-rho)`` over zeros with ``|1+it-rho| <= r``, ``0 < r < 1/2``."""
    if not 0 < r < 0.5:
        raise DomainError("weighted disc sum needs 0 < r < 1/2")
    return _prop211_terms(r, q, T, const)


def cor212_proof_bound(r, q, T, const: str = "4.7908") -> Interval:
    """Intermediate count ``2r (...)`` from the refined corollary's proof.

    The proof prints 4.7908 where the proposition states 4.7098; pass
    ``const`` to evaluate either.
    """
    if not 0 < r < 0.5:
        raise DomainError("needs 0 < r < 1/2")
    return 2 * _I(r) * _prop211_terms(r, q, T, const)


def disc_bounds(r, q, Q, T) -> tuple[Interval | None, Interval | None, Interval | None]:
    """``(lemma29, cor212, prop211)``; an entry is ``None`` when ``r`` is outside its range."""
    out = []
    for f, args in ((lemma29_bound, (r, q, T)), (cor212_bound, (r, Q, T)), (prop211_bound, (r, q, T))):
        try:
            out.append(f(*args))
        except DomainError:
            out.append(None)
    return tuple(out)


# --------------------------------------------------------------------------
# counting bounds


def basic_density_interval(Q, extrapolate: bool = False) -> Interval:
    if Q < 10**4 and not extrapolate:
        raise DomainError("N(0, Q) <= 0.64 Q^3 log Q is stated for Q >= 10^4")
    Qi = _I(Q)
    return _I("0.64") * Qi ** 3 * Qi.log()


def basic_density_bound(Q, extrapolate: bool = False) -> LogMagnitude:
    return _lm(basic_density_interval(Q, extrapolate))


def nonexceptional_log10(sigma, Q, A: Interval | None = None) -> Interval:
    """``log10`` of ``1.180016e87 (e^968.1455 Q^99)^(1-sigma)``, valid for ``sigma >= 1 - 1/(10A)``."""
    if A is None:
        from .constants import ledger
        A = ledger().A
    s = _I(sigma)
    if not s.certainly_ge(1 - 1 / (10 * A)):
        raise DomainError("non-exceptional bound needs sigma >= 1 - 1/(10A)")
    ln = _I("1.180016e87").log() + (1 - s) * (_I("968.1455") + 99 * _ln(Q))
    return ln / _LOG10


def nonexceptional_bound(sigma, Q) -> LogMagnitude:
    return _lm_log10(nonexceptional_log10(sigma, Q))


# --------------------------------------------------------------------------
# comparator


def _count_vs_log10(name: str, inputs: dict, n: int, l10: Interval, notes: str = "") -> BoundCertificate:
    """Certificate for an integer count against a bound known through its ``log10``."""
    if n == 0:
        verdict = HOLDS
        obs_l10 = None
    else:
        obs_l10 = _I(n).log() / _LOG10
        verdict = compare_verdict(obs_l10, l10)
    return BoundCertificate(name, inputs, _lm_log10(l10), n, verdict, notes,
                            bound_interval=l10, observed_interval=obs_l10)


def _with_bound(name: str, inputs: dict, observed: Interval, bound: Interval, notes: str = "",
                raw=None) -> BoundCertificate:
    cert = BoundCertificate.from_interval(name, inputs, observed, bound, notes)
    if raw is not None:
        return BoundCertificate(cert.name, cert.inputs, cert.bound, raw, cert.verdict, cert.notes,
                                cert.bound_interval, cert.observed_interval)
    return cert


def _character(corpus: ZeroCorpus, label: str) -> tuple[DirichletCharacter, object]:
    zs = corpus.by_label(label)
    return zs.character, zs


_CHI_FREE_T = {"cor:Linnik_lemma", "prop:HB_zero-count"}


def _eval_request(corpus: ZeroCorpus, req: dict) -> BoundCertificate:
    name = req["name"]
    inputs = {k: v for k, v in req.items() if k != "name"}

    if name in DENSITY_NAMES.values():
        variant = next(k for k, v in DENSITY_NAMES.items() if v == name)
        sigma, Q = req["sigma"], req["Q"]
        try:
            l10 = density_bound_log10(variant, sigma, Q, req.get("beta1_gap"))
        except DomainError as e:
            return BoundCertificate.not_applicable(name, inputs, str(e))
        n = corpus.count(sigma, Q)
        notes = ""
        if DENSITY_VARIANTS[variant][4]:
            notes = "observed is N(sigma, Q), an upper bound for N*"
            if req.get("beta1_gap") is None:
                notes += "; min{1, (1-beta1) log Q} capped at 1"
        return _count_vs_log10(name, inputs, n, l10, notes)

    if name == "lem:basic_density":
        Q = req["Q"]
        extrapolate = bool(req.get("extrapolate", False))
        try:
            b = basic_density_interval(Q, extrapolate)
        except DomainError as e:
            return BoundCertificate.not_applicable(name, inputs, str(e))
        n = corpus.count(0, Q)
        notes = "Q below 10^4: evaluated outside the stated range" if Q < 10**4 else ""
        return _with_bound(name, inputs, _I(n), b, notes, raw=n)

    if name == "lem:basic_density.window":
        chi, zs = _character(corpus, req["chi"])
        T = req["T"]
        try:
            main, err = rvm_count_window(chi, T)
        except DomainError as e:
            return BoundCertificate.not_applicable(name, inputs, str(e))
        corpus.require(chi.modulus, T)
        n = sum(1 for z in zs.zeros if z.gamma.lo >= -T and z.gamma.hi <= T)
        dev = abs(_I(n) - main)
        return _with_bound(name, inputs, dev, err, "observed is |count - main term|", raw=n)

    if name == "eqn:ZDE_nonexceptional":
        sigma, Q = req["sigma"], req["Q"]
        try:
            l10 = nonexceptional_log10(sigma, Q)
        except DomainError as e:
            return BoundCertificate.not_applicable(name, inputs, str(e))
        n = corpus.count(sigma, Q)
        notes = "derived for Q > 10^4; evaluated at desk scale" if Q <= 10**4 else ""
        return _count_vs_log10(name, inputs, n, l10, notes)

    if name == "lem:Linnik":
        chi, zs = _character(corpus, req["chi"])
        r, t, T, sigma = req["r"], req["t"], req["T"], req.get("sigma", 1.0)
        if sigma < 1 or abs(t) > T:
            return BoundCertificate.not_applicable(name, inputs, "needs sigma >= 1 and |t| <= T")
        try:
            b = lemma29_bound(r, chi.modulus, T)
        except DomainError as e:
            return BoundCertificate.not_applicable(name, inputs, str(e))
        n_s, amb_s = disc_count(chi, r, (sigma, t), zs)
        n_1, amb_1 = disc_count(chi, r, (1.0, t), zs)
        notes = f"n(r, 1+it) = {n_1}"
        if n_s > n_1:
            return BoundCertificate(name, inputs, _lm(b), n_s, "violated", notes + "; monotonicity in sigma fails",
                                    b, _I(n_s))
        if amb_s or amb_1:
            notes += f"; {max(amb_s, amb_1)} boundary zeros counted in"
        return _with_bound(name, inputs, _I(n_1), b, notes, raw=n_1)

    if name in _CHI_FREE_T:
        chi, zs = _character(corpus, req["chi"])
        r, t, T, Q = req["r"], req["t"], req["T"], req["Q"]
        q = chi.modulus
        if chi.is_trivial and abs(t) < 3e12:
            return BoundCertificate.not_applicable(name, inputs, "zeta case needs |t| >= 3e12")
        if not (Q >= 3 and T >= 1 and q <= Q and abs(t) <= T):
            return BoundCertificate.not_applicable(name, inputs, "needs Q >= 3, T >= 1, q <= Q, |t| <= T")
        if not chi.is_trivial and max(Q, T) <= 10**4:
            return BoundCertificate.not_applicable(name, inputs, "needs max{Q, T} > 10^4")
        try:
            b = cor212_bound(r, Q, T) if name == "cor:Linnik_lemma" else prop211_bound(r, q, T)
        except DomainError as e:
            return BoundCertificate.not_applicable(name, inputs, str(e))
        notes = "T is a formal height; zeros are only needed near 1+it"
        if name == "cor:Linnik_lemma":
            n, amb = disc_count(chi, r, (1.0, t), zs)
            alt = cor212_proof_bound(r, q, T, "4.7908")
            notes += f"; proof constant 4.7908 gives {float(alt.hi):.6g}, stated 4.7098 gives " \
                     f"{float(cor212_proof_bound(r, q, T, '4.7098').hi):.6g}"
            return _with_bound(name, inputs, _I(n), b, notes, raw=n)
        total = _I(0)
        ctr = ComplexBox.of((1.0, t))
        shift = ComplexBox.of((1.0 + r, t))
        rr = _I(r) * _I(r)
        for z in zs.zeros:
            dre, dim = ctr.re - z.beta, ctr.im - z.gamma
            d2 = dre * dre + dim * dim
            if d2.lo > rr.hi:
                continue
            w = ComplexBox(shift.re - z.beta, shift.im - z.gamma)
            term = w.re / (w.re * w.re + w.im * w.im)
            total = total + (term if d2.hi <= rr.lo else Interval.hull(_I(0), term))
        return _with_bound(name, inputs, total, b, notes)

    if name == "thm:DH":
        return BoundCertificate.not_applicable(
            name, inputs, "needs Q > 400000 and an exceptional zero; none exists at desk scale")

    raise ValueError(f"unknown certificate {name!r}")


def verify_against_zeros(zero_data: ZeroCorpus, certificate_requests) -> list[BoundCertificate]:
    """Evaluate each request against the corpus.

    Requests are dicts with a ``name`` and the inputs of that bound.  An
    incomplete corpus raises ``IncompleteZeroData``; it never passes.
    """
    return [_eval_request(zero_data, req) for req in certificate_requests]


def sweep_requests(corpus: ZeroCorpus, n: int, seed: int = 0) -> list[dict]:
    """``n`` random requests per bound family over the corpus's range."""
    rng = random.Random(seed)
    labels = [zs.character.label for zs in corpus.sets]
    nontriv = [zs.character.label for zs in corpus.sets if not zs.character.is_trivial]
    Tmax = min(zs.T for zs in corpus.sets)
    Qmax = min(corpus.q_max, int(Tmax))
    formal_T = 10**5
    reqs: list[dict] = []
    for _ in range(n):
        Q = rng.randint(3, Qmax)
        reqs.append({"name": "thm:GLFZDE.N", "sigma": rng.uniform(39 / 40, 1.0), "Q": Q})
        reqs.append({"name": "thm:GLFZDE.Nstar", "sigma": rng.uniform(39 / 40, 1.0), "Q": Q})
        reqs.append({"name": "cor:GLFZDE.N", "sigma": rng.uniform(0, 1.0), "Q": Q})
        reqs.append({"name": "cor:GLFZDE.Nstar", "sigma": rng.uniform(0, 1.0), "Q": Q})
        reqs.append({"name": "lem:basic_density", "Q": Q, "extrapolate": True})
        reqs.append({"name": "eqn:ZDE_nonexceptional", "sigma": rng.uniform(0.975, 1.0), "Q": Q})
        r = rng.uniform(1e-3, 1.0)
        reqs.append({"name": "lem:Linnik", "chi": rng.choice(labels), "r": r,
                     "t": rng.uniform(-(Tmax - r - 0.01), Tmax - r - 0.01),
                     "T": Tmax, "sigma": 1.0 + rng.choice([0.0, rng.uniform(0, 0.5)])})
        chi = rng.choice(nontriv)
        q = int(chi.split(":")[0])
        lo = 1 / (3 * float(mp.log(corpus.q_max * formal_T)))
        reqs.append({"name": "cor:Linnik_lemma", "chi": chi, "r": rng.uniform(lo, 0.1),
                     "t": rng.uniform(-Tmax + 0.2, Tmax - 0.2), "T": formal_T, "Q": max(q, corpus.q_max)})
        reqs.append({"name": "prop:HB_zero-count", "chi": chi, "r": rng.uniform(1e-3, 0.499),
                     "t": rng.uniform(-Tmax + 0.6, Tmax - 0.6), "T": formal_T, "Q": max(q, corpus.q_max)})
    return reqs
