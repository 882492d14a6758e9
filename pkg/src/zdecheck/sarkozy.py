"""Constants of the shifted-prime difference application, and small exact searches.

The magnitude chain lives in the log domain (values near ``10^-6926``), the
final exponent ``kappa_1 - kappa_2`` in exact rationals, and the inequality
``e^{-Bx} + x/2 <= 1`` is certified by interval subdivision.

The searches look for large ``A`` in ``{1..N}`` such that ``a - b + 1`` is
never prime for ``a > b`` in ``A``, i.e. no difference lies in
``{p - 1 : p prime}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import primes_up_to
from .certificate import HOLDS, INCONCLUSIVE, BoundCertificate, compare_verdict
from .numerics import Interval, LogMagnitude, precision

__all__ = [
    "SarkozyConstants",
    "constants",
    "verify_B_inequality",
    "zde_application_chain",
    "compute_c_and_kappa",
    "AvoidingSet",
    "forbidden_differences",
    "sarkozy_search",
    "is_avoiding",
    "recheck_avoiding",
]

LAMBDA1 = Fraction(1, 20)
LAMBDA2_LOG10 = 103
LAMBDA3 = 198
B = 323905
C = Fraction(9, 10**14)
PRINTED_CHAIN = "1.24e-6926"
PRINTED_INV4M = "1.28e-6926"


def _ivq(x: Fraction) -> Interval:
    return Interval.of(x.numerator) / Interval.of(x.denominator)


@dataclass(frozen=True)
class SarkozyConstants:
    lambda1: Fraction
    lambda2: LogMagnitude
    lambda3: int
    M_log10: Interval
    B: int
    c: Fraction
    tau0: Fraction

    def to_dict(self) -> dict:
        return {"lambda1": str(self.lambda1), "lambda2_log10": self.lambda2.log10_abs,
                "lambda3": self.lambda3, "M_log10": self.M_log10.to_json(), "B": self.B,
                "c": str(self.c), "tau0": str(self.tau0)}


def _ln_M() -> Interval:
    """``log(7 * 3^6 * 2^22993)``."""
    return Interval.of(7 * 3 ** 6).log() + 22993 * Interval.of(2).log()


def constants() -> SarkozyConstants:
    with precision(128):
        m10 = _ln_M() / Interval.of(10).log()
    return SarkozyConstants(LAMBDA1, LogMagnitude.from_log10(LAMBDA2_LOG10), LAMBDA3, m10, B, C, C)


# --------------------------------------------------------------------------
# e^{-Bx} + x/2 <= 1


@dataclass(frozen=True)
class BInequalityReport:
    certificate: BoundCertificate
    boxes: int
    inconclusive: int
    analytic_cutoff: float


def verify_B_inequality(lo: float = 1e-9, hi: Fraction = LAMBDA1, initial_boxes: int = 1000,
                        max_depth: int = 40) -> BInequalityReport:
    """Certify ``e^{-Bx} + x/2 <= 1`` on ``(lo, hi]`` by interval subdivision.

    On ``(0, (2B-1)/B^2]`` the bound ``e^{-y} <= 1 - y + y^2/2`` gives
    ``f(x) <= 1 - x (B - 1/2 - B^2 x / 2) <= 1``; that range is reported as
    ``analytic_cutoff`` and is not needed for the box scan.
    """
    with precision(128):
        Bi = Interval.of(B)
        h = _ivq(Fraction(hi))
        a0 = Interval.of(lo)
        step = (h - a0) / initial_boxes
        stack = []
        for i in range(initial_boxes):
            a = Interval.of((a0 + step * i).lo)
            b = Interval.of((a0 + step * (i + 1)).hi) if i < initial_boxes - 1 else h
            stack.append((a, b, 0))
        boxes = inconclusive = 0
        worst = Interval.of(-1)
        while stack:
            a, b, d = stack.pop()
            # e^{-Bx} decreases and x/2 increases, so f <= e^{-B a} + b/2 on [a, b]
            up = (-(Bi * a)).exp() + b / 2
            if up.hi <= 1:
                boxes += 1
                if up.hi > worst.hi:
                    worst = up
                continue
            if d >= max_depth:
                boxes += 1
                inconclusive += 1
                continue
            m = Interval.of(((a + b) / 2).mid)
            stack.append((a, m, d + 1))
            stack.append((m, b, d + 1))
        cutoff = float(Fraction(2 * B - 1, B * B))
    verdict = HOLDS if inconclusive == 0 else INCONCLUSIVE
    cert = BoundCertificate("prop:ZDE_application.B_inequality",
                            {"B": B, "lo": lo, "hi": str(hi), "boxes": boxes},
                            LogMagnitude.from_float(1.0), float(worst.hi), verdict,
                            f"max of box upper bounds {float(worst.hi):.12g}; {inconclusive} inconclusive",
                            Interval.of(1), worst)
    return BInequalityReport(cert, boxes, inconclusive, cutoff)


# --------------------------------------------------------------------------
# magnitude chain


@dataclass(frozen=True)
class ChainResult:
    value: LogMagnitude
    sup_log10: Interval
    inv4M_log10: Interval
    certificates: tuple[BoundCertificate, ...]


def zde_application_chain(Q=10**6) -> ChainResult:
    """``lambda2 (2B - lambda3)/(B - lambda3) (e^{-lambda1 (B - lambda3)} - Q^{-(B - lambda3)/2})``.

    The expression increases with ``Q``, so its supremum over ``Q >= 10`` is
    the ``Q -> infinity`` limit; that limit is compared with 1.24e-6926, and
    1.28e-6926 with ``1/(4M)``.
    """
    if Q < 10:
        raise ValueError("needs Q >= 10")
    with precision(160):
        ln10 = Interval.of(10).log()
        bl = B - LAMBDA3
        pref = LAMBDA2_LOG10 * ln10 + (Interval.of(2 * B - LAMBDA3) / bl).log()
        e1 = -_ivq(LAMBDA1 * bl)
        e2 = -Interval.of(bl) / 2 * Interval.of(Q).log()
        # ln(e^{e1} - e^{e2}) = e1 + ln(1 - e^{e2 - e1}); e2 - e1 is hugely negative
        diff = e2 - e1
        tail = (1 - diff.exp()).log()
        val_ln = pref + e1 + tail
        sup_ln = pref + e1
        sup10 = sup_ln / ln10
        inv4M10 = -(Interval.of(4).log() + _ln_M()) / ln10
        p124 = Interval.of("1.24").log() / ln10 - 6926
        p128 = Interval.of("1.28").log() / ln10 - 6926
        c1 = BoundCertificate("prop:ZDE_application.chain", {"Q": "all Q >= 10"},
                              LogMagnitude.from_log10(float(p124.mid)), float(sup10.mid),
                              compare_verdict(sup10, p124), "log10 domain: sup over Q vs 1.24e-6926",
                              p124, sup10)
        c2 = BoundCertificate("prop:ZDE_application.inv4M", {},
                              LogMagnitude.from_log10(float(inv4M10.mid)), float(p128.mid),
                              compare_verdict(p128, inv4M10), "log10 domain: 1.28e-6926 vs 1/(4M)",
                              inv4M10, p128)
        c0 = BoundCertificate("prop:ZDE_application.strict", {},
                              LogMagnitude.from_log10(float(p128.mid)), float(p124.mid),
                              compare_verdict(p124, p128), "1.24e-6926 < 1.28e-6926", p128, p124)
        value = LogMagnitude.from_log10(float((val_ln / ln10).mid))
    return ChainResult(value, sup10, inv4M10, (c1, c0, c2))


# --------------------------------------------------------------------------
# c and kappa


@dataclass(frozen=True)
class CKappa:
    c_max: Interval
    first_term: Fraction
    second_term: Interval
    kappa_gap: Fraction
    certificate: BoundCertificate


def compute_c_and_kappa() -> CKappa:
    """``c_max = min(1/(16B), 1e-6 lambda1 / (32 log 4M))`` and ``kappa_1 - kappa_2`` at ``tau0 = c``."""
    first = Fraction(1, 16 * B)
    with precision(128):
        second = _ivq(Fraction(1, 10**6) * LAMBDA1 / 32) / (Interval.of(4).log() + _ln_M())
        f = _ivq(first)
        c_max = second if second.hi < f.lo else (f if f.hi < second.lo else
                                                 Interval(min(f.lo, second.lo), min(f.hi, second.hi)))
        cert = BoundCertificate.from_interval("prop:pre-Sarkozy.c", {"c": str(C)}, _ivq(C), c_max,
                                              "c must lie below c_max")
    kappa = C * (Fraction(1, 6 * 10**4) - Fraction(2, 10**6))
    return CKappa(c_max, first, second, kappa, cert)


# --------------------------------------------------------------------------
# searches


def forbidden_differences(N: int) -> list[int]:
    """``{p - 1 : p prime, p <= N}``; differences in ``A`` are at most ``N - 1``."""
    return [int(p) - 1 for p in primes_up_to(N)]


@dataclass(frozen=True)
class AvoidingSet:
    N: int
    elements: tuple[int, ...]
    method: str

    @property
    def size(self) -> int:
        return len(self.elements)

    def to_json(self) -> str:
        return json.dumps({"N": self.N, "method": self.method, "elements": list(self.elements)})


def _conflicts(N: int) -> list[int]:
    """Bitmask of elements in ``1..N`` that cannot coexist with ``i``."""
    D = forbidden_differences(N)
    out = [0] * (N + 1)
    for i in range(1, N + 1):
        m = 0
        for d in D:
            if i - d >= 1:
                m |= 1 << (i - d)
            if i + d <= N:
                m |= 1 << (i + d)
        out[i] = m
    return out


def _elements(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _exhaustive(N: int) -> int:
    """Visit every valid subset; lexicographically first maximum wins ties."""
    conf = _conflicts(N)
    best = [0, 0]

    def rec(i: int, chosen: int, size: int) -> None:
        if i > N:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if not conf[i] & chosen:
            rec(i + 1, chosen | (1 << i), size + 1)
        rec(i + 1, chosen, size)

    rec(1, 0, 0)
    return best[1]


def _russian_doll(N: int) -> int:
    """Maximum independent set by Russian-doll search over suffixes ``{i..N}``."""
    conf = _conflicts(N)
    c = [0] * (N + 2)
    best_mask = 0
    best = 0

    for i in range(N, 0, -1):
        found = [False]

        def expand(cand: int, chosen: int, size: int) -> None:
            nonlocal best, best_mask
            if cand == 0:
                if size > best:
                    best, best_mask = size, chosen
                    found[0] = True
                return
            while cand:
                if size + cand.bit_count() <= best:
                    return
                j = (cand & -cand).bit_length() - 1
                if size + c[j] <= best:
                    return
                cand &= ~(1 << j)
                expand(cand & ~conf[j], chosen | (1 << j), size + 1)
                if found[0]:
                    return

        suffix = ((1 << (N + 1)) - 1) & ~((1 << (i + 1)) - 1)
        expand(suffix & ~conf[i], 1 << i, 1)
        c[i] = best
    return best_mask


def _greedy(N: int) -> tuple[int, ...]:
    """Scan upwards, taking each element not yet blocked by a chosen one."""
    D = np.asarray(forbidden_differences(N), dtype=np.int64)
    blocked = np.zeros(N + 2, dtype=bool)
    blocked[0] = True
    blocked[N + 1] = False
    out = []
    i = 1
    while i <= N:
        i += int(np.argmin(blocked[i:]))
        if i > N:
            break
        out.append(i)
        nb = i + D
        blocked[nb[nb <= N]] = True
        i += 1
    return tuple(out)


_LIMITS = {"exhaustive": 40, "dp": 200, "greedy": 10**6}


def sarkozy_search(N: int, method: str = "dp") -> AvoidingSet:
    if method not in _LIMITS:
        raise ValueError(f"unknown method {method!r}")
    if not 1 <= N <= _LIMITS[method]:
        raise ValueError(f"{method} search needs 1 <= N <= {_LIMITS[method]}")
    if method == "greedy":
        elems = _greedy(N)
    else:
        elems = _elements(_exhaustive(N) if method == "exhaustive" else _russian_doll(N))
    return AvoidingSet(N, elems, method)


def is_avoiding(elements) -> bool:
    """Direct pairwise check with trial-division primality, independent of the sieve."""
    def prime(n: int) -> bool:
        if n < 2:
            return False
        k = 2
        while k * k <= n:
            if n % k == 0:
                return False
            k += 1
        return True

    els = sorted(elements)
    return all(not prime(a - b + 1) for i, a in enumerate(els) for b in els[:i])


def recheck_avoiding(s: AvoidingSet) -> bool:
    return (len(set(s.elements)) == len(s.elements)
            and all(1 <= a <= s.N for a in s.elements)
            and is_avoiding(s.elements))
