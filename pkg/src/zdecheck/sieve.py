"""Direct checks of the pre-sifted large sieve, its integrated form, and two prime sums.

Character sums and kernels are computed in float64.  Every float result is
widened by an a priori rounding bound before it becomes an ``Interval``, and
verdicts compare those enclosures.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .arith import primes_up_to
from .certificate import BoundCertificate
from .characters import enumerate_primitive
from .numerics import Interval

__all__ = [
    "SieveInstance",
    "least_prime_factor",
    "sifted_support",
    "large_sieve_check",
    "integrated_sieve_check",
    "integrated_lhs",
    "integrated_lhs_quadrature",
    "random_instances",
    "mertens_bounds",
    "mertens_sweep",
    "MertensTable",
]

_U = 2.0 ** -53


def least_prime_factor(n: int) -> float:
    """``P^-(n)``, with ``P^-(1) = inf``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return math.inf
    p = 2
    while p * p <= n:
        if n % p == 0:
            return p
        p += 1
    return n


def sifted_support(Q: int, U: int, V: int) -> list[int]:
    """``n`` in ``(U, U + floor V]`` with ``P^-(n) > Q``."""
    return [n for n in range(U + 1, U + int(V) + 1) if least_prime_factor(n) > Q]


@dataclass(frozen=True)
class SieveInstance:
    Q: int
    U: int
    V: int
    coefficients: dict
    T: float = 1.0

    def __post_init__(self) -> None:
        if self.Q < 1 or self.U < 0 or self.V < 1:
            raise ValueError("needs Q >= 1, U >= 0, V >= 1")
        for n in self.coefficients:
            if not (self.U < n <= self.U + self.V):
                raise ValueError(f"coefficient at n = {n} lies outside ({self.U}, {self.U + self.V}]")
            if least_prime_factor(n) <= self.Q:
                raise ValueError(f"coefficient at n = {n} has a prime factor <= Q")

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ns = sorted(self.coefficients)
        return np.asarray(ns, dtype=np.int64), np.asarray([complex(self.coefficients[n]) for n in ns])

    def to_dict(self) -> dict:
        return {"Q": self.Q, "U": self.U, "V": self.V, "T": self.T,
                "coefficients": {str(n): [complex(a).real, complex(a).imag] for n, a in self.coefficients.items()}}


@lru_cache(maxsize=64)
def _characters_upto(Q: int) -> tuple[tuple[float, tuple[np.ndarray, ...]], ...]:
    """``(log(Q/q), value tables)`` for each modulus with a nonzero weight."""
    out = []
    for q in range(1, Q):
        chars = tuple(c.values for c in enumerate_primitive(q))
        if chars:
            out.append((math.log(Q / q), chars))
    return tuple(out)


def _char_sums(inst: SieveInstance):
    ns, a = inst.arrays()
    for w, tables in _characters_upto(inst.Q):
        for vals in tables:
            yield w, a * vals[ns % len(vals)]


def _sum_abs2(a: np.ndarray) -> Interval:
    s = float(np.sum(np.abs(a) ** 2))
    e = 1.01 * (len(a) + 4) * _U * s
    return Interval(s - e, s + e) if s else Interval.of(0)


def large_sieve_check(inst: SieveInstance) -> BoundCertificate:
    """``sum_q log(Q/q) sum_chi |sum a_n chi(n)|^2 <= (V + Q^2 - 1) sum |a_n|^2``."""
    if inst.Q > 10 or inst.V > 500:
        raise ValueError("exhaustive range is Q <= 10, V <= 500")
    ns, a = inst.arrays()
    l1 = float(np.sum(np.abs(a)))
    lo = hi = 0.0
    for w, v in _char_sums(inst):
        s = abs(complex(np.sum(v)))
        e = 1.01 * (len(v) + 4) * _U * l1
        hi += w * (s + e) ** 2
        lo += w * max(s - e, 0.0) ** 2
    lhs = Interval(lo * (1 - 1e-12), hi * (1 + 1e-12)) if hi else Interval.of(0)
    rhs = (Interval.of(inst.V) + inst.Q ** 2 - 1) * _sum_abs2(a)
    return BoundCertificate.from_interval(
        "lem:large_sieve", {"Q": inst.Q, "U": inst.U, "V": inst.V, "support": len(ns)}, lhs, rhs)


def _kernel(ns: np.ndarray, T: float) -> np.ndarray:
    """``int_{-T}^{T} (m/n)^{it} dt``, with the removable singularity at ``m = n`` set to ``2T``."""
    lg = np.log(ns.astype(float))
    d = lg[None, :] - lg[:, None]
    with np.errstate(invalid="ignore", divide="ignore"):
        k = 2 * np.sin(T * d) / d
    k[d == 0] = 2 * T
    return k


def integrated_lhs(inst: SieveInstance) -> Interval:
    """Closed form of ``sum_q log(Q/q) sum_chi int_{-T}^{T} |sum a_n chi(n) n^{-it}|^2 dt``."""
    ns, a = inst.arrays()
    K = _kernel(ns, inst.T)
    l1 = float(np.sum(np.abs(a)))
    n = len(ns)
    T = inst.T
    # per-entry kernel error: |d/dd sin(Td)/d| <= 2T^2 against a 28u error in d, plus sin's own ulps
    entry = (120 * T * T + 10 * T) * _U
    val = err = 0.0
    for w, v in _char_sums(inst):
        val += w * float(np.real(np.conj(v) @ K @ v))
        err += w * 1.01 * l1 * l1 * (entry + 2 * T * (2 * n + 10) * _U)
    err += 1e-12 * abs(val)
    return Interval(val - err, val + err)


def integrated_lhs_quadrature(inst: SieveInstance) -> tuple[float, float]:
    """Adaptive quadrature of the same integral; returns ``(value, error estimate)``."""
    ns, _ = inst.arrays()
    lg = np.log(ns.astype(float))
    pairs = list(_char_sums(inst))

    def f(t: float) -> float:
        ph = np.exp(-1j * t * lg)
        return sum(w * abs(complex(np.sum(v * ph))) ** 2 for w, v in pairs)

    val, err = quad(f, -inst.T, inst.T, limit=1000, epsabs=1e-11, epsrel=1e-12)
    return val, err


def integrated_sieve_check(inst: SieveInstance) -> BoundCertificate:
    """``... <= 7 sum |a_n|^2 (n + Q^2 max{T, 3})``."""
    if inst.T < 1:
        raise ValueError("integrated form needs T >= 1")
    ns, a = inst.arrays()
    lhs = integrated_lhs(inst)
    weights = ns.astype(float) + inst.Q ** 2 * max(inst.T, 3.0)
    s = float(np.sum(np.abs(a) ** 2 * weights))
    e = 1.01 * (len(ns) + 6) * _U * s
    rhs = 7 * Interval(s - e, s + e)
    return BoundCertificate.from_interval(
        "cor:Ramare1", {"Q": inst.Q, "U": inst.U, "V": inst.V, "T": inst.T, "support": len(ns)}, lhs, rhs)


def random_instances(count: int, seed: int = 0, qmax: int = 5, vmax: int = 200,
                     tmax: float = 20.0, umax: int = 300) -> list[SieveInstance]:
    """Random complex coefficients on random subsets of the sifted support."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        Q = rng.randint(1, qmax)
        U = rng.randint(0, umax)
        V = rng.randint(1, vmax)
        supp = sifted_support(Q, U, V)
        if not supp:
            continue
        k = rng.randint(1, len(supp))
        chosen = rng.sample(supp, k)
        coeffs = {n: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for n in chosen}
        out.append(SieveInstance(Q, U, V, coeffs, rng.uniform(1.0, tmax)))
    return out


# --------------------------------------------------------------------------
# prime sums


@dataclass(frozen=True)
class MertensTable:
    """Primes up to ``xmax`` with prefix sums of ``log p / p`` and ``(log p)^2 / p`` and their error bounds."""

    primes: np.ndarray
    s1: np.ndarray
    e1: np.ndarray
    s2: np.ndarray
    e2: np.ndarray

    def prefix(self, x: float) -> tuple[int, Interval, Interval]:
        i = int(np.searchsorted(self.primes, x, side="right"))
        if i == 0:
            return 0, Interval.of(0), Interval.of(0)
        j = i - 1
        return i, Interval(self.s1[j] - self.e1[j], self.s1[j] + self.e1[j]), \
            Interval(self.s2[j] - self.e2[j], self.s2[j] + self.e2[j])


@lru_cache(maxsize=2)
def _table(xmax: int) -> MertensTable:
    p = primes_up_to(xmax)
    lp = np.log(p.astype(float))
    t1 = lp / p
    t2 = lp * lp / p
    s1 = np.cumsum(t1)
    s2 = np.cumsum(t2)
    k = np.arange(1, len(p) + 1)
    # each term carries a few ulps; the running sum adds k ulps of the partial sum
    e1 = 1.01 * (k + 4) * _U * s1
    e2 = 1.01 * (k + 6) * _U * s2
    return MertensTable(p, s1, e1, s2, e2)


def mertens_bounds(x: float, y: float, table: MertensTable | None = None) -> list[BoundCertificate]:
    """Certificates for ``log x - 2 <= sum_{p<=x} log p/p <= log x`` and the squared-log tail bound."""
    if not (2 <= x <= y <= 10**7):
        raise ValueError("needs 2 <= x <= y <= 10^7")
    tab = table if table is not None else _table(int(max(y, 2)))
    _, a1, b1 = tab.prefix(x)
    _, _, b2 = tab.prefix(y)
    lx, ly = Interval.of(x).log(), Interval.of(y).log()
    inputs = {"x": x, "y": y}
    lower = BoundCertificate.from_interval("mertens.lower", inputs, lx - 2, a1)
    upper = BoundCertificate.from_interval("mertens.upper", inputs, a1, lx)
    sq = BoundCertificate.from_interval("mertens.squares", inputs, b2 - b1,
                                        (ly * ly + 4 * ly - lx * lx) / 2)
    return [lower, upper, sq]


@dataclass(frozen=True)
class MertensSweep:
    xmax: int
    primes_checked: int
    pairs_checked: int
    worst_upper_margin: float
    worst_lower_margin: float
    worst_squares_margin: float
    ok: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def mertens_sweep(xmax: int = 10**7, grid: int = 200) -> MertensSweep:
    """Check both bounds for every real ``x`` in ``[2, xmax]`` and the tail bound on a grid.

    The first sum is a step function, so the upper bound is tightest at each
    prime and the lower bound just before the next prime; checking those
    points covers the whole range.  For the tail, each ``x`` on a log grid is
    paired with every prime ``y``, which is where the left side jumps.
    """
    tab = _table(xmax)
    p = tab.primes.astype(float)
    lp = np.log(p)
    s1_hi = tab.s1 + tab.e1
    s1_lo = tab.s1 - tab.e1
    slack = 1e-12
    up = lp - s1_hi                                   # at x = p
    nxt = np.append(lp[1:], math.log(xmax))           # x just below the next prime or xmax
    low = s1_lo - (nxt - 2)
    ok = bool(np.all(up > slack) and np.all(low > slack))
    xs = np.unique(np.concatenate([np.geomspace(2, xmax, grid), p[p <= 100]]))
    worst_sq = math.inf
    pairs = 0
    s2_hi = tab.s2 + tab.e2
    s2_lo = tab.s2 - tab.e2
    for x in xs:
        i = int(np.searchsorted(p, x, side="right"))
        base = s2_lo[i - 1] if i > 0 else 0.0
        lx = math.log(x)
        ys = p[i:]
        lhs = s2_hi[i:] - base
        rhs = 0.5 * (lp[i:] ** 2 + 4 * lp[i:] - lx * lx)
        m = rhs - lhs
        pairs += len(ys)
        if len(m):
            worst_sq = min(worst_sq, float(m.min()))
    ok = ok and worst_sq > slack
    return MertensSweep(xmax, len(p), pairs, float(up.min()), float(low.min()), worst_sq, ok)
