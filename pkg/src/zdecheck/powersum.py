"""Exhaustive checks of two lower bounds for power sums.

``turan_witness`` scans ``k in [M+1, M+N]`` for
``|z_1^k + ... + z_N^k| >= 1.007 (4e(1+M/N))^-N |z_1|^k``.
``nonneg_witness`` finds the least ``j`` with
``Re sum b_n z_n^j >= eps/(32+4 eps) b_1 |z_1|^j`` inside the allowed range.

Powers are accumulated in float64 after scaling every ``z_n`` by the largest
modulus, so nothing overflows.  Each float comparison carries an a priori
rounding bound; when a decision falls inside that bound it is redone in
mpmath at 40 digits.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np
from mpmath import mp

from .numerics import LogMagnitude

__all__ = [
    "PowerSumInstance",
    "Witness",
    "turan_constant",
    "turan_witness",
    "nonneg_witness",
    "random_turan_instances",
    "random_nonneg_instances",
    "adversarial_instances",
    "sweep_turan",
    "sweep_nonneg",
    "SweepReport",
    "sharpness_probe",
]

_U = 2.0 ** -53
_LOG10E = math.log10(math.e)


@dataclass(frozen=True)
class PowerSumInstance:
    z: tuple[complex, ...]
    M: int = 0
    epsilon: float = 1.0

    def __post_init__(self) -> None:
        if not self.z:
            raise ValueError("instance needs at least one number")
        if self.z[0] == 0:
            raise ValueError("z_1 must be nonzero")
        if self.M < 0:
            raise ValueError("M must be nonnegative")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        object.__setattr__(self, "z", tuple(complex(x) for x in self.z))

    @property
    def N(self) -> int:
        return len(self.z)

    def to_dict(self) -> dict:
        return {"z": [[x.real, x.imag] for x in self.z], "M": self.M, "epsilon": self.epsilon}

    @classmethod
    def from_dict(cls, d: dict) -> "PowerSumInstance":
        return cls(tuple(complex(a, b) for a, b in d["z"]), int(d.get("M", 0)), float(d.get("epsilon", 1.0)))


@dataclass(frozen=True)
class Witness:
    """``attained`` and ``required`` are log-domain, so huge exponents are safe."""

    k: int | None
    attained: LogMagnitude
    required: LogMagnitude
    ok: bool
    rechecked: bool = False


def turan_constant(M: int, N: int) -> float:
    """``log10`` of ``1.007 (4e(1+M/N))^-N``."""
    return math.log10(1.007) - N * math.log10(4 * math.e * (1 + M / N))


def _scaled_powers(z: np.ndarray, kmax: int) -> tuple[np.ndarray, float]:
    """Rows ``(z/m)^k`` for ``k = 1..kmax`` with ``m = max |z|``; returns the table and ``log m``."""
    m = float(np.max(np.abs(z)))
    u = z / m
    p = np.empty((kmax, len(z)), dtype=complex)
    cur = np.ones(len(z), dtype=complex)
    for k in range(kmax):
        cur = cur * u
        p[k] = cur
    return p, math.log(m)


def _err(absp: np.ndarray, k: np.ndarray, n: int) -> np.ndarray:
    # k complex products each add <= sqrt(5) u relative error; summing n terms adds n u
    return 1.01 * (3 * k + n + 2) * _U * absp.sum(axis=1) + 1e-300


def _mp_turan(inst: PowerSumInstance, k: int) -> tuple[float, float]:
    with mp.workdps(40):
        s = mp.fsum([mp.mpc(x) ** k for x in inst.z])
        lhs = mp.log10(abs(s)) if s != 0 else -mp.inf
        rhs = mp.log10(1.007) - inst.N * mp.log10(4 * mp.e * (1 + mp.mpf(inst.M) / inst.N)) \
            + k * mp.log10(abs(mp.mpc(inst.z[0])))
        return float(lhs), float(rhs)


def turan_witness(inst: PowerSumInstance) -> Witness:
    """Best ``k`` in ``[M+1, M+N]`` for the Kolesnik-Straus bound.

    ``k`` maximises ``|sum z^k| / |z_1|^k``, which equals the ``k`` maximising
    ``|sum z^k|`` whenever ``|z_1| = 1``.
    """
    N, M = inst.N, inst.M
    if N > 12 or M + N > 200:
        raise ValueError("exhaustive scan limited to N <= 12 and M + N <= 200")
    z = np.asarray(inst.z)
    p, logm = _scaled_powers(z, M + N)
    ks = np.arange(M + 1, M + N + 1)
    rows = p[M:M + N]
    s = np.abs(rows.sum(axis=1))
    err = _err(np.abs(rows), ks, N)
    log_z1 = math.log(abs(inst.z[0]))
    # log10 of lower bound on |sum|/|z_1|^k
    with np.errstate(divide="ignore"):
        lo = np.where(s - err > 0, np.log10(np.maximum(s - err, 1e-320)), -np.inf) + ks * (logm - log_z1) * _LOG10E
        mid = np.log10(np.maximum(s, 1e-320)) + ks * (logm - log_z1) * _LOG10E
    c = turan_constant(M, N)
    i = int(np.argmax(mid))
    k = int(ks[i])
    rechecked = False
    tol = 1e-9
    if lo[i] >= c + tol:
        ok = True
        att = float(mid[i])
    else:
        lhs, rhs = _mp_turan(inst, k)
        att = lhs - k * log_z1 * _LOG10E
        ok = lhs >= rhs
        rechecked = True
    shift = k * log_z1 * _LOG10E
    return Witness(k, LogMagnitude.from_log10(att + shift), LogMagnitude.from_log10(c + shift), ok, rechecked)


def nonneg_witness(inst: PowerSumInstance, b=None, jmax_cap: int = 10_000) -> Witness:
    """Least ``j`` in the allowed range with the required real-part lower bound.

    Without ``b`` the range is ``(8+eps) M`` with ``M = sum |z_n| / |z_1|``;
    with ``b`` it is ``(8+eps) b_1^-1 sum b_n |z_n| / (|z_1| + |z_n|)``.
    """
    eps = inst.epsilon
    z = np.asarray(inst.z)
    az = np.abs(z)
    a1 = float(az[0])
    if b is None:
        bb = np.ones(len(z))
        scan = (8 + eps) * float(az.sum()) / a1
    else:
        bb = np.asarray(b, dtype=float)
        if bb.shape != z.shape or np.any(bb < 0) or bb[0] <= 0:
            raise ValueError("b must be nonnegative, match z in length, and have b_1 > 0")
        scan = (8 + eps) / bb[0] * float(np.sum(bb * az / (a1 + az)))
    jmax = int(math.floor(scan * (1 + 1e-12)))
    if jmax > jmax_cap:
        raise ValueError(f"scan range {jmax} exceeds {jmax_cap}")
    c = eps / (32 + 4 * eps)
    log_c = math.log(c * bb[0])
    log_a1 = math.log(a1)
    if jmax < 1:
        return Witness(None, LogMagnitude(0), LogMagnitude.from_ln(log_c + log_a1), False)
    p, logm = _scaled_powers(z, jmax)
    vals = (p * bb).real.sum(axis=1)
    js = np.arange(1, jmax + 1)
    err = _err(np.abs(p) * bb, js, len(z))
    # compare Re sum (z/m)^j against c b_1 |z_1|^j / m^j in the log domain
    rhs_ln = log_c + js * (log_a1 - logm)
    lo = vals - err
    rechecked = False
    for idx in range(jmax):
        j = idx + 1
        if lo[idx] > 0 and math.log(lo[idx]) >= rhs_ln[idx] + 1e-9:
            att = math.log(vals[idx]) + j * logm
            return Witness(j, LogMagnitude.from_ln(att), LogMagnitude.from_ln(log_c + j * log_a1), True, rechecked)
        if vals[idx] + err[idx] > 0 and math.log(vals[idx] + err[idx]) >= rhs_ln[idx] - 1e-9:
            rechecked = True
            with mp.workdps(40):
                s = mp.fsum([mp.mpf(float(bn)) * (mp.mpc(x) ** j).real for bn, x in zip(bb, inst.z)])
                rhs = mp.mpf(eps) / (32 + 4 * mp.mpf(eps)) * mp.mpf(float(bb[0])) * abs(mp.mpc(inst.z[0])) ** j
                if s >= rhs:
                    return Witness(j, LogMagnitude.from_ln(float(mp.log(s))),
                                   LogMagnitude.from_ln(float(mp.log(rhs))), True, rechecked)
    return Witness(None, LogMagnitude(0), LogMagnitude.from_ln(log_c + jmax * log_a1), False, rechecked)


# --------------------------------------------------------------------------
# instance generators and sweeps


def _rand_z(rng: random.Random, n: int) -> list[complex]:
    return [rng.uniform(0.2, 1.0) * complex(math.cos(th), math.sin(th))
            for th in (rng.uniform(0, 2 * math.pi) for _ in range(n))]


def random_turan_instances(count: int, seed: int = 0, nmax: int = 12) -> list[PowerSumInstance]:
    """``z_1`` on the unit circle, the rest with modulus uniform in ``[0.2, 1]``."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, nmax)
        th = rng.uniform(0, 2 * math.pi)
        z = [complex(math.cos(th), math.sin(th))] + _rand_z(rng, n - 1)
        out.append(PowerSumInstance(tuple(z), rng.randint(0, 200 - n)))
    return out


def random_nonneg_instances(count: int, seed: int = 0, nmax: int = 20,
                            epsilons=(1 / 40, 1.0)) -> list[PowerSumInstance]:
    rng = random.Random(seed)
    return [PowerSumInstance(tuple(_rand_z(rng, rng.randint(1, nmax))), 0, rng.choice(epsilons))
            for _ in range(count)]


def adversarial_instances(nmax: int = 8) -> list[PowerSumInstance]:
    """Families that make power sums cancel: roots of unity, near-opposite pairs, equal moduli."""
    out = []
    for n in range(1, nmax + 1):
        roots = tuple(complex(math.cos(2 * math.pi * j / n), math.sin(2 * math.pi * j / n)) for j in range(n))
        for M in (0, 1, n, 3 * n, 10 * n):
            if M + n <= 200:
                out.append(PowerSumInstance(roots, M))
        # roots of unity of a higher order, so the first n powers all cancel partly
        rot = tuple(complex(math.cos(2 * math.pi * j / (n + 1)), math.sin(2 * math.pi * j / (n + 1)))
                    for j in range(n))
        out.append(PowerSumInstance(rot, 0))
    for d in (0.5, 0.9, 0.99, 0.999999):
        out.append(PowerSumInstance((1.0, -d)))
        out.append(PowerSumInstance((1.0, -d), 5))
    return out


@dataclass
class SweepReport:
    lemma: str
    seed: int
    count: int
    violations: list[dict] = field(default_factory=list)
    rechecked: int = 0
    min_margin_log10: float = math.inf

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"lemma": self.lemma, "seed": self.seed, "count": self.count,
                "violations": self.violations, "rechecked": self.rechecked,
                "min_margin_log10": self.min_margin_log10}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _sweep(lemma: str, seed: int, insts, fn) -> SweepReport:
    rep = SweepReport(lemma, seed, len(insts))
    for inst in insts:
        w = fn(inst)
        rep.rechecked += w.rechecked
        if not w.ok:
            rep.violations.append(inst.to_dict())
        elif w.attained.sign:
            rep.min_margin_log10 = min(rep.min_margin_log10, w.attained.log10_abs - w.required.log10_abs)
    return rep


def sweep_turan(count: int, seed: int = 0, include_adversarial: bool = True) -> SweepReport:
    insts = random_turan_instances(count, seed)
    if include_adversarial:
        insts += adversarial_instances()
    return _sweep("lem:turan", seed, insts, turan_witness)


def sweep_nonneg(count: int, seed: int = 0) -> SweepReport:
    return _sweep("cor:turan3", seed, random_nonneg_instances(count, seed), nonneg_witness)


def sharpness_probe(nmax: int = 8) -> list[dict]:
    """``log10(attained / required)`` on roots-of-unity families; a diagnostic, not a test."""
    out = []
    for inst in adversarial_instances(nmax):
        if inst.N > nmax:
            continue
        w = turan_witness(inst)
        out.append({"N": inst.N, "M": inst.M, "k": w.k,
                    "log10_ratio": w.attained.log10_abs - w.required.log10_abs})
    return out
