"""Zero counting and localisation at small conductor and height.

Rectangle counts come from the argument principle.  Arguments are tracked
along each edge with adaptive subdivision; a step is accepted only when the
ratio of consecutive values stays within 1/2 of 1, so each step's phase lies
in (-pi/6, pi/6).  Full-strip counts use the reflection principle: the change
of ``arg Lambda`` along ``1/2 - iT -> 2 - iT -> 2 + iT -> 1/2 + iT`` equals
``pi`` times the number of nontrivial zeros with ``|gamma| <= T``.

Critical-line zeros are isolated by sign changes of ``hardy_z`` and then
confirmed against that count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from mpmath import mp
from scipy.optimize import brentq
from scipy.special import loggamma as sp_loggamma

from .characters import DirichletCharacter, enumerate_primitive
from .lfunctions import hardy_z, l_values_fast
from .numerics import ComplexBox, DomainError, Interval

__all__ = [
    "ZeroRecord",
    "RectangleCount",
    "ZeroSet",
    "IncompleteZeroData",
    "count_zeros_rectangle",
    "find_critical_zeros",
    "zero_set",
    "disc_count",
    "rvm_count_window",
    "zeros_to_jsonl",
    "ZeroCorpus",
    "build_corpus",
]

FAST_ORDER = 20


class IncompleteZeroData(RuntimeError):
    """Sign-change count disagrees with the rectangle count, or data is too short."""


@dataclass(frozen=True)
class ZeroRecord:
    character_id: str
    beta: Interval
    gamma: Interval
    on_critical_line: bool
    localization_method: str

    def __post_init__(self) -> None:
        if self.beta.lo < 0 or self.beta.hi > 1:
            raise ValueError("beta outside the critical strip")
        if self.on_critical_line and not (self.beta.lo == self.beta.hi == mp.mpf(0.5)):
            raise ValueError("critical-line zero must have beta = 1/2 exactly")

    def to_dict(self) -> dict:
        q, _, idx = self.character_id.partition(":")
        return {
            "q": int(q),
            "char_index": idx,
            "beta_lo": float(self.beta.lo),
            "beta_hi": float(self.beta.hi),
            "gamma_lo": float(self.gamma.lo),
            "gamma_hi": float(self.gamma.hi),
            "method": self.localization_method,
        }


@dataclass(frozen=True)
class RectangleCount:
    character_id: str
    sigma0: float
    T: float
    count: int
    winding_residual: Interval

    def __post_init__(self) -> None:
        dev = abs(self.winding_residual / (2 * mp.pi) - self.count)
        if dev.hi > 0.25:
            raise DomainError("winding is not within 1/4 of the integer count")


@dataclass(frozen=True)
class ZeroSet:
    """Critical-line zeros of one character up to height ``T`` with a completeness flag."""

    character: DirichletCharacter
    T: float
    zeros: tuple[ZeroRecord, ...]
    rectangle: RectangleCount
    complete: bool
    notes: str = ""


# --------------------------------------------------------------------------
# argument tracking


def _eval(chi: DirichletCharacter, pts: np.ndarray, zeta_factor: bool):
    vals, rad = l_values_fast(chi, pts, correction_order=FAST_ORDER)
    if zeta_factor:
        # (s - 1) zeta(s) removes the pole; radius scales by |s - 1|
        f = pts - 1
        vals, rad = vals * f, rad * np.abs(f) * (1 + 1e-15)
    return vals, rad


def _track_edge(chi: DirichletCharacter, z0: complex, z1: complex, zeta_factor: bool,
                n0: int = 32, max_pts: int = 200_000) -> tuple[float, float]:
    """Continuous change of ``arg f`` from ``z0`` to ``z1`` with an error bound."""
    u = np.linspace(0.0, 1.0, n0 + 1)
    vals, rad = _eval(chi, z0 + (z1 - z0) * u, zeta_factor)
    verified = False
    while True:
        if np.any(np.abs(vals) <= rad):
            raise DomainError("edge passes through or too near a zero; perturb the contour")
        ratio = vals[1:] / vals[:-1]
        bad = np.abs(ratio - 1) >= 0.5
        if not bad.any():
            if verified:
                break
            # confirm with one global doubling before accepting
            mid = (u[1:] + u[:-1]) / 2
            mv, mr = _eval(chi, z0 + (z1 - z0) * mid, zeta_factor)
            u, vals, rad = _merge(u, vals, rad, mid, mv, mr)
            verified = True
            continue
        verified = False
        idx = np.flatnonzero(bad)
        mid = (u[idx] + u[idx + 1]) / 2
        mv, mr = _eval(chi, z0 + (z1 - z0) * mid, zeta_factor)
        u, vals, rad = _merge(u, vals, rad, mid, mv, mr)
        if len(u) > max_pts:
            raise DomainError("argument tracking did not converge")
    steps = np.angle(vals[1:] / vals[:-1])
    rel = rad / np.abs(vals)
    err = np.arcsin(np.minimum(1.0, rel[1:] + rel[:-1] + 1e-15))
    return float(np.sum(steps)), float(np.sum(err) + len(steps) * 4e-16)


def _merge(u, vals, rad, mu, mv, mr):
    uu = np.concatenate([u, mu])
    order = np.argsort(uu, kind="stable")
    return uu[order], np.concatenate([vals, mv])[order], np.concatenate([rad, mr])[order]


def _loggamma_im(chi: DirichletCharacter, T: float) -> float:
    return float(np.imag(sp_loggamma((0.5 + chi.parity + 1j * T) / 2)))


def _perturb_height(chi: DirichletCharacter, T: float) -> float:
    """Move ``T`` by at most 1e-3 so that ``|L(1/2 +- iT)|`` is clearly nonzero."""
    for k in range(0, 64):
        dt = (k // 2 + (k % 2)) * 1.5e-5 * (1 if k % 2 else -1)
        Tp = T + dt
        if abs(dt) > 1e-3:
            break
        v, r = l_values_fast(chi, np.array([0.5 + 1j * Tp, 0.5 - 1j * Tp]), correction_order=FAST_ORDER)
        if np.all(np.abs(v) > 1e3 * r + 1e-6):
            return Tp
    raise DomainError("could not move the contour off a zero within 1e-3")


def _full_strip(chi: DirichletCharacter, T: float) -> tuple[float, float]:
    """``Delta arg`` of the completed function along the right half contour."""
    zeta = chi.modulus == 1
    w_gamma = T * math.log(chi.modulus / math.pi) + 2 * _loggamma_im(chi, T)
    d1, e1 = _track_edge(chi, complex(0.5, -T), complex(2, -T), zeta)
    d2, e2 = _track_edge(chi, complex(2, -T), complex(2, T), zeta)
    d3, e3 = _track_edge(chi, complex(2, T), complex(0.5, T), zeta)
    total = w_gamma + d1 + d2 + d3
    if zeta:
        # (s-1) is already inside f; the remaining factor s winds by 2 atan(2T)
        total += 2 * math.atan(2 * T)
    return total, e1 + e2 + e3 + 1e-12 * (1 + T)


def _rect_right(chi: DirichletCharacter, sigma0: float, T: float) -> tuple[float, float]:
    zeta = chi.modulus == 1
    corners = [complex(sigma0, -T), complex(2.5, -T), complex(2.5, T), complex(sigma0, T)]
    tot, err = 0.0, 0.0
    for z0, z1 in zip(corners, corners[1:] + corners[:1]):
        d, e = _track_edge(chi, z0, z1, zeta)
        tot += d
        err += e
    return tot, err


def _make_count(chi, sigma0, T, winding, err) -> RectangleCount:
    n = round(winding / (2 * math.pi))
    w = Interval(mp.mpf(winding) - mp.mpf(err), mp.mpf(winding) + mp.mpf(err))
    if abs(winding / (2 * math.pi) - n) + err / (2 * math.pi) > 0.25:
        raise DomainError("winding undecidable at this precision; raise the precision")
    return RectangleCount(chi.label, float(sigma0), float(T), n, w)


def count_zeros_rectangle(chi: DirichletCharacter, sigma0: float, T: float,
                          zero_set_hint: "ZeroSet | None" = None) -> RectangleCount:
    """Number of zeros (with multiplicity) with ``beta >= sigma0`` and ``|gamma| <= T``."""
    if T <= 0:
        raise ValueError("T must be positive")
    Tp = _perturb_height(chi, T)
    if sigma0 <= 0:
        w, e = _full_strip(chi, Tp)
        return _make_count(chi, sigma0, Tp, 2 * w, 2 * e)
    if sigma0 > 0.5:
        if sigma0 >= 2.5:
            return RectangleCount(chi.label, float(sigma0), Tp, 0, Interval.of(0))
        w, e = _rect_right(chi, sigma0, Tp)
        return _make_count(chi, sigma0, Tp, w, e)
    total = count_zeros_rectangle(chi, 0.0, Tp)
    if sigma0 < 0.5:
        right = count_zeros_rectangle(chi, 1 - sigma0, Tp)
        n = total.count - right.count
        wres = total.winding_residual - right.winding_residual
        return RectangleCount(chi.label, float(sigma0), total.T, n, wres)
    # sigma0 = 1/2: zeros with beta > 1/2 pair with beta < 1/2, the rest are on the line
    zs = zero_set_hint if zero_set_hint is not None else zero_set(chi, Tp)
    if not zs.complete:
        raise IncompleteZeroData("critical-line list is incomplete; cannot split the count at 1/2")
    off = total.count - len(zs.zeros)
    return RectangleCount(chi.label, 0.5, total.T, total.count - off // 2,
                          total.winding_residual - 2 * mp.pi * (off // 2))


# --------------------------------------------------------------------------
# critical-line zeros


def _z_scalar(chi):
    def f(t):
        z, _, _ = hardy_z(chi, np.array([t]))
        return float(z[0])
    return f


def _certify_root(chi: DirichletCharacter, g: float) -> Interval | None:
    """Smallest ``[g - d, g + d]`` with certified opposite signs at both ends."""
    d = max(1e-11, 1e-12 * abs(g))
    while d < 1e-4:
        z, r, _ = hardy_z(chi, np.array([g - d, g + d]))
        if abs(z[0]) > r[0] and abs(z[1]) > r[1] and z[0] * z[1] < 0:
            return Interval(mp.mpf(g) - mp.mpf(d), mp.mpf(g) + mp.mpf(d))
        d *= 4
    return None


def find_critical_zeros(chi: DirichletCharacter, T: float, step: float = 0.05,
                        max_rounds: int = 8, rectangle: RectangleCount | None = None) -> ZeroSet:
    """Critical-line zeros with ``|gamma| <= T`` and the completeness check."""
    if chi.modulus > 100 or T > 100:
        raise ValueError("desk scale only: q <= 100 and T <= 100")
    rect = rectangle if rectangle is not None else count_zeros_rectangle(chi, 0.0, T)
    Tp = rect.T
    target = rect.count
    t = np.linspace(-Tp, Tp, int(math.ceil(2 * Tp / step)) + 1)
    z, r, _ = hardy_z(chi, t)
    brackets: list[tuple[float, float]] = []
    for _ in range(max_rounds):
        sgn = np.where(z > r, 1, np.where(z < -r, -1, 0))
        known = sgn != 0
        tk, sk = t[known], sgn[known]
        ch = np.flatnonzero(sk[1:] != sk[:-1])
        brackets = [(tk[i], tk[i + 1]) for i in ch]
        if len(brackets) >= target:
            break
        # refine near undetermined points and near small local minima of |Z|
        az = np.abs(z)
        cand = set(np.flatnonzero(~known).tolist())
        lm = np.flatnonzero((az[1:-1] <= az[:-2]) & (az[1:-1] <= az[2:])) + 1
        cand.update(lm.tolist())
        new = []
        for i in sorted(cand):
            lo, hi = t[max(i - 1, 0)], t[min(i + 1, len(t) - 1)]
            new.append(np.linspace(lo, hi, 9)[1:-1])
        if not new:
            break
        nt = np.unique(np.concatenate(new))
        nz, nr, _ = hardy_z(chi, nt)
        tt = np.concatenate([t, nt])
        order = np.argsort(tt, kind="stable")
        t = tt[order]
        z = np.concatenate([z, nz])[order]
        r = np.concatenate([r, nr])[order]
        keep = np.concatenate([[True], np.diff(t) > 0])
        t, z, r = t[keep], z[keep], r[keep]

    f = _z_scalar(chi)
    records = []
    failed = 0
    for a, b in brackets:
        g = brentq(f, a, b, xtol=1e-14, rtol=1e-15, maxiter=200)
        gi = _certify_root(chi, g)
        if gi is None:
            failed += 1
            gi = Interval(mp.mpf(a), mp.mpf(b))
        records.append(ZeroRecord(chi.label, Interval.of(0.5), gi, True, "sign_change"))
    records.sort(key=lambda zr: zr.gamma.lo)
    complete = len(records) == target and failed == 0
    notes = "" if complete else (
        f"possible off-line zero or missed zero: {len(records)} sign changes vs count {target}"
        + (f", {failed} uncertified" if failed else ""))
    return ZeroSet(chi, Tp, tuple(records), rect, complete, notes)


zero_set = find_critical_zeros


# --------------------------------------------------------------------------
# disc counts and the classical window


def disc_count(chi: DirichletCharacter, r: float, center, zero_list: ZeroSet,
               margin: float = 0.0) -> tuple[int, int]:
    """``(count, ambiguous)`` for zeros in the closed disc ``|center - rho| <= r``.

    Zeros whose enclosure straddles the circle are counted in and reported in
    ``ambiguous``.
    """
    c = ComplexBox.of(center)
    if not zero_list.complete:
        raise IncompleteZeroData(zero_list.notes or "zero list incomplete")
    need = max(abs(c.im.lo), abs(c.im.hi)) + mp.mpf(r) + margin
    if need > zero_list.T:
        raise IncompleteZeroData(f"zero list reaches |gamma| <= {zero_list.T}, need {float(need)}")
    if zero_list.character != chi:
        raise ValueError("zero list belongs to a different character")
    rr = Interval.of(r)
    count = ambiguous = 0
    for z in zero_list.zeros:
        dre = c.re - z.beta
        dim = c.im - z.gamma
        dist2 = dre * dre + dim * dim
        if dist2.hi <= (rr * rr).lo:
            count += 1
        elif dist2.lo <= (rr * rr).hi:
            count += 1
            ambiguous += 1
    return count, ambiguous


def rvm_count_window(chi: DirichletCharacter, T: float) -> tuple[Interval, Interval]:
    """Main term ``(T/pi) log(qT/(2 pi e))`` and its explicit error allowance."""
    q = chi.modulus
    Ti = Interval.of(T)
    if chi.is_trivial:
        if T <= 14:
            raise DomainError("window for zeta needs T > 14")
        lt = Ti.log()
        err = Interval.of("0.137") * lt + Interval.of("0.443") * lt.log() + Interval.of("2.463")
    else:
        if Ti.certainly_lt(Interval.of(5) / 7):
            raise DomainError("window for nontrivial characters needs T >= 5/7")
        lqt = (Interval.of(q) * Ti).log()
        e1 = Interval.of("0.247") * lqt + Interval.of("6.894")
        e2 = Interval.of("0.298") * lqt + Interval.of("4.358")
        err = Interval(min(e1.lo, e2.lo), min(e1.hi, e2.hi))
    main = Ti / Interval.of(mp.pi) * (Interval.of(q) * Ti / (2 * Interval.of(mp.pi) * Interval.of(1).exp())).log()
    return main, err


def zeros_to_jsonl(zsets) -> str:
    lines = []
    for zs in zsets:
        for z in zs.zeros:
            lines.append(json.dumps(z.to_dict(), sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class ZeroCorpus:
    """Zero sets for every primitive character of conductor ``<= q_max`` up to height ``T``."""

    q_max: int
    T: float
    sets: tuple[ZeroSet, ...]

    @property
    def complete(self) -> bool:
        return all(zs.complete for zs in self.sets)

    def incomplete(self) -> list[str]:
        return [zs.character.label for zs in self.sets if not zs.complete]

    def by_label(self, label: str) -> ZeroSet:
        for zs in self.sets:
            if zs.character.label == label:
                return zs
        raise KeyError(label)

    def require(self, Q: float, T: float) -> None:
        """Raise unless the corpus covers conductors ``<= Q`` and heights ``|gamma| <= T``."""
        if Q > self.q_max:
            raise IncompleteZeroData(f"corpus covers q <= {self.q_max}, need {Q}")
        if T > min((zs.T for zs in self.sets), default=self.T):
            raise IncompleteZeroData(f"corpus reaches |gamma| <= {self.T}, need {T}")
        bad = [zs.character.label for zs in self.sets if zs.character.modulus <= Q and not zs.complete]
        if bad:
            raise IncompleteZeroData("incomplete zero sets: " + ", ".join(bad))

    @cached_property
    def _table(self) -> np.ndarray:
        """Rows ``(modulus, beta_lo, beta_hi, gamma_lo, gamma_hi)`` for every zero."""
        rows = [(zs.character.modulus, float(z.beta.lo), float(z.beta.hi), float(z.gamma.lo), float(z.gamma.hi))
                for zs in self.sets for z in zs.zeros]
        return np.asarray(rows, dtype=float).reshape(-1, 5)

    def count(self, sigma: float, Q: float, T: float | None = None) -> int:
        """Zeros with ``beta > sigma`` and ``|gamma| <= T`` over conductors ``<= Q``; ``T`` defaults to ``Q``.

        Zeros whose enclosure straddles a boundary are counted in, so the
        result is an upper bound for the true count.
        """
        T = Q if T is None else T
        self.require(Q, T)
        m, blo, bhi, glo, ghi = self._table.T
        sel = (m <= Q) & (bhi > sigma) & (glo <= T) & (ghi >= -T)
        return int(np.count_nonzero(sel))


def build_corpus(q_max: int, T: float, progress=None) -> ZeroCorpus:
    """Scan every primitive character with conductor ``<= q_max``, in canonical order."""
    sets = []
    for q in range(1, q_max + 1):
        for chi in enumerate_primitive(q):
            zs = find_critical_zeros(chi, T)
            sets.append(zs)
            if progress is not None:
                progress(zs)
    return ZeroCorpus(q_max, T, tuple(sets))
