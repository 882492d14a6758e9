"""The constants of the zero-detection argument.

``alpha`` and ``A`` minimise ``(4 e alpha 2^{alpha-1})^A`` subject to
``4 e alpha (2/sqrt(A^2+1))^{alpha-1} = delta``.  Solving the constraint for
``R = sqrt(A^2+1) = 2 (4 e alpha / delta)^{1/(alpha-1)}`` leaves a
one-variable problem in ``alpha``; its stationary point is bracketed by a
certified sign change of the derivative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import iv, mp

from .numerics import Interval, LogMagnitude, precision

__all__ = [
    "ConstantsLedger",
    "LedgerAt",
    "NchoiceFacts",
    "solve_alpha_A",
    "derive_secondary",
    "detection_constant",
    "ledger",
    "ledger_at",
    "eta_range",
    "nchoice_facts",
    "objective",
    "matches_printed",
    "PRINTED",
]

SOLVE_BITS = 200
XI = Fraction(1) + Fraction(1, 10 ** 7)
V_OFFSET = Fraction(38, 100)

# decimals as printed, for reproduction checks
PRINTED = {
    "alpha": "7.93164376625222",
    "A": "3.90766832737839",
    "V": "4.184416849",
    "A0": "0.08791653756",
    "A1": "11.065510190",
    "detection": "3.804416849672",
}


def _ivq(x: Fraction):
    return iv.mpf(x.numerator) / x.denominator


# --------------------------------------------------------------------------
# the one-variable problem


def _R_of_alpha(a, delta):
    """``2 (4 e a / delta)^{1/(a-1)}`` in the ambient arithmetic (mp or iv)."""
    ctx = iv if hasattr(a, "_mpi_") else mp
    return 2 * ctx.exp(ctx.log(4 * ctx.e * a / delta) / (a - 1))


def objective(a, delta=Fraction(2, 3)):
    """``log`` of the minimised quantity, ``A(alpha) * log(4 e alpha 2^{alpha-1})``."""
    ctx = iv if hasattr(a, "_mpi_") else mp
    d = _ivq(delta) if ctx is iv else mp.mpf(delta.numerator) / delta.denominator
    R = _R_of_alpha(a, d)
    A = ctx.sqrt(R * R - 1)
    return A * (ctx.log(4 * ctx.e * a) + (a - 1) * ctx.log(2))


def _dobjective(a, d):
    ctx = iv if hasattr(a, "_mpi_") else mp
    lg = ctx.log(4 * ctx.e * a / d)
    g1 = 1 / (a * (a - 1)) - lg / (a - 1) ** 2
    R = 2 * ctx.exp(lg / (a - 1))
    A = ctx.sqrt(R * R - 1)
    dA = R * R * g1 / A
    h = ctx.log(4 * ctx.e * a) + (a - 1) * ctx.log(2)
    dh = 1 / a + ctx.log(2)
    return dA * h + A * dh


def _golden(f, lo, hi, iters=200):
    g = (mp.sqrt(5) - 1) / 2
    a, b = mp.mpf(lo), mp.mpf(hi)
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (a + b) / 2


def _sign(x) -> int:
    lo, hi = mp.make_mpf(x._mpi_[0]), mp.make_mpf(x._mpi_[1])
    return 1 if lo > 0 else (-1 if hi < 0 else 0)


@lru_cache(maxsize=16)
def solve_alpha_A(delta: Fraction = Fraction(2, 3)) -> tuple[Interval, Interval]:
    """Certified enclosures of the constrained minimiser ``(alpha, A)``."""
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    with precision(SOLVE_BITS):
        d = mp.mpf(delta.numerator) / delta.denominator
        f = lambda a: objective(a, delta)  # noqa: E731
        lo, hi = mp.mpf("1.05"), mp.mpf(200)
        a0 = _golden(f, lo, hi, iters=120)
        if a0 - lo < mp.mpf("1e-6") or hi - a0 < mp.mpf("1e-6"):
            raise ArithmeticError("no interior minimum bracketed")
        a1 = mp.findroot(lambda a: _dobjective(a, d), a0, tol=mp.mpf(2) ** (-SOLVE_BITS + 10))
        dd = _ivq(delta)
        eps = mp.mpf(2) ** (-SOLVE_BITS + 40)
        while True:
            left, right = iv.mpf(a1 - eps), iv.mpf(a1 + eps)
            if _sign(_dobjective(left, dd)) == -1 and _sign(_dobjective(right, dd)) == 1:
                break
            eps *= 16
            if eps > mp.mpf("1e-10"):
                raise ArithmeticError("could not certify the stationary point")
        alpha = iv.mpf([a1 - eps, a1 + eps])
        R = _R_of_alpha(alpha, dd)
        A = iv.sqrt(R * R - 1)
        return Interval.from_iv(alpha), Interval.from_iv(A)


def _a1_equation(x, alpha):
    ctx = iv if hasattr(x, "_mpi_") else mp
    return x * ctx.exp(1 - x * (alpha - 1) / (2 * alpha))


def derive_secondary(alpha: Interval, A: Interval) -> tuple[Interval, Interval, Interval, Interval]:
    """``R``, ``V``, ``A0`` and ``A1`` from ``alpha`` and ``A``."""
    with precision(SOLVE_BITS):
        a = alpha.as_iv()
        Ai = A.as_iv()
        R = iv.sqrt(Ai * Ai + 1)
        V = 2 * iv.exp(iv.log(4 * iv.e * a) / (a - 1)) + _ivq(V_OFFSET)
        A0 = 1 / (iv.e * V)
        A1 = _solve_a1(alpha, Interval.from_iv(V))
        return Interval.from_iv(R), Interval.from_iv(V), Interval.from_iv(A0), A1


def _solve_a1(alpha: Interval, V: Interval) -> Interval:
    """Unique root above 2 of ``x e^{1 - x (alpha-1)/(2 alpha)} = 1/V``.

    The left side increases up to ``2 alpha/(alpha-1)`` and decreases after,
    which an interval derivative check confirms on the scanned range.
    """
    a, v = alpha.as_iv(), V.as_iv()
    g = lambda x: _a1_equation(x, a) - 1 / v  # noqa: E731
    peak = 2 * a / (a - 1)
    peak_hi = mp.make_mpf(peak._mpi_[1])
    # g(2) > 0 and the peak is above 2; past the peak the function decreases
    if _sign(g(iv.mpf(2))) != 1:
        raise ArithmeticError("A1 equation does not start positive at 2")
    x = mp.mpf(2)
    step = mp.mpf("0.01")
    sign_changes = []
    prev = 1
    while x < 200:
        nxt = x + step
        cur = _sign(g(iv.mpf(nxt)))
        if cur == 0:
            raise ArithmeticError("A1 scan point is undecidable")
        if cur != prev:
            sign_changes.append((x, nxt))
        prev = cur
        x = nxt
    if len(sign_changes) != 1:
        raise ArithmeticError(f"expected one sign change for A1, found {len(sign_changes)}")
    lo, hi = sign_changes[0]
    if lo < peak_hi:
        raise ArithmeticError("A1 bracket overlaps the increasing branch")
    # derivative (1 - x (alpha-1)/(2 alpha)) e^{...} is negative on the bracket
    box = iv.mpf([lo, hi])
    deriv = (1 - box * (a - 1) / (2 * a)) * iv.exp(1 - box * (a - 1) / (2 * a))
    if _sign(deriv) != -1:
        raise ArithmeticError("A1 bracket is not monotone")
    # bisection
    lo, hi = mp.mpf(lo), mp.mpf(hi)
    for _ in range(SOLVE_BITS):
        mid = (lo + hi) / 2
        s = _sign(g(iv.mpf(mid)))
        if s == 0:
            break
        if s > 0:
            lo = mid
        else:
            hi = mid
    return Interval(lo, hi)


@dataclass(frozen=True)
class ConstantsLedger:
    alpha: Interval
    A: Interval
    R: Interval
    V: Interval
    A0: Interval
    A1: Interval
    xi: Fraction = XI
    delta: Fraction = Fraction(2, 3)

    def residuals(self) -> dict[str, Interval]:
        """Defining relations evaluated in interval arithmetic; each should contain 0."""
        with precision(SOLVE_BITS):
            a, A, R, V, A0, A1 = (x.as_iv() for x in (self.alpha, self.A, self.R, self.V, self.A0, self.A1))
            d = _ivq(self.delta)
            out = {
                "constraint": 4 * iv.e * a * iv.exp((a - 1) * iv.log(2 / R)) - d,
                "R2_minus_A2_minus_1": R * R - A * A - 1,
                "V_definition": V - 2 * iv.exp(iv.log(4 * iv.e * a) / (a - 1)) - _ivq(V_OFFSET),
                "A0_e_V_minus_1": A0 * iv.e * V - 1,
                "A1_equation": 1 / V - _a1_equation(A1, a),
            }
            return {k: Interval.from_iv(v) for k, v in out.items()}

    def to_dict(self) -> dict:
        out = {k: getattr(self, k).to_json() for k in ("alpha", "A", "R", "V", "A0", "A1")}
        out["xi"] = str(self.xi)
        out["delta"] = str(self.delta)
        out["detection_constant"] = detection_constant(self).to_json()
        return out


@lru_cache(maxsize=16)
def ledger(delta: Fraction = Fraction(2, 3)) -> ConstantsLedger:
    alpha, A = solve_alpha_A(Fraction(delta))
    R, V, A0, A1 = derive_secondary(alpha, A)
    return ConstantsLedger(alpha, A, R, V, A0, A1, XI, Fraction(delta))


def detection_constant(led: ConstantsLedger | None = None) -> Interval:
    """``(4 e alpha 2^{alpha-1})^{1/(alpha-1)} = 2 (4 e alpha)^{1/(alpha-1)}``."""
    led = led or ledger()
    with precision(SOLVE_BITS):
        a = led.alpha.as_iv()
        return Interval.from_iv(iv.exp(iv.log(4 * iv.e * a * iv.exp((a - 1) * iv.log(2))) / (a - 1)))


def matches_printed(value: Interval, printed: str) -> dict[str, bool]:
    """Whether ``value`` lies in the truncation or rounding interval of a printed decimal."""
    digits = len(printed.split(".")[1]) if "." in printed else 0
    with precision(SOLVE_BITS):
        p = Interval.of(printed)
        ulp = Interval.of(Fraction(1, 10 ** digits))
        trunc = Interval(p.lo, (p + ulp).hi)
        rnd = Interval((p - ulp / 2).lo, (p + ulp / 2).hi)
        exact_trunc = value.lo >= p.lo and value.hi < (p + ulp).lo
    return {
        "truncation": bool(exact_trunc and trunc.contains(value)),
        "rounding": bool(rnd.contains(value)),
        "contains_printed": bool(value.contains(p)),
    }


# --------------------------------------------------------------------------
# ledger values at given (Q, T, eta)


@dataclass(frozen=True)
class LedgerAt:
    Q: float
    T: float
    eta: Interval
    script_L: Interval
    N_script: Interval
    M_eta: Interval
    N_eta: LogMagnitude
    N_eta_star: LogMagnitude
    ln_N_eta: Interval
    ln_N_eta_star: Interval


def eta_range(Q, T, led: ConstantsLedger | None = None) -> tuple[Interval, Interval]:
    """Enclosures of the endpoints ``1/(3 A log(QT))`` and ``1/(10 A)``."""
    led = led or ledger()
    with precision(SOLVE_BITS):
        L = (Interval.of(Q) * Interval.of(T)).log()
        return 1 / (3 * led.A * L), 1 / (10 * led.A)


def _lm_from_ln(x: Interval) -> LogMagnitude:
    return LogMagnitude.from_ln(float(x.lo))


def ledger_at(Q, T, eta, led: ConstantsLedger | None = None) -> LedgerAt:
    """All eta-dependent ledger values; ``N_eta`` and ``N*_eta`` are kept as logarithms."""
    led = led or ledger()
    if Q < 1 or T < 1:
        raise ValueError("needs Q >= 1 and T >= 1")
    lo, hi = eta_range(Q, T, led)
    e = Interval.of(eta)
    if e.hi < lo.lo or e.lo > hi.hi:
        raise ValueError(f"eta outside [{float(lo.mid):.6g}, {float(hi.mid):.6g}]")
    with precision(SOLVE_BITS):
        L = (Interval.of(Q) * Interval.of(T)).log()
        xi = Interval.of(led.xi)
        Ns = led.A * e / xi * (Interval.of(2) / 3 * L + Interval.of("13.04")) + 9
        M = (led.alpha - 1) * Ns
        lnN = led.A0 * M / e
        lnNs = led.A1 * M / e
    return LedgerAt(float(Q), float(T), e, L, Ns, M, _lm_from_ln(lnN), _lm_from_ln(lnNs), lnN, lnNs)


@dataclass(frozen=True)
class NchoiceFacts:
    Q: float
    simplification_residual: Interval
    M_min: Interval
    M_ok: bool
    log10_N_margin_min: Interval
    N_ok: bool
    log_q_coefficient: Interval
    grid_points: int
    notes: str


def nchoice_facts(Q, grid: int = 200, led: ConstantsLedger | None = None) -> NchoiceFacts:
    """Certify the three facts about ``N_{xi eta}``, ``M_{xi eta}`` and ``N_{xi eta}`` at ``T = Q``.

    ``eta'`` (playing the role of ``xi eta``) ranges over the admissible
    interval.  ``N_script`` is affine increasing in ``eta'`` and ``log N`` is
    ``c log Q + d(eta')`` with ``d`` decreasing, so the endpoint values are the
    extremes; the grid is an extra sanity pass.
    """
    led = led or ledger()
    lo, hi = eta_range(Q, Q, led)
    with precision(SOLVE_BITS):
        xi = Interval.of(led.xi)
        logQ = Interval.of(Q).log()
        target = Interval.of(106) + Interval.of("3.175142") * logQ / Interval.of(10).log()
        worst_simpl = Interval.of(0)
        Mmin = None
        margin_min = None
        for i in range(grid + 1):
            ep = lo + (hi - lo) * Interval.of(Fraction(i, grid)) if 0 < i < grid else (lo if i == 0 else hi)
            at = ledger_at(Q, Q, ep, led)
            eta = ep / xi
            display = led.A * eta * (Interval.of(4) / 3 * logQ + Interval.of("13.04"))
            res = at.N_script - 9 - display
            worst_simpl = Interval.hull(worst_simpl, res)
            Mmin = at.M_eta if Mmin is None or at.M_eta.lo < Mmin.lo else Mmin
            margin = at.ln_N_eta / Interval.of(10).log() - target
            margin_min = margin if margin_min is None or margin.lo < margin_min.lo else margin_min
        coeff = led.A0 * (led.alpha - 1) * led.A * Interval.of(4) / 3 / xi
    M_ok = Mmin.lo >= mp.mpf("63.925")
    N_ok = margin_min.lo > 0
    notes = ("the displayed N_script omits the +9 of the general definition; residual is N_script - 9 - display. "
             f"log10 N grows like {float(coeff.mid):.7f} log10 Q against 3.175142 log10 Q")
    return NchoiceFacts(float(Q), worst_simpl, Mmin, bool(M_ok), margin_min, bool(N_ok), coeff, grid + 1, notes)
