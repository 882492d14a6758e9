"""Rigorous scalar arithmetic.

``Interval`` and ``ComplexBox`` are thin immutable wrappers over mpmath's
interval context (directed rounding at the current working precision).
``LogMagnitude`` carries numbers such as ``10**-6926`` that live far outside
the floating-point range.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import mpmath
from mpmath import iv, mp

__all__ = [
    "DomainError",
    "Interval",
    "ComplexBox",
    "LogMagnitude",
    "EULER_GAMMA",
    "precision",
    "ivl_op",
    "logmag_combine",
    "complex_loggamma",
    "complex_gamma",
    "digamma_real_part_upper",
]


class DomainError(ValueError):
    """An operation was applied outside its domain (never a silent NaN)."""


Number = Union[int, float, Fraction, str, "mpmath.mpf"]


@contextlib.contextmanager
def precision(bits: int) -> Iterator[None]:
    """Temporarily set the endpoint precision of every interval operation."""
    old_iv, old_mp = iv.prec, mp.prec
    iv.prec = bits
    mp.prec = bits
    try:
        yield
    finally:
        iv.prec = old_iv
        mp.prec = old_mp


def _to_iv(x) -> "iv.mpf":
    if isinstance(x, Interval):
        return x.as_iv()
    if isinstance(x, Fraction):
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    if isinstance(x, float) and not math.isfinite(x):
        raise DomainError(f"non-finite value {x!r}")
    return iv.mpf(x)


def _ep(raw) -> "mpmath.mpf":
    return mp.make_mpf(raw)


@dataclass(frozen=True)
class Interval:
    """Closed real interval ``[lo, hi]`` with exactly stored endpoints."""

    lo: mpmath.mpf
    hi: mpmath.mpf

    def __post_init__(self) -> None:
        lo, hi = mp.mpf(self.lo), mp.mpf(self.hi)
        if mp.isnan(lo) or mp.isnan(hi):
            raise DomainError("NaN endpoint")
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # construction -------------------------------------------------------
    @classmethod
    def of(cls, x) -> "Interval":
        """Enclose ``x``; strings and fractions are rounded outward."""
        if isinstance(x, Interval):
            return x
        return cls.from_iv(_to_iv(x))

    @classmethod
    def from_iv(cls, v) -> "Interval":
        a, b = v._mpi_
        return cls(_ep(a), _ep(b))

    @classmethod
    def hull(cls, *xs) -> "Interval":
        ivs = [cls.of(x) for x in xs]
        return cls(min(i.lo for i in ivs), max(i.hi for i in ivs))

    @classmethod
    def around(cls, mid, radius) -> "Interval":
        return cls.of(mid) + cls(-mp.mpf(radius), mp.mpf(radius)) if radius else cls.of(mid)

    def as_iv(self):
        return iv.mpf([self.lo, self.hi])

    # inspection ---------------------------------------------------------
    @property
    def mid(self) -> mpmath.mpf:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> mpmath.mpf:
        with mp.workprec(mp.prec + 20):
            return self.hi - self.lo

    def contains(self, x) -> bool:
        other = Interval.of(x)
        return self.lo <= other.lo and other.hi <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def overlaps(self, other) -> bool:
        o = Interval.of(other)
        return not (o.hi < self.lo or self.hi < o.lo)

    def certainly_lt(self, other) -> bool:
        return self.hi < Interval.of(other).lo

    def certainly_le(self, other) -> bool:
        return self.hi <= Interval.of(other).lo

    def certainly_gt(self, other) -> bool:
        return self.lo > Interval.of(other).hi

    def certainly_ge(self, other) -> bool:
        return self.lo >= Interval.of(other).hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    # arithmetic ---------------------------------------------------------
    def __add__(self, o):
        return Interval.from_iv(self.as_iv() + _to_iv(o))

    __radd__ = __add__

    def __sub__(self, o):
        return Interval.from_iv(self.as_iv() - _to_iv(o))

    def __rsub__(self, o):
        return Interval.from_iv(_to_iv(o) - self.as_iv())

    def __mul__(self, o):
        return Interval.from_iv(self.as_iv() * _to_iv(o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        d = Interval.of(o)
        if d.lo <= 0 <= d.hi:
            raise DomainError(f"division by interval containing zero {d}")
        return Interval.from_iv(self.as_iv() / d.as_iv())

    def __rtruediv__(self, o):
        return Interval.of(o) / self

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(mp.zero, max(-self.lo, self.hi))

    def __pow__(self, e):
        if isinstance(e, int):
            if e < 0 and self.lo <= 0 <= self.hi:
                raise DomainError("negative power of interval containing zero")
            return Interval.from_iv(self.as_iv() ** e)
        if self.lo <= 0:
            raise DomainError("non-integer power needs a positive base")
        return (self.log() * Interval.of(e)).exp()

    def exp(self):
        return Interval.from_iv(iv.exp(self.as_iv()))

    def log(self):
        if self.lo <= 0:
            raise DomainError(f"log of non-positive interval {self}")
        return Interval.from_iv(iv.log(self.as_iv()))

    def sqrt(self):
        if self.lo < 0:
            raise DomainError(f"sqrt of negative interval {self}")
        return Interval.from_iv(iv.sqrt(self.as_iv()))

    def cos(self):
        return Interval.from_iv(iv.cos(self.as_iv()))

    def sin(self):
        return Interval.from_iv(iv.sin(self.as_iv()))

    def __repr__(self) -> str:
        return f"Interval([{mp.nstr(self.lo, 17)}, {mp.nstr(self.hi, 17)}])"

    def to_json(self) -> list[str]:
        return [mp.nstr(self.lo, 40, min_fixed=-40, max_fixed=40),
                mp.nstr(self.hi, 40, min_fixed=-40, max_fixed=40)]


def ivl_op(kind: str, a: Interval, b: Interval | None = None) -> Interval:
    """Dispatch one of add, sub, mul, div, exp, log, pow, sqrt, abs."""
    binary = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
        "pow": lambda: a ** b,
    }
    unary = {
        "exp": a.exp,
        "log": a.log,
        "sqrt": a.sqrt,
        "abs": lambda: abs(a),
    }
    if kind in binary:
        if b is None:
            raise TypeError(f"{kind} needs two operands")
        return binary[kind]()
    if kind in unary:
        return unary[kind]()
    raise ValueError(f"unknown interval operation {kind!r}")


# Euler's constant to 30 digits: 0.577215664901532860606512090082402...
EULER_GAMMA = Interval.of("0.577215664901532860606512090082") + Interval(mp.zero, mp.mpf("1e-30"))


@dataclass(frozen=True)
class ComplexBox:
    re: Interval
    im: Interval

    @classmethod
    def of(cls, z) -> "ComplexBox":
        if isinstance(z, ComplexBox):
            return z
        if isinstance(z, (tuple, list)):
            return cls(Interval.of(z[0]), Interval.of(z[1]))
        if hasattr(z, "_mpci_"):
            return cls.from_iv(z)
        z = complex(z) if not isinstance(z, (int, float, Fraction, str)) else z
        if isinstance(z, complex):
            return cls(Interval.of(z.real), Interval.of(z.imag))
        return cls(Interval.of(z), Interval.of(0))

    @classmethod
    def from_iv(cls, z) -> "ComplexBox":
        if hasattr(z, "_mpci_"):
            re, im = z._mpci_
            return cls(Interval(_ep(re[0]), _ep(re[1])), Interval(_ep(im[0]), _ep(im[1])))
        return cls(Interval.from_iv(z), Interval.of(0))

    @classmethod
    def around(cls, z: complex, radius: float) -> "ComplexBox":
        r = mp.mpf(radius)
        return cls(Interval.around(z.real, r), Interval.around(z.imag, r))

    def as_iv(self):
        return iv.mpc(self.re.as_iv(), self.im.as_iv())

    @property
    def mid(self) -> complex:
        return complex(float(self.re.mid), float(self.im.mid))

    def contains(self, z) -> bool:
        other = ComplexBox.of(z)
        return self.re.contains(other.re) and self.im.contains(other.im)

    def __contains__(self, z) -> bool:
        return self.contains(z)

    def overlaps(self, other: "ComplexBox") -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def abs(self) -> Interval:
        return Interval.from_iv(abs(self.as_iv()))

    def conj(self) -> "ComplexBox":
        return ComplexBox(self.re, -self.im)

    @property
    def width(self) -> mpmath.mpf:
        return max(self.re.width, self.im.width)

    def __add__(self, o):
        return ComplexBox.from_iv(self.as_iv() + ComplexBox.of(o).as_iv())

    def __sub__(self, o):
        return ComplexBox.from_iv(self.as_iv() - ComplexBox.of(o).as_iv())

    def __mul__(self, o):
        return ComplexBox.from_iv(self.as_iv() * ComplexBox.of(o).as_iv())

    def __truediv__(self, o):
        d = ComplexBox.of(o)
        if d.re.lo <= 0 <= d.re.hi and d.im.lo <= 0 <= d.im.hi:
            raise DomainError("division by a box containing zero")
        return ComplexBox.from_iv(self.as_iv() / d.as_iv())

    def __repr__(self) -> str:
        return f"ComplexBox(re={self.re!r}, im={self.im!r})"


# --------------------------------------------------------------------------
# log-domain magnitudes

_CANCEL_TOL = 1e-9


@dataclass(frozen=True)
class LogMagnitude:
    """``sign * 10**log10_abs``; ``sign == 0`` encodes exact zero."""

    sign: int
    log10_abs: float = 0.0

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        if self.sign == 0:
            object.__setattr__(self, "log10_abs", float("-inf"))

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(0)

    @classmethod
    def from_float(cls, x: float) -> "LogMagnitude":
        if x == 0:
            return cls(0)
        return cls(1 if x > 0 else -1, math.log10(abs(x)))

    @classmethod
    def from_log10(cls, l10: float, sign: int = 1) -> "LogMagnitude":
        return cls(sign, float(l10))

    @classmethod
    def from_ln(cls, ln_abs: float, sign: int = 1) -> "LogMagnitude":
        return cls(sign, float(ln_abs) / math.log(10))

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log10_abs > 308.3 or self.log10_abs < -323.5:
            raise OverflowError(f"10**{self.log10_abs} is outside float range")
        # split to keep the power exact when log10_abs is integral
        k = math.floor(self.log10_abs)
        return self.sign * (10.0 ** (self.log10_abs - k)) * (10.0 ** k)

    @property
    def ln_abs(self) -> float:
        return self.log10_abs * math.log(10)

    def mantissa_exponent(self) -> tuple[float, int]:
        """Return ``(m, e)`` with ``1 <= m < 10`` and value ``sign*m*10**e``."""
        e = math.floor(self.log10_abs)
        return self.sign * 10 ** (self.log10_abs - e), e

    def __mul__(self, o: "LogMagnitude") -> "LogMagnitude":
        o = _as_logmag(o)
        if self.sign == 0 or o.sign == 0:
            return LogMagnitude(0)
        return LogMagnitude(self.sign * o.sign, self.log10_abs + o.log10_abs)

    __rmul__ = __mul__

    def __truediv__(self, o: "LogMagnitude") -> "LogMagnitude":
        o = _as_logmag(o)
        if o.sign == 0:
            raise DomainError("division by zero magnitude")
        if self.sign == 0:
            return self
        return LogMagnitude(self.sign * o.sign, self.log10_abs - o.log10_abs)

    def __pow__(self, e: float) -> "LogMagnitude":
        if self.sign == 0:
            return self
        if self.sign < 0 and e != int(e):
            raise DomainError("fractional power of a negative magnitude")
        sign = self.sign if int(e) % 2 else 1
        return LogMagnitude(sign, self.log10_abs * e)

    def __add__(self, o: "LogMagnitude") -> "LogMagnitude":
        o = _as_logmag(o)
        if self.sign == 0:
            return o
        if o.sign == 0:
            return self
        big, small = (self, o) if self.log10_abs >= o.log10_abs else (o, self)
        d = small.log10_abs - big.log10_abs
        if big.sign == small.sign:
            return LogMagnitude(big.sign, big.log10_abs + math.log10(1 + 10 ** d))
        if d > -_CANCEL_TOL:
            raise ArithmeticError("catastrophic cancellation between opposite-sign magnitudes")
        return LogMagnitude(big.sign, big.log10_abs + math.log10(-math.expm1(d * math.log(10))))

    def __neg__(self) -> "LogMagnitude":
        return LogMagnitude(-self.sign, self.log10_abs)

    def _key(self) -> tuple[int, float]:
        if self.sign == 0:
            return (0, 0.0)
        return (self.sign, self.sign * self.log10_abs)

    def __lt__(self, o) -> bool:
        return self._key() < _as_logmag(o)._key()

    def __le__(self, o) -> bool:
        return self._key() <= _as_logmag(o)._key()

    def __gt__(self, o) -> bool:
        return self._key() > _as_logmag(o)._key()

    def __ge__(self, o) -> bool:
        return self._key() >= _as_logmag(o)._key()

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        m, e = self.mantissa_exponent()
        return f"{m:.6g}e{e:+d}"


def _as_logmag(x) -> LogMagnitude:
    if isinstance(x, LogMagnitude):
        return x
    return LogMagnitude.from_float(float(x))


def logmag_combine(kind: str, a: LogMagnitude, b: LogMagnitude):
    """``mul`` and ``add_same_sign`` return a LogMagnitude, ``compare`` returns -1/0/1."""
    if kind == "mul":
        return a * b
    if kind == "add_same_sign":
        if a.sign != b.sign and a.sign != 0 and b.sign != 0:
            raise ValueError("add_same_sign requires equal signs")
        return a + b
    if kind == "compare":
        ka, kb = a._key(), b._key()
        return (ka > kb) - (ka < kb)
    raise ValueError(f"unknown combine kind {kind!r}")


# --------------------------------------------------------------------------
# Gamma function on complex boxes

_STIRLING_TERMS = 12


def _bernoulli_fraction(n: int) -> Fraction:
    # mpmath.bernfrac is exact
    p, q = mpmath.bernfrac(n)
    return Fraction(int(p), int(q))


_BERN = [_bernoulli_fraction(2 * k) for k in range(0, 40)]


def complex_loggamma(w):
    """Enclosure of log Gamma(w) for an ``iv.mpc`` box with Re(w) large.

    Stirling series with remainder bounded by the first neglected term times
    ``sec(arg w / 2)**(2m+2)``, valid for Re(w) > 0.
    """
    m = _STIRLING_TERMS
    re_lo = mp.make_mpf(w.real._mpi_[0])
    if re_lo <= 0:
        raise DomainError("Stirling series needs Re(w) > 0")
    logw = iv.log(w)
    acc = (w - iv.mpf(0.5)) * logw - w + iv.log(2 * iv.pi) / 2
    winv = 1 / w
    winv2 = winv * winv
    pw = winv
    for k in range(1, m + 1):
        b = _BERN[k]
        c = iv.mpf(b.numerator) / iv.mpf(b.denominator * (2 * k) * (2 * k - 1))
        acc = acc + c * pw
        pw = pw * winv2
    absw_lo = mp.make_mpf(abs(w)._mpi_[0])
    b = abs(_BERN[m + 1])
    # sec^2(theta/2) = 2|w|/(|w| + Re w) <= 2 on the right half-plane
    sec2 = 2 * abs(w) / (abs(w) + w.real)
    sec2_hi = mp.make_mpf(sec2._mpi_[1])
    with mp.workprec(mp.prec + 20):
        rem = (mp.mpf(b.numerator) / b.denominator / ((2 * m + 2) * (2 * m + 1))
               / absw_lo ** (2 * m + 1) * sec2_hi ** (m + 1))
    r = iv.mpf([-rem, rem])
    return acc + iv.mpc(r, r)


def _shift_needed(w, target) -> int:
    re_lo = mp.make_mpf(w.real._mpi_[0])
    return max(0, int(mp.ceil(target - re_lo)))


def complex_gamma(w):
    """Enclosure of Gamma(w) on an ``iv.mpc`` box avoiding the poles."""
    target = max(12, iv.prec // 3)
    n = _shift_needed(w, target)
    prod = iv.mpc(1, 0)
    for k in range(n):
        f = w + k
        if (mp.make_mpf(f.real._mpi_[0]) <= 0 <= mp.make_mpf(f.real._mpi_[1])
                and mp.make_mpf(f.imag._mpi_[0]) <= 0 <= mp.make_mpf(f.imag._mpi_[1])):
            raise DomainError("box touches a pole of Gamma")
        prod = prod * f
    return iv.exp(complex_loggamma(w + n)) / prod


def digamma_real_part_upper(z) -> tuple[Interval, Interval]:
    """Return ``(log|z| - gamma_Q, Re psi(z/2))`` as enclosures.

    The first is an upper bound for the second whenever Re(z) >= 1/2.
    """
    z = ComplexBox.of(z)
    if z.re.lo < mp.mpf(0.5):
        raise DomainError("needs Re(z) >= 1/2")
    bound = z.abs().log() - EULER_GAMMA
    cre, cim = mp.mpf(z.re.mid) / 2, mp.mpf(z.im.mid) / 2
    with mp.workprec(mp.prec + 40):
        val = mp.re(mp.digamma(mp.mpc(cre, cim)))
    # Lipschitz widening: |psi'(w)| <= 1/(Re w)^2 + 1/Re w for Re w > 0
    rw = mp.mpf(z.re.lo) / 2
    lip = 1 / rw ** 2 + 1 / rw
    rad = mp.sqrt(((z.re.hi - z.re.lo) / 4) ** 2 + ((z.im.hi - z.im.lo) / 4) ** 2) * lip
    slack = abs(val) * mp.mpf(2) ** (-mp.prec + 4) + mp.mpf(2) ** (-mp.prec)
    actual = Interval(val - rad - slack, val + rad + slack)
    return bound, actual
