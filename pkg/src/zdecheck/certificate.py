"""The record produced by every bound evaluator."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from mpmath import mp

from .numerics import Interval, LogMagnitude

__all__ = ["BoundCertificate", "HOLDS", "INCONCLUSIVE", "VIOLATED", "NOT_APPLICABLE", "compare_verdict"]

HOLDS = "holds"
INCONCLUSIVE = "inconclusive"
VIOLATED = "violated"
NOT_APPLICABLE = "not_applicable"


def compare_verdict(observed: Interval, bound: Interval) -> str:
    """``holds`` needs ``observed.hi <= bound.lo``; ``violated`` needs strict separation."""
    if observed.hi <= bound.lo:
        return HOLDS
    if observed.lo > bound.hi:
        return VIOLATED
    return INCONCLUSIVE


def _jsonable(v: Any) -> Any:
    if isinstance(v, Interval):
        return v.to_json()
    if isinstance(v, LogMagnitude):
        return None if v.sign == 0 else v.log10_abs
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    if isinstance(v, mp.mpf):
        return float(v)
    return str(v)


@dataclass(frozen=True)
class BoundCertificate:
    """One evaluated inequality ``observed <= bound``.

    ``bound`` is stored in the log domain; ``bound_interval`` and
    ``observed_interval`` keep the enclosures that decided the verdict.
    """

    name: str
    inputs: dict
    bound: LogMagnitude
    observed: Any
    verdict: str
    notes: str = ""
    bound_interval: Interval | None = field(default=None, compare=False)
    observed_interval: Interval | None = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return self.verdict in (HOLDS, NOT_APPLICABLE)

    def to_dict(self) -> dict:
        obs = self.observed
        if isinstance(obs, LogMagnitude):
            obs = {"log10": None if obs.sign == 0 else obs.log10_abs, "sign": obs.sign}
        out = {
            "name": self.name,
            "inputs": _jsonable(self.inputs),
            "bound_log10": None if self.bound.sign == 0 else self.bound.log10_abs,
            "observed": _jsonable(obs),
            "verdict": self.verdict,
            "notes": self.notes,
        }
        if self.bound_interval is not None:
            out["bound_interval"] = self.bound_interval.to_json()
        if self.observed_interval is not None:
            out["observed_interval"] = self.observed_interval.to_json()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_interval(cls, name: str, inputs: dict, observed: Interval, bound: Interval,
                      notes: str = "") -> "BoundCertificate":
        lo = bound.lo
        b = LogMagnitude(0) if lo == 0 else LogMagnitude.from_log10(float(mp.log10(abs(lo))), 1 if lo > 0 else -1)
        obs_val = float(observed.hi)
        return cls(name, inputs, b, obs_val, compare_verdict(observed, bound), notes, bound, observed)

    @classmethod
    def not_applicable(cls, name: str, inputs: dict, notes: str) -> "BoundCertificate":
        return cls(name, inputs, LogMagnitude(0), None, NOT_APPLICABLE, notes)
