"""Certified checks of explicit zero-density estimates for Dirichlet L-functions.

Every numeric claim is enclosed in outward-rounded interval arithmetic and
reported as a :class:`BoundCertificate` with a verdict of ``holds``,
``inconclusive``, ``violated`` or ``not_applicable``.
"""

from .certificate import HOLDS, INCONCLUSIVE, NOT_APPLICABLE, VIOLATED, BoundCertificate
from .characters import DirichletCharacter, enumerate_primitive
from .numerics import ComplexBox, DomainError, Interval, LogMagnitude

__all__ = ["BoundCertificate", "ComplexBox", "DirichletCharacter", "DomainError", "HOLDS", "INCONCLUSIVE",
           "Interval", "LogMagnitude", "NOT_APPLICABLE", "VIOLATED", "enumerate_primitive"]
__version__ = "0.1.0"
