"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SumFreeError(Exception):
    """Base class for every error raised by this package."""


class CompositeModulus(SumFreeError, ValueError):
    pass


class DimensionTooLarge(SumFreeError, ValueError):
    pass


class GroupTooLarge(SumFreeError):
    """Automorphism enumeration would exceed the configured cap."""


class SpaceMismatch(SumFreeError, ValueError):
    pass


class ZeroDilation(SumFreeError, ValueError):
    pass


class EmptyInput(SumFreeError, ValueError):
    pass


class HypothesisViolated(SumFreeError, ValueError):
    """Inputs do not satisfy the hypotheses of the requested construction."""


class WrongResidueClass(SumFreeError, ValueError):
    pass


class BadPrime(SumFreeError, ValueError):
    pass


class BadP(SumFreeError, ValueError):
    """The parameter set P of a structured set violates 0 not in P+P."""


class ZeroDirection(SumFreeError, ValueError):
    pass


class NotSubspace(SumFreeError, ValueError):
    pass


class UnsupportedPrime(SumFreeError, ValueError):
    pass


class NotSumFree(SumFreeError, ValueError):
    pass


class WrongSpace(SumFreeError, ValueError):
    pass


class SpaceTooLarge(SumFreeError, ValueError):
    pass


class ExhaustiveTooLarge(SumFreeError, ValueError):
    pass
