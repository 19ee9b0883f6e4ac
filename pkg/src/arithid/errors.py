"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class ArithIdError(Exception):
    """Base class for all errors raised by arithid."""


class DegenerateDomain(ArithIdError, ValueError):
    """Input lies outside the domain where a formula is defined."""

    def __init__(self, n, method: str, reason: str = ""):
        self.n = n
        self.method = method
        self.reason = reason
        msg = f"{method} is undefined at {n!r}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class InexactDivision(ArithIdError, ArithmeticError):
    """An exact-mode division left a nonzero remainder."""

    def __init__(self, numerator: int, denominator: int, where: str = ""):
        self.numerator = numerator
        self.denominator = denominator
        self.where = where
        super().__init__(
            f"{where + ': ' if where else ''}{numerator} is not divisible by {denominator}"
        )


class VanishingDenominator(ArithIdError, ZeroDivisionError):
    """A denominator evaluated to zero inside a declared domain."""


class NonIntegerResult(ArithIdError, ArithmeticError):
    """A rational-mode form failed to reduce to an integer."""


class NumericGuardError(ArithIdError):
    """Marker base for guards whose trip maps to CLI exit code 3."""


class ResidualGuard(NumericGuardError, ArithmeticError):
    """A floating-point sum is too far from an integer to be rounded safely."""

    def __init__(self, raw: float, residual: float, where: str = ""):
        self.raw = raw
        self.residual = residual
        self.where = where
        super().__init__(
            f"{where + ': ' if where else ''}raw value {raw!r} has residual "
            f"{residual:.3g} from the nearest integer"
        )


class NumericOverflow(NumericGuardError, OverflowError):
    """A value exceeds the supported integer width."""


class UnknownIdentity(ArithIdError, KeyError):
    def __str__(self):
        return f"unknown identity {self.args[0]!r}"


class UnknownTarget(ArithIdError, KeyError):
    def __str__(self):
        return f"unknown benchmark target {self.args[0]!r}"
