from __future__ import annotations


class ClutterForgeError(Exception):
    """
    Base class for every error raised by clutterforge
    """


class NotPrimePower(ClutterForgeError, ValueError):
    """
    Raised when a field order has two distinct prime factors
    """

    def __init__(self, q: int) -> None:
        super().__init__(f"{q} is not a prime power")
        self.q = q


class Unsupported(ClutterForgeError, ValueError):
    """
    Raised for field orders outside the built-in modulus table
    """

    def __init__(self, q: int) -> None:
        super().__init__(f"GF({q}) is not supported (q must be at most 32)")
        self.q = q


class DivisionByZero(ClutterForgeError, ZeroDivisionError):
    pass


class DimensionMismatch(ClutterForgeError, ValueError):
    pass


class FieldMismatch(ClutterForgeError, ValueError):
    pass


class BadIndex(ClutterForgeError, IndexError):
    pass


class TooLarge(ClutterForgeError):
    """
    Raised when an instance exceeds a representational cap. The cap is echoed
    so the caller can raise it through CLUTTERFORGE_BUDGET.
    """

    def __init__(self, what: str, size: int, limit: int) -> None:
        super().__init__(f"{what}: size {size} exceeds the limit of {limit}")
        self.what = what
        self.size = size
        self.limit = limit


class BudgetExceeded(ClutterForgeError):
    """
    Raised when a search exhausts its budget before reaching a verdict.
    This never means "absent".
    """

    def __init__(self, what: str, limit: int) -> None:
        super().__init__(f"{what}: budget of {limit} exhausted")
        self.what = what
        self.limit = limit


class OverlapError(ClutterForgeError, ValueError):
    """
    Raised when a delete set and a contract set intersect
    """


class NotConnectedComponent(ClutterForgeError, ValueError):
    pass


class WrongFieldClass(ClutterForgeError, ValueError):
    """
    Raised when a theorem is asked about a field it does not cover
    """

    def __init__(self, theorem: str, q: int) -> None:
        super().__init__(f"theorem {theorem} does not apply to GF({q})")
        self.theorem = theorem
        self.q = q


class WrongShape(ClutterForgeError, ValueError):
    """
    Raised when a witness builder gets a subspace whose matroid has the wrong
    shape
    """


class WrongField(ClutterForgeError, ValueError):
    pass


class PreconditionViolated(ClutterForgeError, ValueError):
    pass


class NoSeriesPair(ClutterForgeError, ValueError):
    pass


class ParseError(ClutterForgeError, ValueError):
    """
    Raised for malformed input. Lines and columns are 1-based; 0 means unknown.
    """

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}")
        self.line = line
        self.column = column


class VerificationFailed(ClutterForgeError, AssertionError):
    """
    Raised when a replayed certificate or a re-derived invariant does not hold
    """
