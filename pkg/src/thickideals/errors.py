"""Exception hierarchy shared by every module of the package."""


class ThickIdealsError(Exception):
    """Base class for all library errors."""


class ParseError(ThickIdealsError, ValueError):
    pass


class NotPrime(ThickIdealsError, ValueError):
    pass


class ZeroElement(ThickIdealsError, ValueError):
    pass


class UnsupportedRing(ThickIdealsError):
    pass


class InfiniteSpectrum(ThickIdealsError):
    pass


class NotMaximal(ThickIdealsError, ValueError):
    pass


class RingMismatch(ThickIdealsError, ValueError):
    pass


class InvalidComplex(ThickIdealsError, ValueError):
    """Raised when d∘d ≠ 0, shapes disagree, or a chain map does not commute."""


class SizeBudgetExceeded(ThickIdealsError):
    def __init__(self, needed, budget):
        super().__init__(f"total rank {needed} exceeds budget {budget}")
        self.needed = needed
        self.budget = budget


class NotArtinian(ThickIdealsError):
    pass


class NotCompactDescriptor(ThickIdealsError, ValueError):
    pass


class UnsupportedCombination(ThickIdealsError):
    pass


class UnknownIdentity(ThickIdealsError, KeyError):
    def __str__(self):
        return f"unknown verify name {self.args[0]!r}; 'verify list' shows the names"


class BeyondWindow(ThickIdealsError):
    """A formal complex was queried past the degree where its data is known."""
