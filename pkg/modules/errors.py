# modules/errors.py
"""Exceptions raised by the knotforge library.

Everything derives from KnotforgeError so the CLI can map library failures to exit code 1.
"""


class KnotforgeError(Exception):
    """Base class for computation errors."""


class UnsupportedRankError(KnotforgeError):
    """An operation that needs rank-1 Laurent polynomials got a higher rank."""


class InvalidArgumentError(KnotforgeError):
    pass


class PDParseError(KnotforgeError):
    """Malformed planar diagram code."""


class PresentationParseError(KnotforgeError):
    pass


class InvalidMonodromyError(KnotforgeError):
    """A monodromy matrix is not in SL(2, Z)."""


class CosetBudgetError(KnotforgeError):
    """Coset enumeration ran out of its budget; the index may still be finite."""

    def __init__(self, message, defined=0):
        super().__init__(message)
        self.defined = defined


class IncompleteTableError(KnotforgeError):
    pass


class InvalidRepresentationError(KnotforgeError):
    """A representation does not kill every relator."""


class DegeneratePresentationError(KnotforgeError):
    """No generator can be deleted for the Wada normalization."""


class EnumerationBudgetError(KnotforgeError):
    """Epimorphism search hit its node budget. `found` holds what was found so far."""

    def __init__(self, message, found=None, nodes=0):
        super().__init__(message)
        self.found = list(found or [])
        self.nodes = nodes


class MinorBudgetError(KnotforgeError):
    def __init__(self, message, consumed=0):
        super().__init__(message)
        self.consumed = consumed


class DivergenceError(KnotforgeError):
    """A gluing fiber is infinite within the truncation window."""


class UnknownKnotError(KnotforgeError):
    pass


class UnsupportedBettiError(KnotforgeError):
    pass
