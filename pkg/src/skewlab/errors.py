"""Exception catalog shared by every skewlab module."""

from __future__ import annotations


class SkewlabError(Exception):
    """Base class; every deliberate failure raises a subclass of this."""


class UnsupportedKind(SkewlabError):
    pass


class Unsupported(SkewlabError):
    """The operation is outside the decidable catalog for this input."""


class RingMismatch(SkewlabError):
    pass


class ContextMismatch(SkewlabError):
    pass


class ClosureViolation(SkewlabError):
    """Entry constraints are not multiplicatively closed."""


class BadIdempotents(SkewlabError):
    pass


class NotCentral(SkewlabError):
    pass


class NotRegular(SkewlabError):
    pass


class NotASubringOf(SkewlabError):
    pass


class NotStable(SkewlabError):
    """A map does not send the ring into itself."""


class WitnessNotInvertible(SkewlabError):
    pass


class IllDefined(SkewlabError):
    """The map does not descend through the truncation ideal."""


class LeibnizViolation(SkewlabError):
    pass


class CenterNotStable(SkewlabError):
    pass


class NotAProduct(SkewlabError):
    pass


class RhoIllDefined(SkewlabError):
    """sigma smears a component across several blocks."""


class OutOfCatalog(SkewlabError):
    pass


class BoundExceeded(SkewlabError):
    pass


class ArityMismatch(SkewlabError):
    pass


class BudgetExceeded(SkewlabError):
    pass


class UnknownExample(SkewlabError):
    pass


class ScenarioError(SkewlabError):
    """Scenario file is syntactically or semantically malformed."""


class BadLiteral(ScenarioError):
    pass


class DanglingReference(ScenarioError):
    pass
