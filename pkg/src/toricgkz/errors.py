"""Exception types shared across the library."""


class ToricError(Exception):
    """Base class for all library errors."""


class InvalidInput(ToricError):
    """Malformed or inconsistent input data."""


class UnsupportedWeights(InvalidInput):
    """Weight vector is not of the supported Fermat type."""


class DegenerateBrane(InvalidInput):
    """Brane vector collapses w1 onto w0."""


class InconsistentInput(InvalidInput):
    """Cross-referenced structures do not match (e.g. ray not a point)."""


class BraneOutsideSupport(ToricError):
    """Brane point w0 does not lie in the support of the lifted fan."""


class RelationUndefined(ToricError):
    """A primitive collection has no relation inside the fan support."""


class NonArtinian(ToricError):
    """Quotient ring is not finite dimensional."""


class NotAUnit(ToricError):
    """Element has no inverse (vanishing constant term)."""


class NotARelation(ToricError):
    """Integer vector is not in the relation lattice."""


class ChartMismatch(ToricError):
    """Operator and series/chart do not live on the same chart."""


class NotUnimodular(ToricError):
    """Basis-change matrix is not invertible over the integers."""


class ChartOnPole(ToricError):
    """Chart substitution kills a denominator identically."""


class SingularPoint(ToricError):
    """All partial derivatives vanish at the reduction point."""


class InvalidForm(ToricError):
    """Form is not meromorphic in the expected variable."""


class AssumptionViolated(ToricError):
    """A precondition of the residue pipeline fails (e.g. transversality)."""
