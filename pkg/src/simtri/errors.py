"""Exception types shared across the simtri package."""


class SimtriError(Exception):
    """Base class for all domain errors raised by simtri."""


class DegenerateTriangle(SimtriError):
    """Coincident or collinear points where a proper triangle is required."""


class InvalidEpsilon(SimtriError):
    """Angle tolerance outside (0, min angle of the target shape)."""


class SizeMismatch(SimtriError):
    """Two point lists or vectors that must have equal length do not."""


class DegenerateTarget(SimtriError):
    """Candidate configuration has coincident points the reference does not."""


class RealShape(SimtriError):
    """A complex shape parameter with zero imaginary part."""


class VertexOutOfRange(SimtriError):
    """Vertex index outside 1..r of a hypergraph."""


class TooLarge(SimtriError):
    """Input exceeds the size an exhaustive procedure can handle."""


class BudgetExceeded(SimtriError):
    """Enumeration would exceed the configured work budget."""


class InvalidWeights(SimtriError):
    """Weight vector is not a strictly positive point of the simplex."""


class DegenerateDenominator(SimtriError):
    """Density functional evaluated where 1 - sum(x^3) vanishes."""


class NoSafeRadius(SimtriError):
    """No perturbation radius preserves the similarity classification."""


class UnsupportedPattern(SimtriError):
    """Pattern admits no pinned placement order for the realizability search."""


class PrerequisiteFailed(SimtriError):
    """A check was requested whose hypotheses were not established."""
