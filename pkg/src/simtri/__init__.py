"""simtri: counting, constructing, optimizing and verifying planar point
configurations rich in triangles almost-similar to a fixed shape."""

__version__ = "0.1.0"

from .counting import PointConfig, SimilarityCount
from .geometry import ShapeOrbit, TriangleShape
from .hypergraph import Hypergraph3, Pattern
from .optimize import OptimizationResult, WeightVector
from .recursion import HTable, RecurrenceReport

__all__ = [
    "PointConfig",
    "SimilarityCount",
    "ShapeOrbit",
    "TriangleShape",
    "Hypergraph3",
    "Pattern",
    "OptimizationResult",
    "WeightVector",
    "HTable",
    "RecurrenceReport",
    "__version__",
]
