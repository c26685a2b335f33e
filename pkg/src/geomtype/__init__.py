"""Geometric types of Markov partitions for pseudo-Anosov flows: invariants, equivalence, covers, paths."""

from .core import FULL2, GOLD, TRIV, GeometricType, SubrectangleRef, H, V, make_type, parse, serialize, validate
from .equivalence import canonical_form, enumerate_class, is_equal, is_equivalent
from .symbolic import entropy, perron, transition_matrix

__all__ = [
    "FULL2", "GOLD", "TRIV", "GeometricType", "SubrectangleRef", "H", "V", "make_type", "parse", "serialize",
    "validate", "canonical_form", "enumerate_class", "is_equal", "is_equivalent", "entropy", "perron",
    "transition_matrix",
]
