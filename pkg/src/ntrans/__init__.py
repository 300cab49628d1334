"""Exact computations with bound quivers, n-translation quivers and Koszul duality."""
from .algebra import GradedBasis, graded_basis, minimal_resolution
from .constructions import Window, is_extendable, smash_extension, trivial_extension
from .corpus import named, random_corpus
from .dual import check_double_dual, koszul_dual_quiver, quadratic_dual
from .hammock import almost_split_report, hammock, partial_as_regular, radical_layers, slice_truncation
from .koszul import classify_pq, koszul_homology, koszul_spaces
from .linalg import QQ, Field
from .quiver import BoundQuiver, load_quiver, parse_quiver, serialize, validate
from .translation import check_admissible, check_n_translation, infer_translation

__all__ = [
    "BoundQuiver", "Field", "GradedBasis", "QQ", "Window", "almost_split_report", "check_admissible",
    "check_double_dual", "check_n_translation", "classify_pq", "graded_basis", "hammock",
    "infer_translation", "is_extendable", "koszul_dual_quiver", "koszul_homology", "koszul_spaces",
    "load_quiver", "minimal_resolution", "named", "parse_quiver", "partial_as_regular", "quadratic_dual",
    "radical_layers", "random_corpus", "serialize", "slice_truncation", "smash_extension", "trivial_extension", "validate",
]
__version__ = "0.1.0"
