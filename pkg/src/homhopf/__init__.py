"""Exact verification toolkit for monoidal Hom-Hopf algebras, covariant
Hom-bimodules and Yetter-Drinfeld Hom-modules over Q and F_p."""

__version__ = "0.1.0"

from .exactlin import GF, QQ, Matrix, Subspace, Tensor3, field_from_spec
from .homcore import HomHopfAlgebra, VerificationReport, verify_hom_hopf, yau_twist
from .homrep import HomRepresentation
from .yd import YDModule, verify_yd

__all__ = [
    "__version__", "GF", "QQ", "Matrix", "Subspace", "Tensor3", "field_from_spec",
    "HomHopfAlgebra", "VerificationReport", "verify_hom_hopf", "yau_twist",
    "HomRepresentation", "YDModule", "verify_yd",
]
