"""Singer groups of generalized quadrangles: W(q), its Payne derivative,
hyperoval quadrangles T2*(H) and lattice presentations built from them."""
from .gf import Field, field_of_order, get_field
from .incidence import GQCertificate, IncidenceStructure, payne_derive, verify_gq
from .matgroup import FinGroup, generate, invariants
from .symplectic import build_wq

__version__ = "0.1.0"

__all__ = [
    "FinGroup",
    "Field",
    "GQCertificate",
    "IncidenceStructure",
    "build_wq",
    "field_of_order",
    "generate",
    "get_field",
    "invariants",
    "payne_derive",
    "verify_gq",
]
