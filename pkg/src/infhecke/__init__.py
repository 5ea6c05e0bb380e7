"""Exact Lie-closure computations for the Hecke algebras of G(de,e,r)."""
from .classification import GroupData, classify
from .closure import bracket_closure, closure_mod_p, verify_theorem1
from .groups import GroupParams, construct
from .representations import Multipartition, irreducibles, seminormal_model
from .unitary import HeckeModel, builtin_d4, signature_scan, solve_form

__version__ = "0.1.0"

__all__ = [
    "GroupData", "GroupParams", "HeckeModel", "Multipartition", "bracket_closure",
    "builtin_d4", "classify", "closure_mod_p", "construct", "irreducibles",
    "seminormal_model", "signature_scan", "solve_form", "verify_theorem1",
]
