"""Cone-manifold volumes and A-polynomials of the double twist links J(2m+1, 2m+1)."""

from .apoly import a_polynomial, oracle_eliminate, q_poly, verify_on_variety
from .charvariety import canonical_poly
from .volume import cyclic_cover_volume, estimate_alpha_max, volume, volume_table

__all__ = [
    "a_polynomial",
    "canonical_poly",
    "cyclic_cover_volume",
    "estimate_alpha_max",
    "oracle_eliminate",
    "q_poly",
    "verify_on_variety",
    "volume",
    "volume_table",
]
__version__ = "0.1.0"
