"""Bounds on e_n(alpha) = ln E_n(alpha), certificates and the upper-bound machinery."""

from .poly import BivarPoly, dimension, simplex, vanishing_order
from .norms import NormEnclosure, norm_on_K, norm_on_K_direct, norm_on_bidisk
from .upper import beta_product, beta_regrouped, coeff_bound_check, node_vanishing
from .bounds import bounds_table, en_lower, en_upper, theorem_tail
from .certificates import (
    Certificate, certificate_explicit, certificate_nullspace, certificate_to_json,
    l2_candidate, verify_certificate,
)
