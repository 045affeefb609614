"""Exact construction of isometries of symmetric bilinear spaces that extend a
given subspace isometry while mapping prescribed subspaces, flags, or Witt
decompositions onto their counterparts, with certificates for negative answers.
"""

from .errors import *  # noqa: F401,F403
from .field import QQ, FieldSpec, Scalar, arith, enumerate_field, gf
from .space import (
    MetricSpace,
    QuotientSpace,
    Subspace,
    intersect,
    perp,
    quotient_metric,
    radical,
    span,
    subspace_sum,
)
from .maps import Isometry, LinearMap, apply, compose, from_pairs, identity, image_of, inverse, restrict
from .witt import (
    WittDecomposition,
    find_isometry,
    find_isotropic_vector,
    find_subspace_isometry,
    is_isometric,
    random_isometry,
    subspace_isometric,
    witt_decompose,
    witt_extend,
)
from .extend import (
    ConditionReport,
    Obstruction,
    check_conditions,
    extend_orthogonal,
    extend_preserving_self_dual_flag,
    extend_preserving_subspace,
    extend_preserving_subspace_split,
    extend_singular,
    find_isometry_mapping_subspace,
    find_isometry_orthogonal_pair,
    induced_phi_A,
    induced_phi_A_perp,
    k3_extend,
)
from .flags import (
    Flag,
    flag_lattice,
    flags_isometric,
    is_self_dual,
    isotropic_pair_isometric,
    pair_subspace_flag_isometric,
    self_dual_flags_isometric,
)
from .decomp import (
    extend_direct_sum_pair,
    extend_direct_sum_triple,
    extend_hyperbolic,
    extend_witt_decomposition,
    induced_map_pair,
    induced_map_triple,
    projection_pair,
    projection_triple,
    refine_flag,
)

__version__ = "0.1.0"
