"""Exact path algebras, quiver representations, Ext^1 and ladder-system truncations."""

from .linalg import GF, QQ, Matrix, field_from_spec, kernel_basis, rank, rref, solve
from .quiver import (
    AInfinity,
    Arrow,
    Circular,
    FiniteQuiver,
    GeneratedQuiver,
    Path,
    closure,
    compose,
    decorated_ainfinity,
    is_acyclic,
    paths_into,
    power_cycle,
)
from .pathalg import AlgebraElement, PathAlgebra, coset_reduce
from .rep import (
    Representation,
    extend_T,
    fg_roundtrip_check,
    hom_space_dim,
    projective_rep,
    restrict,
    top_dims,
)
from .homol import (
    check_cor_1_3,
    euler_form,
    ext1_against_algebra,
    ext1_dim,
    is_projective_structural,
    minimal_resolution,
    prop16_forced_coset,
    standard_resolution,
)
from .ordinals import LadderSystem, OrdinalT, default_ladder
from .trlifaj import AInfFlavor, CircularFlavor, DSElement, TrlifajModel
from .textio import parse_quiver, parse_rep, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "AInfFlavor",
    "AInfinity",
    "AlgebraElement",
    "Arrow",
    "Circular",
    "CircularFlavor",
    "DSElement",
    "FiniteQuiver",
    "GF",
    "GeneratedQuiver",
    "LadderSystem",
    "Matrix",
    "OrdinalT",
    "Path",
    "PathAlgebra",
    "QQ",
    "Representation",
    "TrlifajModel",
    "check_cor_1_3",
    "closure",
    "compose",
    "coset_reduce",
    "decorated_ainfinity",
    "default_ladder",
    "euler_form",
    "ext1_against_algebra",
    "ext1_dim",
    "extend_T",
    "fg_roundtrip_check",
    "field_from_spec",
    "hom_space_dim",
    "is_acyclic",
    "is_projective_structural",
    "kernel_basis",
    "minimal_resolution",
    "parse_quiver",
    "parse_rep",
    "parse_scenario",
    "paths_into",
    "power_cycle",
    "projective_rep",
    "prop16_forced_coset",
    "rank",
    "restrict",
    "rref",
    "solve",
    "standard_resolution",
    "top_dims",
]
