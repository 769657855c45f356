"""Gabriel-Zisman (co)homology of finite simplicial sets and Leray spectral sequences."""
from .delta import MonotoneMap, codegeneracy, coface, compose, epi_mono_factorize, identity
from .sset import SimplexRef, SimplicialMap, SSetPresentation, identity_map, pullback
from .spaces import builtin, builtin_map
from .category import (
    FactSystem,
    FiniteCategory,
    cyclic_group,
    eta_pullback,
    fact_category,
    linear_order,
    nerve,
)
from .coeff import (
    CONTRAVARIANT,
    COVARIANT,
    CellularSheaf,
    CoeffError,
    Constant,
    LocalSystem,
    SystemMorphism,
    invert,
    pullback_system,
    validate_system,
)
from .gz import (
    GZError,
    gz_cochain_complex,
    gz_chain_complex,
    gz_cohomology,
    gz_homology,
    homology_map,
    induced_map,
    opposite_duality_check,
    thomason_cohomology,
    thomason_homology,
)
from .leray import (
    LerayError,
    fiber_cohomology,
    fiber_homology,
    fibers,
    is_locally_cohomologically_constant,
    is_locally_cohomologically_trivial,
    leray_e2_via_fibers,
    leray_pages,
    leray_pages_homology,
)
from .homalg import GF, QQ, ZZ, Module, parse_ring

__all__ = [
    "MonotoneMap", "codegeneracy", "coface", "compose", "epi_mono_factorize", "identity",
    "SimplexRef", "SimplicialMap", "SSetPresentation", "identity_map", "pullback",
    "builtin", "builtin_map",
    "FactSystem", "FiniteCategory", "cyclic_group", "eta_pullback", "fact_category", "linear_order", "nerve",
    "CONTRAVARIANT", "COVARIANT", "CellularSheaf", "CoeffError", "Constant", "LocalSystem",
    "SystemMorphism", "invert", "pullback_system", "validate_system",
    "GZError", "gz_cochain_complex", "gz_chain_complex", "gz_cohomology", "gz_homology",
    "homology_map", "induced_map", "opposite_duality_check", "thomason_cohomology", "thomason_homology",
    "LerayError", "fiber_cohomology", "fiber_homology", "fibers", "is_locally_cohomologically_constant",
    "is_locally_cohomologically_trivial", "leray_e2_via_fibers", "leray_pages", "leray_pages_homology",
    "GF", "QQ", "ZZ", "Module", "parse_ring",
]
