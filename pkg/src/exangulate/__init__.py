"""Finite n-exangulated categories from quiver algebras.

Construction of cluster-tilting style extension structures on module
subcategories, mechanical verification of the defining axioms, and
localization of the structure at a multiplicative system of morphisms via
roof calculus.
"""

__version__ = "0.1.0"

from .linalg import Matrix, kernel_basis, quotient_with_section, rref, rref_solve
from .quiver import (
    AlgebraPresentation,
    ExtElement,
    ExtSpace,
    ModMorphism,
    Module,
    Quiver,
    Relation,
    decompose,
    direct_sum,
    ext_group,
    hom_basis,
    hom_dim,
    interval_module,
    is_isomorphic,
    projective_cover,
    pull_back,
    push_forward,
    resolution,
    set_default_seed,
    simple_module,
    yoneda_class,
)
from .exangulated import (
    CheckResult,
    ExCategory,
    NExangle,
    Subcategory,
    check_core_axioms,
    is_n_exangle,
    lift_morphism,
    mapping_cocone,
    mapping_cone,
    realize,
)
from .localization import (
    EbarSpace,
    EtildeGroup,
    IdealQuotient,
    LocalizationError,
    LocalizationReport,
    MorphismClassSpec,
    Roof,
    check_mr,
    common_denominator,
    ebar_group,
    k_subgroup,
    localize,
    make_roof,
    roof_add,
    roof_equal,
    roof_pull,
    roof_push,
    s_tilde,
    weak_kc_check,
)

__all__ = [
    "AlgebraPresentation",
    "CheckResult",
    "EbarSpace",
    "EtildeGroup",
    "ExCategory",
    "ExtElement",
    "ExtSpace",
    "IdealQuotient",
    "LocalizationError",
    "LocalizationReport",
    "Matrix",
    "ModMorphism",
    "Module",
    "MorphismClassSpec",
    "NExangle",
    "Quiver",
    "Relation",
    "Roof",
    "Subcategory",
    "check_core_axioms",
    "check_mr",
    "common_denominator",
    "decompose",
    "direct_sum",
    "ebar_group",
    "ext_group",
    "hom_basis",
    "hom_dim",
    "interval_module",
    "is_isomorphic",
    "is_n_exangle",
    "k_subgroup",
    "kernel_basis",
    "lift_morphism",
    "localize",
    "make_roof",
    "mapping_cocone",
    "mapping_cone",
    "projective_cover",
    "pull_back",
    "push_forward",
    "quotient_with_section",
    "realize",
    "resolution",
    "roof_add",
    "roof_equal",
    "roof_pull",
    "roof_push",
    "rref",
    "rref_solve",
    "s_tilde",
    "set_default_seed",
    "simple_module",
    "weak_kc_check",
    "yoneda_class",
    "__version__",
]
