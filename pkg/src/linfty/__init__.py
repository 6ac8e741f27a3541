"""Exact-arithmetic workbench for curved L-infinity algebras and modules."""

from .graded import (
    GradedSpace,
    InputError,
    LinftyError,
    MathCheckError,
    format_scalar,
    koszul_sign,
    multi_shuffles,
    parse_scalar,
    shuffles,
)
from .structures import (
    LInftyMorphism,
    LInftyStructure,
    chain_complex,
    check_morphism,
    check_square_zero,
    compose,
    conjugate,
    from_curved_lie,
    identity_morphism,
    invert,
    is_quasi_iso,
    strict_morphism,
)
from .twisting import (
    check_morphism_twist_identities,
    check_pushforward_functoriality,
    check_structure_twist_identities,
    exp_element,
    maurer_cartan_series,
    mc_check,
    mc_preservation,
    push_mc,
    twist_morphism,
    twist_structure,
)
from .modules import (
    LInftyModule,
    ModuleMorphism,
    check_module_morphism,
    check_module_square_zero,
    check_module_twist_consistency,
    compose_module_morphisms,
    from_dg_module,
    identity_module_morphism,
    module_from_morphism,
    module_morphism_from_triangle,
    twist_module,
    twist_module_morphism,
)
from .products import (
    CoverDescription,
    ProductStructure,
    assemble_and_twist,
    build_cech_complex,
    product_morphism,
    projection,
    slotwise_morphism,
)
from .resolutions import (
    ResolutionDiagram,
    ResolutionMorphism,
    check_adapted_mc,
    check_resolution,
    check_resolution_morphism,
    induced_cohomology_sequence,
    module_chain_complex,
    prop_key_pipeline,
    twist_resolution,
    twist_resolution_morphism,
)
from .io import FixtureWriter, load_document, serialize_document

__all__ = [
    "CoverDescription",
    "FixtureWriter",
    "GradedSpace",
    "InputError",
    "LInftyModule",
    "LInftyMorphism",
    "LInftyStructure",
    "LinftyError",
    "MathCheckError",
    "ModuleMorphism",
    "ProductStructure",
    "ResolutionDiagram",
    "ResolutionMorphism",
    "assemble_and_twist",
    "build_cech_complex",
    "chain_complex",
    "check_adapted_mc",
    "check_module_morphism",
    "check_module_square_zero",
    "check_module_twist_consistency",
    "check_morphism",
    "check_morphism_twist_identities",
    "check_pushforward_functoriality",
    "check_resolution",
    "check_resolution_morphism",
    "check_square_zero",
    "check_structure_twist_identities",
    "compose",
    "compose_module_morphisms",
    "conjugate",
    "exp_element",
    "format_scalar",
    "from_curved_lie",
    "from_dg_module",
    "identity_module_morphism",
    "identity_morphism",
    "induced_cohomology_sequence",
    "invert",
    "is_quasi_iso",
    "koszul_sign",
    "load_document",
    "maurer_cartan_series",
    "mc_check",
    "mc_preservation",
    "module_chain_complex",
    "module_from_morphism",
    "module_morphism_from_triangle",
    "multi_shuffles",
    "parse_scalar",
    "product_morphism",
    "projection",
    "prop_key_pipeline",
    "push_mc",
    "serialize_document",
    "shuffles",
    "slotwise_morphism",
    "strict_morphism",
    "twist_module",
    "twist_module_morphism",
    "twist_morphism",
    "twist_resolution",
    "twist_resolution_morphism",
    "twist_structure",
]
