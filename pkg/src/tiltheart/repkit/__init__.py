"""Finite-dimensional modules over path algebras and their homological algebra."""

from .decompose import Decomposition, IsoResult, NonSplitWarning, decompose, is_isomorphic
from .homological import (
    Ext1Result,
    ProjPresentation,
    ar_translate,
    ext1,
    extension_module,
    injective_sum,
    killed_by_ideal_power,
    min_presentation,
    module_times_ideal,
    projective_cover,
    radical_space,
    radical_top,
    reject_space,
    top_multiplicities,
    trace_and_reject,
    trace_space,
)
from .lattice import LatticeCapExceeded, submodule_lattice
from .module import (
    AlgebraMismatch,
    DirectSum,
    HomSpace,
    NotASubmodule,
    RelationViolation,
    Representation,
    RepMorphism,
    cokernel,
    direct_sum,
    from_generators,
    generate,
    hom_space,
    identity,
    image,
    image_space,
    kernel,
    kernel_space,
    projective,
    projective_map,
    projective_map_elements,
    projective_sum,
    quotient,
    regular_module,
    simple,
    submodule,
    validate,
    zero_module,
    zero_morphism,
)
