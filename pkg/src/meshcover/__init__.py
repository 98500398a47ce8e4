"""Exact computations with translation quivers, their covers and mesh categories,
and the Auslander-Reiten components of Dynkin path algebras."""

from .fields import GroundField, QQ
from .translation_quiver import (
    TranslationQuiver,
    TruncatedCover,
    check_covering,
    identity_cover,
    is_with_length,
    lift_path,
    universal_cover,
    validate,
)
from .modulation import ModulatedQuiver, attach_split_modulation, mesh_element
from .mesh_category import MeshCategory
from .rep_engine import ARComponent, HereditaryAlgebra, Representation, ModuleMorphism, knit
from .wellbehaved import (
    WellBehavedFunctor,
    build_well_behaved,
    composite_degree,
    seeded_build,
    verify_graded_covering,
    verify_injectivity,
)

__version__ = "0.1.0"
