"""Verification toolkit for self-similar groupoid actions on higher-rank
graphs: product categories, alignment and concordance checking, twisted
cocycle homotopies, an exact normal-form algebra model, and truncated matrix
representations that cross-validate it."""

from .categories import (
    SmallCategory,
    TableCategory,
    check_left_cancellative,
    equivalent,
    invertibles,
    principal_ideal,
    validate_category,
)
from .kgraph import (
    Edge,
    KGraph,
    KGraphPresentation,
    Path,
    skeleton_split,
    structural_predicates,
    sub_kgraph,
    validate_kgraph,
)
from .groupoid import (
    FiniteGroupoid,
    GroupoidPresentation,
    check_transversal,
    validate_groupoid,
)
from .selfsim import (
    ActionTable,
    FreeMonoidCategory,
    MatchedPair,
    ZSCategory,
    ZSMorphism,
    check_jointly_faithful,
    check_self_similar,
    extend_action,
    restrict_pair,
    verify_matched_pair,
    zs_compose,
)
from .alignment import (
    IdealMeetResult,
    Subcategory,
    builtin_counterexample,
    check_concordant,
    check_exhaustive,
    check_exhaustive_lifting,
    equivalent_sets,
    independent,
    meet_ideal,
    minimal_exhaustive_sets,
    path_inclusion,
    zs_inclusion,
)
from .cocycle import (
    Cocycle,
    ConstantHomotopy,
    GridFunction,
    LinearHomotopy,
    Phase,
    PhaseSum,
    RotationForm,
    TableForm,
    linear_homotopy,
    restrict_cocycle,
    rotation_cocycle,
    trivial_cocycle,
    verify_cocycle,
    verify_homotopy,
)
from .normalform import (
    AlgebraModel,
    Element,
    ModuleVector,
    corner_decomposition,
    correspondence_pair,
    random_element,
)
from .matrixrep import (
    TruncatedRep,
    build_grid_reps,
    build_rep,
    check_homotopy_relations,
    check_product_agreement,
    check_relations,
    represent_element,
)
from .report import Report

__version__ = "0.1.0"
