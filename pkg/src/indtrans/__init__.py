"""Exact tools for partial independent transversals in multipartite graphs.

The package builds and certifies extremal multipartite constructions, solves
for maximum partial independent transversals exactly, evaluates the related
degree/class-size bound formulas in exact rational arithmetic, and runs the
feasible-pair augmentation engine that extracts induced matching
configurations together with runtime checks of their structural guarantees.
"""

from .bounds import BoundReport, Params, decompose, summary
from .constructions import Claim, build, certify, claimed, parse_recipe, serialize_recipe
from .errors import (
    BudgetExhausted,
    ClaimRefuted,
    ConstructionError,
    GraphError,
    HypothesisError,
    InvariantError,
    MpgFormatError,
    PreconditionError,
)
from .graph import MultipartiteGraph, VertexRef, parse, serialize
from .imc import (
    FeasiblePair,
    IMCRecord,
    SetupLevel,
    check_feasible,
    check_structure,
    extract_imc,
    no_transversal_certificate,
    run_augmentation,
    setup_level,
    verify_certificate,
)
from .solver import (
    Budget,
    SolveResult,
    Transversal,
    avoidance_it,
    enumerate_full_its,
    has_it_of_size,
    max_partial_it,
    no_it_certificate_brute,
)

__all__ = [
    "BoundReport",
    "Budget",
    "BudgetExhausted",
    "Claim",
    "ClaimRefuted",
    "ConstructionError",
    "FeasiblePair",
    "GraphError",
    "HypothesisError",
    "IMCRecord",
    "InvariantError",
    "MpgFormatError",
    "MultipartiteGraph",
    "Params",
    "PreconditionError",
    "SetupLevel",
    "SolveResult",
    "Transversal",
    "VertexRef",
    "avoidance_it",
    "build",
    "certify",
    "check_feasible",
    "check_structure",
    "claimed",
    "decompose",
    "enumerate_full_its",
    "extract_imc",
    "has_it_of_size",
    "max_partial_it",
    "no_it_certificate_brute",
    "no_transversal_certificate",
    "parse",
    "parse_recipe",
    "run_augmentation",
    "serialize",
    "serialize_recipe",
    "setup_level",
    "summary",
    "verify_certificate",
]

__version__ = "0.1.0"
