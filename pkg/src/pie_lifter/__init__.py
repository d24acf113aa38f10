"""Finite 2-categorical limits: σ-s-limits, PIE analysis, and lifting to algebras."""

__version__ = "0.1.0"

from .fincat import CellClass, FinCategory, Functor, NatTrans  # noqa: E402
from .twocat import TwoCategory, TwoFunctor, pie_analysis  # noqa: E402
from .cones import LAX, OPLAX, sigma_s_limit, verify_universal_property  # noqa: E402
from .pie_construct import build_via_pie, compare_constructions  # noqa: E402
from .weights import compare_weighted_conical, grothendieck, weighted_limit  # noqa: E402
from .algebras import lift_limit, detection_check  # noqa: E402
from .dsl import Workspace, parse_workspace, load_files  # noqa: E402

__all__ = [
    "CellClass",
    "FinCategory",
    "Functor",
    "NatTrans",
    "TwoCategory",
    "TwoFunctor",
    "pie_analysis",
    "LAX",
    "OPLAX",
    "sigma_s_limit",
    "verify_universal_property",
    "build_via_pie",
    "compare_constructions",
    "compare_weighted_conical",
    "grothendieck",
    "weighted_limit",
    "lift_limit",
    "detection_check",
    "Workspace",
    "parse_workspace",
    "load_files",
]
