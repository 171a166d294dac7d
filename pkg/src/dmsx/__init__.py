"""Graded curves, string objects and q-intersections on decorated marked surfaces."""
from __future__ import annotations

from .algebra import build_differential, build_ext, enumerate_arrows, zero_part
from .bigraded_poly import BiDegree, BiLaurent, bl_add, bl_involute, bl_mul
from .curves import (
    ClosedArc,
    CurveWalk,
    braid_twist,
    classify,
    decompose,
    dual_arc,
    dual_arcs,
    extend,
    invert_curve,
    normalize,
    shift_curve,
    zero_level,
)
from .harness import (
    OrbitSpec,
    VerificationReport,
    enumerate_closed_arcs,
    verify_cones,
    verify_main_theorem,
    verify_slide,
    verify_twist_compat,
)
from .intersect import crossings, q_int, q_int_open
from .strings import (
    TwistedComplex,
    angle_morphism,
    cone_of,
    fingerprint,
    hom_complex,
    lagrangian_check,
    minimize,
    qdim_hom,
    spherical_twist,
    string_of_curve,
)
from .surface import SurfaceSpec, compile_surface, regrade_arc, seed_surface, slide, validate_surface

__all__ = [
    "BiDegree",
    "BiLaurent",
    "ClosedArc",
    "CurveWalk",
    "OrbitSpec",
    "SurfaceSpec",
    "TwistedComplex",
    "VerificationReport",
    "angle_morphism",
    "bl_add",
    "bl_involute",
    "bl_mul",
    "braid_twist",
    "build_differential",
    "build_ext",
    "classify",
    "compile_surface",
    "cone_of",
    "crossings",
    "decompose",
    "dual_arc",
    "dual_arcs",
    "enumerate_arrows",
    "enumerate_closed_arcs",
    "extend",
    "fingerprint",
    "hom_complex",
    "invert_curve",
    "lagrangian_check",
    "minimize",
    "normalize",
    "q_int",
    "q_int_open",
    "qdim_hom",
    "regrade_arc",
    "seed_surface",
    "shift_curve",
    "slide",
    "spherical_twist",
    "string_of_curve",
    "validate_surface",
    "verify_cones",
    "verify_main_theorem",
    "verify_slide",
    "verify_twist_compat",
    "zero_level",
]
