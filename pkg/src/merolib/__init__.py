"""Exact algebra for trace spaces of quivers, braid varieties and relative cycles."""

from .caps import CapExceeded, Caps
from .exactalg import CoordinateRing, Fq, LaurentPoly, count_points, enumerate_points, evaluate, parse_poly
from .groebner import GroebnerBasis, RationalSection, Regularity, buchberger, is_regular, normal_form
from .quiverhh import Chain, PathClass, Quiver, Representation, ho_trace, trace_space
from .braidvar import BraidWord, Permutation, demazure, variety_presentation
from .holonomy import CrossingWord, hopf_orbit_census, local_lift, merodromy, verify_local_to_global

__version__ = "0.1.0"

__all__ = [
    "BraidWord",
    "CapExceeded",
    "Caps",
    "Chain",
    "CoordinateRing",
    "CrossingWord",
    "Fq",
    "GroebnerBasis",
    "LaurentPoly",
    "PathClass",
    "Permutation",
    "Quiver",
    "RationalSection",
    "Regularity",
    "Representation",
    "buchberger",
    "count_points",
    "demazure",
    "enumerate_points",
    "evaluate",
    "ho_trace",
    "hopf_orbit_census",
    "is_regular",
    "local_lift",
    "merodromy",
    "normal_form",
    "parse_poly",
    "trace_space",
    "variety_presentation",
    "verify_local_to_global",
]
