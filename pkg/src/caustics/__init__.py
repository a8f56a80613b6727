"""Periodic invariant graphs of exact symplectic twist maps and convex billiards."""
from .billiards import BirkhoffModel, OuterModel, SymplecticModel, make_model
from .family import FamilySpec, classify, continue_graph, perturbed_ellipse_family, scan
from .geometry import DomainSpec, circle, ellipse, ellipse_spec, harmonics
from .periodic import Rotation, build_candidate_graph, certify, solve_eta
from .twist import ShearModel, twist_interval_estimate

__all__ = [
    "BirkhoffModel", "OuterModel", "SymplecticModel", "make_model",
    "FamilySpec", "classify", "continue_graph", "perturbed_ellipse_family", "scan",
    "DomainSpec", "circle", "ellipse", "ellipse_spec", "harmonics",
    "Rotation", "build_candidate_graph", "certify", "solve_eta",
    "ShearModel", "twist_interval_estimate",
]
