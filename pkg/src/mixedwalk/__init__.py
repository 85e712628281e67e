"""Periodicity of discrete-time quantum walks on mixed graphs, decided exactly over cyclotomic fields."""

from .cyclo import CycloElem, FloatAngle, RationalAngle, cyclotomic_polynomial, parse_angle
from .graph import MixedGraph, build, triangle_count
from .matrices import FieldMatrix, hermitian_adjacency, time_evolution
from .charpoly import Poly, charpoly, coefficient_identities, inherited_factor, spectral_map_check
from .periodicity import PeriodicityReport, decide_periodicity

__all__ = [
    "CycloElem", "FloatAngle", "RationalAngle", "cyclotomic_polynomial", "parse_angle",
    "MixedGraph", "build", "triangle_count",
    "FieldMatrix", "hermitian_adjacency", "time_evolution",
    "Poly", "charpoly", "coefficient_identities", "inherited_factor", "spectral_map_check",
    "PeriodicityReport", "decide_periodicity",
]
