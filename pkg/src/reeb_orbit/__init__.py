"""Reeb graphs of PL circle-valued functions on the torus and the groups they determine."""
__version__ = "0.1.0"

from .group_expr import Atom, Product, Trivial, WreathZ, Zfree, abelianization, canonicalize, render
from .orbit import OrbitReport, analyze, kernel_report, lift_null_homotopic
from .reeb import decorated_cycle, first_betti, level_components, reeb_graph, rotation_order
from .torus_pl import (CircleFunction, FlatEdge, TorusComplex, build_function, build_grid_torus,
                       classify_vertex, cohomology_class, index_sum)

__all__ = [
    "Atom", "Product", "Trivial", "WreathZ", "Zfree", "abelianization", "canonicalize", "render",
    "OrbitReport", "analyze", "kernel_report", "lift_null_homotopic",
    "decorated_cycle", "first_betti", "level_components", "reeb_graph", "rotation_order",
    "CircleFunction", "FlatEdge", "TorusComplex", "build_function", "build_grid_torus",
    "classify_vertex", "cohomology_class", "index_sum",
]
