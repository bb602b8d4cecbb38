"""Stability of rank-1 torsion-free sheaf classes on nodal curves.

Curves are given by their dual graphs; sheaves by the nodes where they fail
to be locally free together with a multidegree.  See the README for a tour.
"""

from .curve import DualGraph, Edge, cycle_graph, irreducible, path_graph, two_component
from .enumeration import (
    EnumerationResult,
    count_jh_classes,
    enumerate_classes,
    genus1_polarization,
    genus1_stratification,
    spanning_tree_count,
)
from .errors import (
    ChiMismatch,
    InvariantBreach,
    JacstabError,
    NotSemistable,
    ReductionCapExceeded,
)
from .jordan_holder import JHClass, JHFiltration, build_quasistable, glue, gr, jh_equivalent, jh_filtration
from .reduction import TwistTrace, class_id, reduce, semistable_reduce, sigma_reduce, twist
from .sheaf import CombSheaf
from .stability import (
    Polarization,
    StabilityReport,
    beta,
    check_all,
    find_polarization,
    is_p_quasistable,
    is_quasistable,
    is_semistable,
    is_stable,
    is_W_quasistable,
    seshadri_convert,
)

__version__ = "0.1.0"

__all__ = [
    "beta",
    "build_quasistable",
    "check_all",
    "ChiMismatch",
    "class_id",
    "CombSheaf",
    "count_jh_classes",
    "cycle_graph",
    "DualGraph",
    "Edge",
    "enumerate_classes",
    "EnumerationResult",
    "find_polarization",
    "genus1_polarization",
    "genus1_stratification",
    "glue",
    "gr",
    "InvariantBreach",
    "irreducible",
    "is_p_quasistable",
    "is_quasistable",
    "is_semistable",
    "is_stable",
    "is_W_quasistable",
    "JacstabError",
    "jh_equivalent",
    "jh_filtration",
    "JHClass",
    "JHFiltration",
    "NotSemistable",
    "path_graph",
    "Polarization",
    "reduce",
    "ReductionCapExceeded",
    "semistable_reduce",
    "seshadri_convert",
    "sigma_reduce",
    "spanning_tree_count",
    "StabilityReport",
    "twist",
    "TwistTrace",
    "two_component",
]
