"""Exact iterated bar constructions of finite rings, groups and augmented algebras.

The main entry points are :func:`iterated_bar` (B^n of an abelian group, as a
simplicial group), :class:`GridSimplicialSet` (the set view of B^n S), the
cup product checks in :mod:`barcalc.cup` and the dg side in :mod:`barcalc.dg`.
"""

__version__ = "0.1.0"

from .bar import bar, face_eval, degen_eval, iterated_bar, iterated_bar_algebra
from .cup import (
    check_cup_forms,
    check_graded_ring_axioms,
    cup_closed_form,
    cup_eval,
    homology_circle_product,
    hopf_checks,
    naturality_check,
)
from .dg import DGAlgebra, alexander_whitney, condense, dg_bar, dold_puppe_compare, ez_shuffle
from .errors import BarcalcError, InvalidInput, ResourceBudgetExceeded
from .exact_linalg import FGAbelianGroup, IntMatrix, snf
from .rings import AugCommAlgebra, Coeff, FiniteRing, RingSpec
from .simplicial import (
    ChainComplex,
    GridSimplicialSet,
    homology,
    homotopy_groups,
    linearize,
    normalized_chains,
    unnormalized_chains,
)

__all__ = [
    "AugCommAlgebra", "BarcalcError", "ChainComplex", "Coeff", "DGAlgebra", "FGAbelianGroup",
    "FiniteRing", "GridSimplicialSet", "IntMatrix", "InvalidInput", "ResourceBudgetExceeded", "RingSpec",
    "__version__", "alexander_whitney", "bar", "check_cup_forms", "check_graded_ring_axioms",
    "condense", "cup_closed_form", "cup_eval", "degen_eval", "dg_bar", "dold_puppe_compare",
    "ez_shuffle", "face_eval", "homology", "homology_circle_product", "homotopy_groups", "hopf_checks",
    "iterated_bar", "iterated_bar_algebra", "linearize", "naturality_check", "normalized_chains", "snf",
    "unnormalized_chains",
]
