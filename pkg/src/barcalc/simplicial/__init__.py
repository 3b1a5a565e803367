"""Simplicial sets, groups, modules and bisimplicial objects."""

from .bisimplicial import (
    BisimplicialObject,
    bar_bisimplicial,
    constant_bisimplicial,
    diagonal,
    grid_bisimplicial,
    linearize_bisimplicial,
)
from .chains import (
    ChainComplex,
    homology,
    homotopy_groups,
    nondegenerate_basis,
    normalized_chains,
    unnormalized_chains,
)
from .groups import MatrixSetView, SimplicialAbGroup, constant_group
from .identities import IdentityReport, Violation, verify_identities
from .modules import (
    LinearizedModule,
    SimplicialAlgebra,
    SimplicialKModule,
    group_module,
    linearize,
    tensor_modules,
)
from .sets import (
    FinSimplicialSet,
    FunctionSimplicialSet,
    GridSimplicialSet,
    TabulatedSimplicialSet,
    cartesian_product,
    constant_set,
)


def constant(value, truncation: int = 4):
    """Constant simplicial object on a set size, FGAbelianGroup, FiniteRing or AugCommAlgebra."""
    from ..exact_linalg import FGAbelianGroup
    from ..rings import AugCommAlgebra, FiniteRing

    if isinstance(value, FGAbelianGroup):
        return constant_group(value, truncation)
    if isinstance(value, FiniteRing):
        return constant_group(value.additive_group(), truncation, ring=value, name=f"const({value.name})")
    if isinstance(value, AugCommAlgebra):
        return SimplicialAlgebra(value, 0, truncation)
    if isinstance(value, int):
        return constant_set(value, truncation)
    raise TypeError(f"no constant simplicial object for {type(value).__name__}")


__all__ = [
    "BisimplicialObject", "ChainComplex", "FinSimplicialSet", "FunctionSimplicialSet",
    "GridSimplicialSet", "IdentityReport", "LinearizedModule", "MatrixSetView",
    "SimplicialAbGroup", "SimplicialAlgebra", "SimplicialKModule", "TabulatedSimplicialSet",
    "Violation", "bar_bisimplicial", "cartesian_product", "constant", "constant_bisimplicial",
    "constant_group", "constant_set", "diagonal", "grid_bisimplicial", "group_module",
    "homology", "homotopy_groups", "linearize", "linearize_bisimplicial", "nondegenerate_basis",
    "normalized_chains", "tensor_modules", "unnormalized_chains", "verify_identities",
]
