"""Chain complexes, Moore normalization, homotopy and homology."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sympy import isprime

from ..errors import CompositionNotZero, InvalidInput, ShapeMismatch, TruncationTooLow
from ..exact_linalg import FGAbelianGroup, FpMatrix, IntMatrix, homology_mod, homology_z, rank_fp
from ..rings import Coeff
from .groups import SimplicialAbGroup
from .modules import SimplicialKModule, linearize
from .sets import FinSimplicialSet


def _exponent(g: FGAbelianGroup) -> int:
    if g.free_rank:
        return 0
    return g.torsion[-1] if g.torsion else 1


@dataclass
class ChainComplex:
    """Free Z-complex C_0 <- C_1 <- ... <- C_top, tensored with ``coefficients``.

    ``differentials[i]`` maps degree i to degree i-1 (``differentials[0]`` is
    the 0 x rank_0 matrix). ``complete`` marks complexes that vanish above
    ``top``, so that H_top is determined.
    """

    ranks: list[int]
    differentials: list[IntMatrix]
    coefficients: FGAbelianGroup = field(default_factory=lambda: FGAbelianGroup(1))
    complete: bool = False
    name: str = "C"

    def __post_init__(self):
        self.ranks = [int(r) for r in self.ranks]
        if len(self.differentials) != len(self.ranks):
            raise ShapeMismatch("need one differential per degree")
        for i, d in enumerate(self.differentials):
            want = (self.ranks[i - 1] if i else 0, self.ranks[i])
            if d.shape != want:
                raise ShapeMismatch(f"differential {i} has shape {d.shape}, expected {want}")
        e = _exponent(self.coefficients)
        if e != 1:
            for i in range(2, len(self.ranks)):
                if not (self.differentials[i - 1] @ self.differentials[i]).mod(e).is_zero():
                    raise CompositionNotZero(f"d_{i - 1} d_{i} != 0 in {self.name}")

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def d(self, i: int) -> IntMatrix:
        """Differential out of degree i; zero above the stored range for complete complexes."""
        if i <= self.top:
            return self.differentials[i]
        if not self.complete:
            raise TruncationTooLow(f"degree {i} beyond top {self.top} of {self.name}")
        return IntMatrix(self.ranks[i - 1] if i - 1 <= self.top else 0, 0)

    def homology(self, i: int) -> FGAbelianGroup:
        if i < 0:
            return FGAbelianGroup()
        if i > self.top:
            if self.complete:
                return FGAbelianGroup()
            raise TruncationTooLow(f"H_{i} needs degree {i + 1}; {self.name} stops at {self.top}")
        d_out, d_in = self.d(i), self.d(i + 1)
        out = FGAbelianGroup()
        for m in self.coefficients.cyclic_factors():
            if m == 0:
                out = out + homology_z(d_in, d_out)
            elif isprime(m):
                dim = self.ranks[i] - _rank(d_out, m) - _rank(d_in, m)
                out = out + FGAbelianGroup.from_cyclic(0, [m] * dim)
            else:
                out = out + homology_mod(d_in, d_out, m)
        return out

    def homology_list(self, i_max: int) -> list[FGAbelianGroup]:
        return [self.homology(i) for i in range(i_max + 1)]

    def betti_fp(self, p: int, i_max: int | None = None) -> list[int]:
        """dim H_i(C (x) F_p); coefficients must be Z or Z/p^k-free-compatible (Z or Z/p)."""
        if self.coefficients not in (FGAbelianGroup(1), FGAbelianGroup.cyclic(p)):
            raise InvalidInput(f"F_{p} Betti numbers need coefficients Z or Z/{p}")
        i_max = (self.top if self.complete else self.top - 1) if i_max is None else i_max
        if i_max >= self.top and not self.complete:
            raise TruncationTooLow(f"H_{i_max} needs degree {i_max + 1}")
        ranks = [_rank(self.d(i), p) for i in range(i_max + 2)]
        return [self.ranks[i] - ranks[i] - ranks[i + 1] for i in range(i_max + 1)]

    def euler_ranks(self) -> list[int]:
        return list(self.ranks)


def _rank(m: IntMatrix, p: int) -> int:
    if m.nnz == 0:
        return 0
    return rank_fp(FpMatrix.from_int_matrix(m, p))


def _coefficients_of(m) -> FGAbelianGroup:
    if isinstance(m, SimplicialAbGroup):
        return m.group
    return FGAbelianGroup.cyclic(m.modulus)


def _rank_of(m, p):
    return m.exponent(p) if isinstance(m, SimplicialAbGroup) else m.rank(p)


def nondegenerate_basis(m, p: int) -> np.ndarray:
    """Basis indices at level p outside the images of s_0 .. s_(p-1).

    Requires degeneracies that send basis vectors to basis vectors, so the
    degenerate part is spanned by a sub-basis.
    """
    if isinstance(m, FinSimplicialSet):
        return np.flatnonzero(~m.degenerate_mask(p))
    hit = np.zeros(_rank_of(m, p), dtype=bool)
    for i in range(p):
        s = m.degen(p - 1, i)
        if s.nnz != s.cols or len(np.unique(s.col)) != s.cols or any(int(v) != 1 for v in s.val):
            raise InvalidInput(f"degeneracy s_{i} at level {p - 1} does not map basis to basis")
        hit[s.row] = True
    return np.flatnonzero(~hit)


def _alternating(m, p: int) -> IntMatrix:
    mats = [m.face(p, i) for i in range(p + 1)]
    rows = np.concatenate([f.row for f in mats])
    cols = np.concatenate([f.col for f in mats])
    vals = np.concatenate([f.val * (-1 if i % 2 else 1) for i, f in enumerate(mats)])
    return IntMatrix(mats[0].rows, mats[0].cols, rows, cols, vals)


def chains_to(m, top: int, normalized: bool = True) -> ChainComplex:
    """Normalized (or unnormalized) chains in degrees 0..top; needs levels up to top only."""
    return _chains(m, top, normalized)


def _chains(m, top: int, normalized: bool) -> ChainComplex:
    if isinstance(m, FinSimplicialSet):
        raise TypeError("linearize a simplicial set before taking chains")
    if top > m.truncation:
        raise TruncationTooLow(f"degree {top} needs level {top}; truncation is {m.truncation}")
    if normalized:
        basis = [nondegenerate_basis(m, p) for p in range(top + 1)]
    else:
        basis = [np.arange(_rank_of(m, p)) for p in range(top + 1)]
    diffs = [IntMatrix(0, len(basis[0]))]
    for p in range(1, top + 1):
        diffs.append(_alternating(m, p).take(basis[p - 1], basis[p]))
    kind = "N" if normalized else "C"
    return ChainComplex([len(b) for b in basis], diffs, _coefficients_of(m), name=f"{kind}({m.name})")


def normalized_chains(m, up_to: int) -> ChainComplex:
    """Moore complex N(M) in degrees 0..up_to (requires truncation >= up_to + 1)."""
    if m.truncation < up_to + 1:
        raise TruncationTooLow(f"normalized chains to degree {up_to} need truncation {up_to + 1}")
    return _chains(m, up_to, True)


def unnormalized_chains(m, up_to: int) -> ChainComplex:
    if m.truncation < up_to + 1:
        raise TruncationTooLow(f"chains to degree {up_to} need truncation {up_to + 1}")
    return _chains(m, up_to, False)


def homotopy_groups(m, i_max: int) -> list[FGAbelianGroup]:
    """pi_0 .. pi_(i_max) as homology of the Moore complex with G coefficients."""
    if m.truncation < i_max + 1:
        raise TruncationTooLow(f"pi_{i_max} needs truncation >= {i_max + 1}")
    return _chains(m, i_max + 1, True).homology_list(i_max)


def homology(x, coeff, i_max: int, normalized: bool = True) -> list[FGAbelianGroup]:
    """H_0 .. H_(i_max) of a finite simplicial set with coefficients Z, Z/m or F_p."""
    c = coeff if isinstance(coeff, Coeff) else Coeff.parse(str(coeff)) if isinstance(coeff, str) else Coeff(int(coeff), "")
    mod = linearize(x, c.modulus) if not isinstance(x, SimplicialKModule) else x
    if mod.truncation < i_max + 1:
        raise TruncationTooLow(f"H_{i_max} needs truncation >= {i_max + 1}")
    return _chains(mod, i_max + 1, normalized).homology_list(i_max)
