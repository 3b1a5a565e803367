"""Simplicial modules over Z or Z/m with sparse structure matrices."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..config import check_cap
from ..errors import IndexOutOfRange, TruncationMismatch, TruncationTooLow
from ..exact_linalg import IntMatrix
from ..rings import AugCommAlgebra
from .groups import SimplicialAbGroup
from .sets import (
    FinSimplicialSet,
    check_degen_index,
    check_face_index,
    grid_degen_matrix,
    grid_face_matrix,
)
from .terms import TermState, pattern_map


class SimplicialKModule:
    """Levelwise free module of rank ``rank(p)`` over Z/modulus (modulus 0: Z).

    Matrices are stored reduced mod ``modulus``.
    """

    kind = "module"

    def __init__(self, modulus: int, truncation: int, rank: Callable[[int], int],
                 face: Callable[[int, int], IntMatrix], degen: Callable[[int, int], IntMatrix],
                 name: str = "M"):
        if truncation < 0:
            raise TruncationTooLow("truncation must be nonnegative")
        self.modulus = int(modulus)
        self.truncation = int(truncation)
        self.name = name
        self._rk, self._fc, self._dg = rank, face, degen
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}, modulus={self.modulus}, truncation={self.truncation})"

    def _memo(self, key, fn):
        try:
            return self._cache[key]
        except KeyError:
            val = fn()
            self._cache[key] = val
            return val

    def rank(self, p: int) -> int:
        if not 0 <= p <= self.truncation:
            raise IndexOutOfRange(f"level {p} beyond truncation {self.truncation}")
        return self._memo(("rank", p), lambda: int(self._rk(p)))

    def face(self, p: int, i: int) -> IntMatrix:
        check_face_index(p, i, self.truncation)
        return self._memo(("face", p, i), lambda: self._fc(p, i).mod(self.modulus))

    def degen(self, p: int, i: int) -> IntMatrix:
        check_degen_index(p, i, self.truncation)
        return self._memo(("degen", p, i), lambda: self._dg(p, i).mod(self.modulus))

    def comultiplication(self, p: int) -> IntMatrix | None:
        """Level-p coproduct as a (rank^2 x rank) matrix, when the module carries one."""
        return None

    def counit(self, p: int) -> IntMatrix | None:
        return None


class LinearizedModule(SimplicialKModule):
    """k[X] for a finite simplicial set X, with the coalgebra x -> x (x) x, x -> 1."""

    def __init__(self, x: FinSimplicialSet, modulus: int):
        self.set = x
        super().__init__(
            modulus,
            x.truncation,
            x.size,
            lambda p, i: IntMatrix.from_index_map(x.face(p, i), x.size(p - 1)),
            lambda p, i: IntMatrix.from_index_map(x.degen(p, i), x.size(p + 1)),
            name=f"k[{x.name}]",
        )

    def comultiplication(self, p: int) -> IntMatrix:
        n = self.rank(p)
        check_cap(f"coproduct at level {p}", n)
        idx = np.arange(n)
        return IntMatrix.from_index_map(idx * n + idx, n * n)

    def counit(self, p: int) -> IntMatrix:
        n = self.rank(p)
        return IntMatrix(1, n, np.zeros(n), np.arange(n), np.ones(n, dtype=np.int64))


def linearize(x, modulus: int) -> LinearizedModule:
    """Free module on a finite simplicial set (a SimplicialAbGroup is enumerated first)."""
    if isinstance(x, SimplicialAbGroup):
        x = x.as_set()
    return LinearizedModule(x, modulus)


def group_module(m: SimplicialAbGroup, modulus: int) -> SimplicialKModule:
    """The coordinate module Z^N_p (x) Z/modulus carrying the integer structure matrices of m."""
    return SimplicialKModule(modulus, m.truncation, m.exponent, m.face, m.degen, name=f"{m.name} (x) Z/{modulus}")


def tensor_modules(x: SimplicialKModule, y: SimplicialKModule) -> SimplicialKModule:
    """Levelwise tensor product; the basis pair (a, b) has index a * rank_Y + b."""
    if x.truncation != y.truncation:
        raise TruncationMismatch("truncations differ")
    if x.modulus != y.modulus:
        raise TruncationMismatch("base rings differ")

    def rank(p):
        r = x.rank(p) * y.rank(p)
        check_cap(f"tensor level {p}", r)
        return r

    return SimplicialKModule(
        x.modulus, x.truncation, rank,
        lambda p, i: x.face(p, i).kron(y.face(p, i)),
        lambda p, i: x.degen(p, i).kron(y.degen(p, i)),
        name=f"{x.name} (x) {y.name}",
    )


class SimplicialAlgebra(SimplicialKModule):
    """B^n A for an augmented commutative algebra A, as a simplicial module.

    Level p is A^(x p^n) with basis the p^n-fold tensors of basis vectors of A
    (leaf order as for the nerve). Each structure map is the multiplicative
    reading of the corresponding 0/1 coordinate pattern of B^n Z: sums become
    products, inserted zeros become units and dropped coordinates go through
    the augmentation. ``coalgebra`` optionally supplies (delta, counit)
    tensors making A a bialgebra; levels then carry the tensor coalgebra.
    """

    def __init__(self, algebra: AugCommAlgebra, n: int, truncation: int,
                 coalgebra: tuple[np.ndarray, np.ndarray] | None = None):
        if n < 0:
            raise IndexOutOfRange("n must be nonnegative")
        self.algebra = algebra
        self.n = n
        self.coalgebra = coalgebra
        d = algebra.dim
        self._unit_vec = np.zeros(d, dtype=np.int64)
        self._unit_vec[algebra.unit] = 1
        super().__init__(algebra.modulus, truncation, self._rank, self._face, self._degen,
                         name=f"B^{n}({algebra.name})")

    def leaf_count(self, p: int) -> int:
        return p**self.n

    def _rank(self, p):
        r = self.algebra.dim ** self.leaf_count(p)
        check_cap(f"level {p} of {self.name}", r)
        return r

    def _pattern(self, pat: IntMatrix) -> IntMatrix:
        a = self.algebra
        return pattern_map(a.dim, a.modulus, pat, a.mul, self._unit_vec, a.augmentation)

    def _face(self, p, i):
        return self._pattern(grid_face_matrix(self.n, p, i))

    def _degen(self, p, i):
        self.rank(p + 1)
        return self._pattern(grid_degen_matrix(self.n, p, i))

    # levelwise algebra structure
    def product(self, p: int) -> IntMatrix:
        """Leafwise product A^(x L) (x) A^(x L) -> A^(x L); input (x, y) has index x * rank + y."""
        L = self.leaf_count(p)
        check_cap(f"product at level {p}", self.rank(p) ** 2)
        eye = IntMatrix.identity(L)
        return self._memo(("prod", p), lambda: self._pattern(IntMatrix.hstack([eye, eye])))

    def unit(self, p: int) -> IntMatrix:
        return self._pattern(IntMatrix(self.leaf_count(p), 0))

    def augmentation(self, p: int) -> IntMatrix:
        return self._pattern(IntMatrix(0, self.leaf_count(p)))

    def comultiplication(self, p: int) -> IntMatrix | None:
        if self.coalgebra is None:
            return None
        delta, _ = self.coalgebra
        L = self.leaf_count(p)
        st = TermState.basis(self.algebra.dim, self.modulus, L)
        firsts, seconds = [], []
        for c in range(L):
            a, b = st.apply([c], delta, 2)
            firsts.append(a)
            seconds.append(b)
        return st.to_matrix(firsts + seconds, self.rank(p))

    def counit(self, p: int) -> IntMatrix | None:
        if self.coalgebra is None:
            return None
        _, eps = self.coalgebra
        L = self.leaf_count(p)
        st = TermState.basis(self.algebra.dim, self.modulus, L)
        for c in range(L):
            st.apply([c], eps, 0)
        return st.to_matrix([], self.rank(p))
