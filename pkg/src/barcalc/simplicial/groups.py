"""Simplicial abelian groups presented by integer coordinate matrices."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..config import check_cap
from ..errors import IndexOutOfRange, InfiniteLevel, TruncationTooLow
from ..exact_linalg import FGAbelianGroup, IntMatrix
from ..rings import FiniteRing
from .sets import FinSimplicialSet, check_degen_index, check_face_index, decode_leaves, encode_leaves


class SimplicialAbGroup:
    """Level p is G^exponent(p); faces and degeneracies are integer matrices.

    Because every structure map is built from sums, zeros and projections, it
    acts on G-coordinates through an integer matrix, whatever G is. ``ring``
    (optional) is a finite ring whose additive group is G; it is what the set
    view enumerates.
    """

    kind = "group"

    def __init__(
        self,
        group: FGAbelianGroup,
        truncation: int,
        exponent: Callable[[int], int],
        face: Callable[[int, int], IntMatrix],
        degen: Callable[[int, int], IntMatrix],
        *,
        ring: FiniteRing | None = None,
        name: str = "M",
        bar_depth: int | None = None,
    ):
        if truncation < 0:
            raise TruncationTooLow("truncation must be nonnegative")
        self.group = group
        self.truncation = int(truncation)
        self.ring = ring
        self.name = name
        self.bar_depth = bar_depth
        self._exp, self._fc, self._dg = exponent, face, degen
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"SimplicialAbGroup({self.name}, G={self.group}, truncation={self.truncation})"

    def _memo(self, key, fn):
        try:
            return self._cache[key]
        except KeyError:
            val = fn()
            self._cache[key] = val
            return val

    def exponent(self, p: int) -> int:
        if not 0 <= p <= self.truncation:
            raise IndexOutOfRange(f"level {p} beyond truncation {self.truncation}")
        return self._memo(("exp", p), lambda: int(self._exp(p)))

    def face(self, p: int, i: int) -> IntMatrix:
        check_face_index(p, i, self.truncation)
        return self._memo(("face", p, i), lambda: self._fc(p, i))

    def degen(self, p: int, i: int) -> IntMatrix:
        check_degen_index(p, i, self.truncation)
        return self._memo(("degen", p, i), lambda: self._dg(p, i))

    # rank() lets chain-level code treat coordinates as a basis
    def rank(self, p: int) -> int:
        return self.exponent(p)

    def truncate(self, t: int) -> SimplicialAbGroup:
        if t > self.truncation:
            raise TruncationTooLow(f"cannot extend truncation {self.truncation} to {t}")
        return SimplicialAbGroup(self.group, t, self.exponent, self.face, self.degen,
                                 ring=self.ring, name=self.name, bar_depth=self.bar_depth)

    def with_truncation(self, t: int) -> SimplicialAbGroup:
        """Same construction at another truncation (valid for lazily defined groups)."""
        return SimplicialAbGroup(self.group, t, self._exp, self._fc, self._dg,
                                 ring=self.ring, name=self.name, bar_depth=self.bar_depth)

    def as_set(self) -> FinSimplicialSet:
        if self.ring is None or not self.group.is_finite():
            raise InfiniteLevel(f"{self.name} has no finite set view (group {self.group})")
        if self.bar_depth is not None:
            from .sets import GridSimplicialSet

            return GridSimplicialSet(self.ring, self.bar_depth, self.truncation)
        return MatrixSetView(self)


class MatrixSetView(FinSimplicialSet):
    """Underlying simplicial set of a SimplicialAbGroup, enumerating G^N lexicographically."""

    def __init__(self, m: SimplicialAbGroup):
        super().__init__(m.truncation, m.name)
        self.m = m
        self.ring = m.ring

    def _size(self, p):
        size = self.ring.size ** self.m.exponent(p)
        check_cap(f"level {p} of {self.name}", size)
        return size

    def _apply(self, mat: IntMatrix, p: int, q_len: int) -> np.ndarray:
        ring = self.ring
        size = self.size(p)
        leaves = decode_leaves(np.arange(size), ring.size, self.m.exponent(p)).astype(np.int64)
        out = np.full((size, q_len), ring.zero, dtype=np.int64)
        mult = {}
        for r, c, v in mat.triplets():
            if v not in mult:
                mult[v] = ring.times(v)
            out[:, r] = ring.add[out[:, r], mult[v][leaves[:, c]]]
        return encode_leaves(out, ring.size)

    def _face(self, p, i):
        return self._apply(self.m.face(p, i), p, self.m.exponent(p - 1))

    def _degen(self, p, i):
        self.size(p + 1)
        return self._apply(self.m.degen(p, i), p, self.m.exponent(p + 1))


def constant_group(group: FGAbelianGroup, truncation: int, ring: FiniteRing | None = None,
                   name: str | None = None) -> SimplicialAbGroup:
    """The constant simplicial group: exponent 1 and identity structure maps."""
    one = IntMatrix.identity(1)
    return SimplicialAbGroup(group, truncation, lambda p: 1, lambda p, i: one, lambda p, i: one,
                             ring=ring, name=name or f"const({group})", bar_depth=0)


def is_coordinate_injection(mat: IntMatrix) -> bool:
    """Every column is a standard basis vector and no two columns coincide."""
    if mat.nnz != mat.cols:
        return False
    return (
        np.array_equal(np.sort(mat.col), np.arange(mat.cols))
        and len(np.unique(mat.row)) == mat.cols
        and all(int(v) == 1 for v in mat.val)
    )
