"""Finite simplicial sets with index-array structure maps.

A p-simplex is an integer in ``range(size(p))``; faces and degeneracies are
int64 index arrays, so composing maps is fancy indexing.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..config import check_cap
from ..errors import IndexOutOfRange, TruncationMismatch, TruncationTooLow
from ..exact_linalg import IntMatrix
from ..rings import FiniteRing

_CHUNK = 1 << 18


def check_face_index(p: int, i: int, truncation: int) -> None:
    if not 1 <= p <= truncation:
        raise IndexOutOfRange(f"no faces at level {p} (truncation {truncation})")
    if not 0 <= i <= p:
        raise IndexOutOfRange(f"face index {i} out of range at level {p}")


def check_degen_index(p: int, i: int, truncation: int) -> None:
    if not 0 <= p < truncation:
        raise IndexOutOfRange(f"no degeneracies from level {p} (truncation {truncation})")
    if not 0 <= i <= p:
        raise IndexOutOfRange(f"degeneracy index {i} out of range at level {p}")


# ---------------------------------------------------------------------------
# bar patterns in the cartesian case


def bar_face_matrix(p: int, i: int) -> IntMatrix:
    """d_i : G^p -> G^(p-1) of the nerve, as a 0/1 matrix."""
    if p < 1 or not 0 <= i <= p:
        raise IndexOutOfRange(f"bar face d_{i} at level {p}")
    rows, cols = [], []
    for k in range(p - 1):
        if i == 0:
            src = [k + 1]
        elif i == p or k < i - 1:
            src = [k]
        elif k == i - 1:
            src = [k, k + 1]
        else:
            src = [k + 1]
        for s in src:
            rows.append(k)
            cols.append(s)
    return IntMatrix(p - 1, p, rows, cols, np.ones(len(rows), dtype=np.int64))


def bar_degen_matrix(p: int, i: int) -> IntMatrix:
    """s_i : G^p -> G^(p+1) inserting 0 at (0-based) position i."""
    if p < 0 or not 0 <= i <= p:
        raise IndexOutOfRange(f"bar degeneracy s_{i} at level {p}")
    rows = [k if k < i else k + 1 for k in range(p)]
    return IntMatrix(p + 1, p, rows, list(range(p)), np.ones(p, dtype=np.int64))


def bar_face_axis(arr: np.ndarray, axis: int, i: int, add: np.ndarray | None) -> np.ndarray:
    """Apply the nerve face d_i along one axis of a leaf array.

    ``add`` is the addition table or a callable on leaf arrays (None means +).
    """
    p = arr.shape[axis]
    if i == 0:
        return np.take(arr, np.arange(1, p), axis=axis)
    if i == p:
        return np.take(arr, np.arange(0, p - 1), axis=axis)
    a = np.take(arr, [i - 1], axis=axis)
    b = np.take(arr, [i], axis=axis)
    if add is None:
        merged = a + b
    else:
        merged = (add(a, b) if callable(add) else add[a, b]).astype(arr.dtype, copy=False)
    return np.concatenate(
        [np.take(arr, np.arange(0, i - 1), axis=axis), merged, np.take(arr, np.arange(i + 1, p), axis=axis)],
        axis=axis,
    )


def bar_degen_axis(arr: np.ndarray, axis: int, i: int, zero: int) -> np.ndarray:
    shape = list(arr.shape)
    shape[axis] = 1
    z = np.full(shape, zero, dtype=arr.dtype)
    return np.concatenate(
        [np.take(arr, np.arange(0, i), axis=axis), z, np.take(arr, np.arange(i, arr.shape[axis]), axis=axis)],
        axis=axis,
    )


# ---------------------------------------------------------------------------


class FinSimplicialSet:
    """Truncated simplicial set with memoized levels.

    Subclasses implement ``_size``, ``_face`` and ``_degen``; the cache is
    idempotent (recomputing a level yields an identical array), so concurrent
    fills are harmless.
    """

    kind = "set"

    def __init__(self, truncation: int, name: str = "X"):
        if truncation < 0:
            raise TruncationTooLow("truncation must be nonnegative")
        self.truncation = int(truncation)
        self.name = name
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}, truncation={self.truncation})"

    def _memo(self, key, fn):
        try:
            return self._cache[key]
        except KeyError:
            val = fn()
            if isinstance(val, np.ndarray):
                val.flags.writeable = False
            self._cache[key] = val
            return val

    def size(self, p: int) -> int:
        if not 0 <= p <= self.truncation:
            raise IndexOutOfRange(f"level {p} beyond truncation {self.truncation}")
        return self._memo(("size", p), lambda: int(self._size(p)))

    def face(self, p: int, i: int) -> np.ndarray:
        check_face_index(p, i, self.truncation)
        return self._memo(("face", p, i), lambda: np.asarray(self._face(p, i), dtype=np.int64))

    def degen(self, p: int, i: int) -> np.ndarray:
        check_degen_index(p, i, self.truncation)
        return self._memo(("degen", p, i), lambda: np.asarray(self._degen(p, i), dtype=np.int64))

    def degenerate_mask(self, p: int) -> np.ndarray:
        """x is degenerate iff x == s_i d_i x for some i (direct test)."""
        def compute():
            mask = np.zeros(self.size(p), dtype=bool)
            for i in range(p):
                mask |= self.degen(p - 1, i)[self.face(p, i)] == np.arange(self.size(p))
            return mask
        return self._memo(("degmask", p), compute)

    def truncate(self, t: int) -> FinSimplicialSet:
        if t > self.truncation:
            raise TruncationTooLow(f"cannot extend truncation {self.truncation} to {t}")
        return TabulatedSimplicialSet.from_set(self, t)

    # subclass hooks
    def _size(self, p):
        raise NotImplementedError

    def _face(self, p, i):
        raise NotImplementedError

    def _degen(self, p, i):
        raise NotImplementedError


class TabulatedSimplicialSet(FinSimplicialSet):
    """Simplicial set stored as explicit arrays (used for corruption and round trips)."""

    def __init__(self, sizes, faces: dict, degens: dict, name: str = "X"):
        super().__init__(len(sizes) - 1, name)
        self._sizes = [int(s) for s in sizes]
        self._faces = {k: np.asarray(v, dtype=np.int64) for k, v in faces.items()}
        self._degens = {k: np.asarray(v, dtype=np.int64) for k, v in degens.items()}

    @classmethod
    def from_set(cls, x: FinSimplicialSet, truncation: int | None = None) -> TabulatedSimplicialSet:
        t = x.truncation if truncation is None else truncation
        sizes = [x.size(p) for p in range(t + 1)]
        faces = {(p, i): x.face(p, i) for p in range(1, t + 1) for i in range(p + 1)}
        degens = {(p, i): x.degen(p, i) for p in range(t) for i in range(p + 1)}
        return cls(sizes, faces, degens, x.name)

    def with_face(self, p: int, i: int, values) -> TabulatedSimplicialSet:
        faces = dict(self._faces)
        faces[(p, i)] = np.asarray(values, dtype=np.int64)
        return TabulatedSimplicialSet(self._sizes, faces, self._degens, self.name + "*")

    def _size(self, p):
        return self._sizes[p]

    def _face(self, p, i):
        return self._faces[(p, i)]

    def _degen(self, p, i):
        return self._degens[(p, i)]


class FunctionSimplicialSet(FinSimplicialSet):
    def __init__(self, truncation: int, size: Callable, face: Callable, degen: Callable, name: str = "X"):
        super().__init__(truncation, name)
        self._sz, self._fc, self._dg = size, face, degen

    def _size(self, p):
        return self._sz(p)

    def _face(self, p, i):
        return self._fc(p, i)

    def _degen(self, p, i):
        return self._dg(p, i)


def constant_set(n_points: int, truncation: int, name: str | None = None) -> FinSimplicialSet:
    """Every level is {0, .., n_points-1} and every structure map is the identity."""
    ident = lambda p, i: np.arange(n_points)  # noqa: E731
    return FunctionSimplicialSet(truncation, lambda p: n_points, ident, ident, name or f"const[{n_points}]")


def cartesian_product(x: FinSimplicialSet, y: FinSimplicialSet) -> FinSimplicialSet:
    """Levelwise product; the pair (a, b) is encoded as a * |Y_p| + b."""
    if x.truncation != y.truncation:
        raise TruncationMismatch(f"truncations differ: {x.truncation} vs {y.truncation}")

    def size(p):
        n = x.size(p) * y.size(p)
        check_cap(f"product level {p}", n)
        return n

    def pair_map(fx, fy, ny_src, ny_dst):
        a = np.repeat(fx, ny_src)
        b = np.tile(fy, len(fx))
        return a * ny_dst + b

    def face(p, i):
        return pair_map(x.face(p, i), y.face(p, i), y.size(p), y.size(p - 1))

    def degen(p, i):
        return pair_map(x.degen(p, i), y.degen(p, i), y.size(p), y.size(p + 1))

    return FunctionSimplicialSet(x.truncation, size, face, degen, f"{x.name} x {y.name}")


# ---------------------------------------------------------------------------
# iterated bar of a finite ring, leaf-array presentation


def leaf_dtype(q: int):
    return np.uint8 if q <= 256 else (np.uint16 if q <= 65536 else np.int64)


def encode_leaves(leaves: np.ndarray, q: int) -> np.ndarray:
    """Index of each row of ``leaves`` in the lexicographic enumeration of [q]^L."""
    flat = leaves.reshape(leaves.shape[0], -1).astype(np.int64)
    out = np.zeros(flat.shape[0], dtype=np.int64)
    for j in range(flat.shape[1]):
        out = out * q + flat[:, j]
    return out


def decode_leaves(idx: np.ndarray, q: int, length: int) -> np.ndarray:
    idx = np.asarray(idx, dtype=np.int64)
    out = np.empty((len(idx), length), dtype=leaf_dtype(q))
    rest = idx.copy()
    for j in range(length - 1, -1, -1):
        out[:, j] = rest % q
        rest //= q
    return out


class GridSimplicialSet(FinSimplicialSet):
    """B^n S for a finite ring S: level p is S^(p^n) stored as (p,)*n leaf grids.

    Index paths put the outermost bar level first; simplices are numbered
    lexicographically on their flattened leaves. Faces apply the nerve face
    along every axis and degeneracies insert a zero slice along every axis.
    """

    def __init__(self, ring: FiniteRing, n: int, truncation: int):
        super().__init__(truncation, f"B^{n}({ring.name})")
        if n < 0:
            raise IndexOutOfRange("n must be nonnegative")
        self.ring = ring
        self.n = n

    def leaf_count(self, p: int) -> int:
        return p**self.n

    def _size(self, p):
        size = self.ring.size ** self.leaf_count(p)
        check_cap(f"level {p} of {self.name}", size)
        return size

    def leaves(self, p: int, idx=None) -> np.ndarray:
        """Leaf grids of the given simplices (all of level p by default), shape (k,) + (p,)*n."""
        if idx is None:
            idx = np.arange(self.size(p))
        flat = decode_leaves(idx, self.ring.size, self.leaf_count(p))
        return flat.reshape((len(flat),) + (p,) * self.n)

    def face_leaves(self, grid: np.ndarray, i: int) -> np.ndarray:
        for ax in range(1, self.n + 1):
            grid = bar_face_axis(grid, ax, i, self.ring.add)
        return grid

    def degen_leaves(self, grid: np.ndarray, i: int) -> np.ndarray:
        for ax in range(1, self.n + 1):
            grid = bar_degen_axis(grid, ax, i, self.ring.zero)
        return grid

    def _map(self, p, op):
        total = self.size(p)
        out = np.empty(total, dtype=np.int64)
        for lo in range(0, total, _CHUNK):
            idx = np.arange(lo, min(total, lo + _CHUNK))
            out[lo : lo + len(idx)] = encode_leaves(op(self.leaves(p, idx)), self.ring.size)
        return out

    def _face(self, p, i):
        if self.n == 0:
            return np.arange(self.size(p))
        return self._map(p, lambda g: self.face_leaves(g, i))

    def _degen(self, p, i):
        if self.n == 0:
            return np.arange(self.size(p))
        self.size(p + 1)
        return self._map(p, lambda g: self.degen_leaves(g, i))


def grid_face_matrix(n: int, p: int, i: int) -> IntMatrix:
    """Face d_i of B^n on leaf coordinates: the nerve face applied along every axis."""
    out = IntMatrix.identity(1)
    face = bar_face_matrix(p, i)
    for _ in range(n):
        out = out.kron(face)
    return out


def grid_degen_matrix(n: int, p: int, i: int) -> IntMatrix:
    out = IntMatrix.identity(1)
    degen = bar_degen_matrix(p, i)
    for _ in range(n):
        out = out.kron(degen)
    return out
