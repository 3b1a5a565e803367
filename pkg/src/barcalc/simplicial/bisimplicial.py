"""Bisimplicial sets and modules, and their diagonals.

Level (p, q) has horizontal degree p and vertical degree q. Horizontal maps
change p, vertical maps change q.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..config import check_cap
from ..errors import IndexOutOfRange, TruncationTooLow
from ..exact_linalg import IntMatrix
from ..rings import FiniteRing
from .groups import SimplicialAbGroup
from .modules import SimplicialKModule
from .sets import (
    FinSimplicialSet,
    FunctionSimplicialSet,
    bar_degen_axis,
    bar_degen_matrix,
    bar_face_axis,
    bar_face_matrix,
    check_degen_index,
    check_face_index,
    decode_leaves,
    encode_leaves,
)


class BisimplicialObject:
    """Bisimplicial set (index-array maps) or module (IntMatrix maps).

    ``size`` returns the number of simplices or the rank at (p, q).
    """

    def __init__(self, kind: str, truncation: int, size: Callable, hface: Callable, vface: Callable,
                 hdegen: Callable, vdegen: Callable, *, modulus: int = 0, name: str = "X"):
        if kind not in ("set", "module"):
            raise ValueError(kind)
        if truncation < 0:
            raise TruncationTooLow("truncation must be nonnegative")
        self.kind = kind
        self.truncation = int(truncation)
        self.modulus = int(modulus)
        self.name = name
        self._fns = {"size": size, "hface": hface, "vface": vface, "hdegen": hdegen, "vdegen": vdegen}
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"BisimplicialObject({self.kind}, {self.name}, truncation={self.truncation})"

    def _get(self, key):
        try:
            return self._cache[key]
        except KeyError:
            name, *args = key
            val = self._fns[name](*args)
            if self.kind == "module" and isinstance(val, IntMatrix):
                val = val.mod(self.modulus)
            elif isinstance(val, np.ndarray):
                val = np.asarray(val, dtype=np.int64)
                val.flags.writeable = False
            self._cache[key] = val
            return val

    def _check(self, p, q):
        if not (0 <= p <= self.truncation and 0 <= q <= self.truncation):
            raise IndexOutOfRange(f"level {(p, q)} beyond truncation {self.truncation}")

    def size(self, p: int, q: int) -> int:
        self._check(p, q)
        return int(self._get(("size", p, q)))

    rank = size

    def hface(self, p: int, q: int, i: int):
        self._check(p, q)
        check_face_index(p, i, self.truncation)
        return self._get(("hface", p, q, i))

    def vface(self, p: int, q: int, j: int):
        self._check(p, q)
        check_face_index(q, j, self.truncation)
        return self._get(("vface", p, q, j))

    def hdegen(self, p: int, q: int, i: int):
        self._check(p, q)
        check_degen_index(p, i, self.truncation)
        return self._get(("hdegen", p, q, i))

    def vdegen(self, p: int, q: int, j: int):
        self._check(p, q)
        check_degen_index(q, j, self.truncation)
        return self._get(("vdegen", p, q, j))

    def transpose(self) -> BisimplicialObject:
        return BisimplicialObject(
            self.kind, self.truncation, lambda p, q: self.size(q, p),
            lambda p, q, i: self.vface(q, p, i), lambda p, q, j: self.hface(q, p, j),
            lambda p, q, i: self.vdegen(q, p, i), lambda p, q, j: self.hdegen(q, p, j),
            modulus=self.modulus, name=f"{self.name}^T",
        )


def _compose(kind, f, g):
    """f after g."""
    return f[g] if kind == "set" else f @ g


def diagonal(x: BisimplicialObject):
    """Level p is X_{p,p}; d_i = d_i^h d_i^v and s_i = s_i^h s_i^v."""
    if x.kind == "set":
        return FunctionSimplicialSet(
            x.truncation,
            lambda p: x.size(p, p),
            lambda p, i: x.hface(p, p - 1, i)[x.vface(p, p, i)],
            lambda p, i: x.hdegen(p, p + 1, i)[x.vdegen(p, p, i)],
            name=f"diag {x.name}",
        )
    return SimplicialKModule(
        x.modulus, x.truncation,
        lambda p: x.size(p, p),
        lambda p, i: x.hface(p, p - 1, i) @ x.vface(p, p, i),
        lambda p, i: x.hdegen(p, p + 1, i) @ x.vdegen(p, p, i),
        name=f"diag {x.name}",
    )


# ---------------------------------------------------------------------------
# constructors


class _GridLevels:
    """Leaf grids of shape (p,)*a + (q,)*b over a finite ring."""

    def __init__(self, ring: FiniteRing, a: int, b: int):
        self.ring, self.a, self.b = ring, a, b

    def length(self, p, q):
        return p**self.a * q**self.b

    def size(self, p, q):
        n = self.ring.size ** self.length(p, q)
        check_cap(f"bisimplicial level {(p, q)}", n)
        return n

    def leaves(self, p, q):
        flat = decode_leaves(np.arange(self.size(p, q)), self.ring.size, self.length(p, q))
        return flat.reshape((len(flat),) + (p,) * self.a + (q,) * self.b)

    def op(self, p, q, axes, fn):
        grid = self.leaves(p, q)
        for ax in axes:
            grid = fn(grid, ax)
        return encode_leaves(grid, self.ring.size)

    def h_axes(self):
        return range(1, self.a + 1)

    def v_axes(self):
        return range(self.a + 1, self.a + self.b + 1)


def grid_bisimplicial(ring: FiniteRing, a: int, b: int, truncation: int) -> BisimplicialObject:
    """B_h^a B_v^b S: horizontal nerve faces act on the first a axes, vertical ones on the last b.

    With a = 1 this is B_.(B^b S) levelwise; its diagonal is B^(a+b) S.
    """
    g = _GridLevels(ring, a, b)
    add, zero = ring.add, ring.zero

    def hdegen(p, q, i):
        g.size(p + 1, q)
        return g.op(p, q, g.h_axes(), lambda arr, ax: bar_degen_axis(arr, ax, i, zero))

    def vdegen(p, q, j):
        g.size(p, q + 1)
        return g.op(p, q, g.v_axes(), lambda arr, ax: bar_degen_axis(arr, ax, j, zero))

    return BisimplicialObject(
        "set", truncation, g.size,
        lambda p, q, i: g.op(p, q, g.h_axes(), lambda arr, ax: bar_face_axis(arr, ax, i, add)),
        lambda p, q, j: g.op(p, q, g.v_axes(), lambda arr, ax: bar_face_axis(arr, ax, j, add)),
        hdegen, vdegen, name=f"B_h^{a} B_v^{b}({ring.name})",
    )


def linearize_bisimplicial(x: BisimplicialObject, modulus: int) -> BisimplicialObject:
    if x.kind != "set":
        raise ValueError("expected a bisimplicial set")

    def wrap(fn, dp, dq):
        return lambda p, q, i: IntMatrix.from_index_map(fn(p, q, i), x.size(p + dp, q + dq))

    return BisimplicialObject(
        "module", x.truncation, x.size,
        wrap(x.hface, -1, 0), wrap(x.vface, 0, -1), wrap(x.hdegen, 1, 0), wrap(x.vdegen, 0, 1),
        modulus=modulus, name=f"k[{x.name}]",
    )


def bar_bisimplicial(m, modulus: int | None = None) -> BisimplicialObject:
    """Levelwise bar construction: level (p, q) is (M_q)^p.

    ``m`` is a SimplicialAbGroup (coordinates, reduced mod ``modulus``) or a
    finite simplicial set of ring elements given as a grid (use
    :func:`grid_bisimplicial` for that case).
    """
    if not isinstance(m, SimplicialAbGroup):
        raise TypeError("bar_bisimplicial expects a SimplicialAbGroup")
    mod = 0 if modulus is None else modulus

    def hdegen(p, q, i):
        return bar_degen_matrix(p, i).kron(IntMatrix.identity(m.exponent(q)))

    return BisimplicialObject(
        "module", m.truncation,
        lambda p, q: p * m.exponent(q),
        lambda p, q, i: bar_face_matrix(p, i).kron(IntMatrix.identity(m.exponent(q))),
        lambda p, q, j: IntMatrix.identity(p).kron(m.face(q, j)),
        hdegen,
        lambda p, q, j: IntMatrix.identity(p).kron(m.degen(q, j)),
        modulus=mod, name=f"B.({m.name}) (x) Z/{mod}",
    )


def constant_bisimplicial(y, direction: str = "vertical") -> BisimplicialObject:
    """Bisimplicial object constant in ``direction`` with value the simplicial object y.

    ``direction="vertical"`` means level (p, q) = Y_p with identity vertical maps.
    """
    is_set = isinstance(y, FinSimplicialSet)
    kind = "set" if is_set else "module"
    size = y.size if is_set else y.rank

    def ident(n):
        return np.arange(n) if is_set else IntMatrix.identity(n)

    if direction == "vertical":
        obj = BisimplicialObject(
            kind, y.truncation, lambda p, q: size(p),
            lambda p, q, i: y.face(p, i), lambda p, q, j: ident(size(p)),
            lambda p, q, i: y.degen(p, i), lambda p, q, j: ident(size(p)),
            modulus=getattr(y, "modulus", 0), name=f"const_v({y.name})",
        )
        return obj
    if direction == "horizontal":
        return constant_bisimplicial(y, "vertical").transpose()
    raise ValueError("direction must be 'vertical' or 'horizontal'")
