"""Exact linear algebra over Z and prime fields.

Integer matrices are stored as sparse triplets with arbitrary-precision
values; Smith normal form runs on dense Python integer lists. Ranks over F_p
use blocked dense elimination on the short side of the matrix, with the
reduction of each block against the current echelon basis done as a single
floating point product (exact while the partial sums stay below 2**53).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from sympy import factorint, isprime

from .errors import CompositionNotZero, ParseError, ShapeMismatch

__all__ = [
    "IntMatrix",
    "FpMatrix",
    "SNFResult",
    "FGAbelianGroup",
    "snf",
    "homology_z",
    "homology_mod",
    "homology_fp_dim",
    "rank_fp",
    "rref_mod_p",
    "nullspace_mod_p",
    "solve_mod_p",
]

_DENSE_CUTOFF = 64


def _obj(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype == object:
        return np.array([int(x) for x in arr.ravel()], dtype=object)
    return arr.astype(np.int64).astype(object)


class IntMatrix:
    """Sparse integer matrix in canonical triplet form.

    Triplets are sorted by (row, col), carry nonzero values and never repeat a
    position. Values are Python integers, so nothing overflows.
    """

    __slots__ = ("rows", "cols", "row", "col", "val")

    def __init__(self, rows: int, cols: int, row=(), col=(), val=()):
        if rows < 0 or cols < 0:
            raise ShapeMismatch(f"negative shape {(rows, cols)}")
        r = np.asarray(row, dtype=np.int64).ravel()
        c = np.asarray(col, dtype=np.int64).ravel()
        v = _obj(val) if len(r) else np.zeros(0, dtype=object)
        if not (len(r) == len(c) == len(v)):
            raise ShapeMismatch("triplet arrays differ in length")
        if len(r):
            if r.min() < 0 or r.max() >= rows or c.min() < 0 or c.max() >= cols:
                raise ShapeMismatch(f"triplet index out of range for shape {(rows, cols)}")
            order = np.lexsort((c, r))
            r, c, v = r[order], c[order], v[order]
            key = r * cols + c
            start = np.flatnonzero(np.concatenate(([True], key[1:] != key[:-1])))
            if len(start) < len(key):
                v = np.add.reduceat(v, start)
                r, c = r[start], c[start]
            keep = np.array([x != 0 for x in v], dtype=bool)
            r, c, v = r[keep], c[keep], v[keep]
        self.rows = int(rows)
        self.cols = int(cols)
        self.row = r
        self.col = c
        self.val = v
        for a in (self.row, self.col, self.val):
            a.flags.writeable = False

    # -- construction -------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        idx = np.arange(n)
        return cls(n, n, idx, idx, np.ones(n, dtype=np.int64))

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        r, c, v = [], [], []
        for i, line in enumerate(data):
            if len(line) != cols:
                raise ShapeMismatch("ragged dense matrix")
            for j, x in enumerate(line):
                if x:
                    r.append(i)
                    c.append(j)
                    v.append(int(x))
        return cls(rows, cols, r, c, np.array(v, dtype=object))

    @classmethod
    def from_index_map(cls, target: np.ndarray, rows: int) -> IntMatrix:
        """Matrix of the basis map e_j -> e_{target[j]}."""
        target = np.asarray(target, dtype=np.int64)
        return cls(rows, len(target), target, np.arange(len(target)), np.ones(len(target), dtype=np.int64))

    @classmethod
    def from_scipy(cls, m) -> IntMatrix:
        m = sp.coo_matrix(m)
        return cls(m.shape[0], m.shape[1], m.row, m.col, m.data.astype(np.int64))

    # -- views --------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self.val)

    def triplets(self) -> list[tuple[int, int, int]]:
        return [(int(a), int(b), int(x)) for a, b, x in zip(self.row, self.col, self.val)]

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for a, b, x in zip(self.row.tolist(), self.col.tolist(), self.val):
            out[a][b] = int(x)
        return out

    def max_abs(self) -> int:
        return max((abs(int(x)) for x in self.val), default=0)

    def to_scipy(self) -> sp.csr_matrix:
        if self.max_abs() >= 2**62:
            raise OverflowError("entries too large for int64")
        return sp.csr_matrix(
            (self.val.astype(np.int64), (self.row, self.col)), shape=self.shape, dtype=np.int64
        )

    def is_zero(self) -> bool:
        return self.nnz == 0

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            return f"IntMatrix({self.to_dense()})"
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.row, other.row)
            and np.array_equal(self.col, other.col)
            and all(int(a) == int(b) for a, b in zip(self.val, other.val))
        )

    __hash__ = None  # type: ignore[assignment]

    # -- arithmetic ---------------------------------------------------
    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, self.col, self.row, self.val)

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, self.row, self.col, -self.val)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        return IntMatrix(
            self.rows,
            self.cols,
            np.concatenate((self.row, other.row)),
            np.concatenate((self.col, other.col)),
            np.concatenate((self.val, other.val)),
        )

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, self.row, self.col, self.val * int(k))

    def mod(self, m: int) -> IntMatrix:
        """Reduce entries to canonical residues in [0, m); m = 0 leaves Z untouched."""
        if m == 0:
            return self
        return IntMatrix(self.rows, self.cols, self.row, self.col, self.val % m)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        if self.nnz == 0 or other.nnz == 0:
            return IntMatrix(self.rows, other.cols)
        a, b = self.max_abs(), other.max_abs()
        if a * b * max(1, self.cols) < 2**62:
            prod = (self.to_scipy() @ other.to_scipy()).tocoo()
            return IntMatrix(self.rows, other.cols, prod.row, prod.col, prod.data.astype(np.int64))
        acc: dict[tuple[int, int], int] = {}
        by_row: dict[int, list[tuple[int, int]]] = {}
        for r, c, v in other.triplets():
            by_row.setdefault(r, []).append((c, v))
        for r, k, v in self.triplets():
            for c, w in by_row.get(k, ()):
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        keys = list(acc)
        return IntMatrix(
            self.rows,
            other.cols,
            [k[0] for k in keys],
            [k[1] for k in keys],
            np.array([acc[k] for k in keys], dtype=object),
        )

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.cols:
            raise ShapeMismatch("vector length")
        out = [0] * self.rows
        for r, c, v in zip(self.row.tolist(), self.col.tolist(), self.val):
            out[r] += int(v) * int(vec[c])
        return out

    def take(self, rows: Sequence[int] | np.ndarray, cols: Sequence[int] | np.ndarray) -> IntMatrix:
        """Submatrix on the given row and column indices, in that order."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        rmap = np.full(self.rows, -1, dtype=np.int64)
        cmap = np.full(self.cols, -1, dtype=np.int64)
        rmap[rows] = np.arange(len(rows))
        cmap[cols] = np.arange(len(cols))
        nr, nc = rmap[self.row], cmap[self.col]
        keep = (nr >= 0) & (nc >= 0)
        return IntMatrix(len(rows), len(cols), nr[keep], nc[keep], self.val[keep])

    @staticmethod
    def hstack(mats: Sequence[IntMatrix]) -> IntMatrix:
        rows = mats[0].rows
        off, r, c, v = 0, [], [], []
        for m in mats:
            if m.rows != rows:
                raise ShapeMismatch("hstack row mismatch")
            r.append(m.row)
            c.append(m.col + off)
            v.append(m.val)
            off += m.cols
        return IntMatrix(rows, off, np.concatenate(r), np.concatenate(c), np.concatenate(v))

    @staticmethod
    def vstack(mats: Sequence[IntMatrix]) -> IntMatrix:
        return IntMatrix.hstack([m.T for m in mats]).T

    @staticmethod
    def block_diag(mats: Sequence[IntMatrix]) -> IntMatrix:
        ro = co = 0
        r, c, v = [], [], []
        for m in mats:
            r.append(m.row + ro)
            c.append(m.col + co)
            v.append(m.val)
            ro += m.rows
            co += m.cols
        if not mats:
            return IntMatrix(0, 0)
        return IntMatrix(ro, co, np.concatenate(r), np.concatenate(c), np.concatenate(v))

    def kron(self, other: IntMatrix) -> IntMatrix:
        """Kronecker product; the left factor indexes the outer block."""
        if self.nnz == 0 or other.nnz == 0:
            return IntMatrix(self.rows * other.rows, self.cols * other.cols)
        r = (self.row[:, None] * other.rows + other.row[None, :]).ravel()
        c = (self.col[:, None] * other.cols + other.col[None, :]).ravel()
        v = (self.val[:, None] * other.val[None, :]).ravel()
        return IntMatrix(self.rows * other.rows, self.cols * other.cols, r, c, v)


class FpMatrix:
    """Sparse matrix over F_p with int64 triplets in [1, p-1]."""

    __slots__ = ("p", "rows", "cols", "row", "col", "val")

    def __init__(self, p: int, rows: int, cols: int, row=(), col=(), val=()):
        if not isprime(p):
            raise ShapeMismatch(f"F_p needs a prime, got {p}")
        r = np.asarray(row, dtype=np.int64).ravel()
        c = np.asarray(col, dtype=np.int64).ravel()
        v = np.asarray(val, dtype=np.int64).ravel() % p if len(r) else np.zeros(0, dtype=np.int64)
        if len(r):
            if r.min() < 0 or r.max() >= rows or c.min() < 0 or c.max() >= cols:
                raise ShapeMismatch("triplet index out of range")
            m = sp.coo_matrix((v, (r, c)), shape=(rows, cols)).tocsr()
            m.sum_duplicates()
            m.sort_indices()
            m = m.tocoo()
            r, c, v = m.row.astype(np.int64), m.col.astype(np.int64), m.data % p
            keep = v != 0
            r, c, v = r[keep], c[keep], v[keep]
        self.p, self.rows, self.cols = int(p), int(rows), int(cols)
        self.row, self.col, self.val = r, c, v

    @classmethod
    def from_int_matrix(cls, a: IntMatrix, p: int) -> FpMatrix:
        vals = np.array([int(x) % p for x in a.val], dtype=np.int64)
        return cls(p, a.rows, a.cols, a.row, a.col, vals)

    @classmethod
    def from_dense(cls, p: int, data) -> FpMatrix:
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(len(arr), -1)
        r, c = np.nonzero(arr % p)
        return cls(p, arr.shape[0], arr.shape[1], r, c, arr[r, c])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self.val)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        out[self.row, self.col] = self.val
        return out

    def rank(self) -> int:
        return rank_fp(self)


# ---------------------------------------------------------------------------
# finitely generated abelian groups


def _invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    by_prime: dict[int, list[int]] = {}
    for m in orders:
        if m < 1:
            raise ValueError(f"cyclic order must be positive, got {m}")
        for p, e in factorint(m).items():
            by_prime.setdefault(p, []).append(e)
    for exps in by_prime.values():
        exps.sort(reverse=True)
    length = max((len(e) for e in by_prime.values()), default=0)
    factors = []
    for k in range(length):
        f = 1
        for p, exps in by_prime.items():
            if k < len(exps):
                f *= p ** exps[k]
        factors.append(f)
    return tuple(reversed(factors))


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank + Z/m_1 + ... + Z/m_k with m_1 | m_2 | ... and every m_i >= 2."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        t = tuple(int(m) for m in self.torsion)
        object.__setattr__(self, "torsion", t)
        if any(m < 2 for m in t):
            raise ValueError(f"invariant factors must be >= 2: {t}")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"invariant factors must form a divisibility chain: {t}")

    @classmethod
    def from_cyclic(cls, free_rank: int = 0, orders: Iterable[int] = ()) -> FGAbelianGroup:
        """Canonical form of Z^free_rank + sum of Z/m over ``orders`` (1s are dropped)."""
        return cls(free_rank, _invariant_factors(o for o in orders if o != 1))

    @classmethod
    def cyclic(cls, m: int) -> FGAbelianGroup:
        """Z for m = 0, Z/m otherwise."""
        return cls(1) if m == 0 else cls.from_cyclic(0, [m])

    @classmethod
    def parse(cls, text: str) -> FGAbelianGroup:
        text = text.strip()
        if text == "0":
            return cls()
        free, orders = 0, []
        for part in text.split("+"):
            part = part.strip()
            try:
                if part == "Z":
                    free += 1
                elif part.startswith("Z^"):
                    free += int(part[2:])
                elif part.startswith("Z/"):
                    orders.append(int(part[2:]))
                else:
                    raise ValueError
            except ValueError:
                raise ParseError(f"cannot parse group summand {part!r} in {text!r}") from None
        return cls.from_cyclic(free, orders)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{m}" for m in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __add__(self, other: FGAbelianGroup) -> FGAbelianGroup:
        return FGAbelianGroup.from_cyclic(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for m in self.torsion:
            out *= m
        return out

    def cyclic_factors(self) -> list[int]:
        """Cyclic decomposition as moduli, with 0 standing for a copy of Z."""
        return [0] * self.free_rank + list(self.torsion)

    def fp_dim(self, p: int) -> int:
        """Dimension over F_p when the group is an F_p-vector space."""
        if self.free_rank or any(m != p for m in self.torsion):
            raise ValueError(f"{self} is not an F_{p}-vector space")
        return len(self.torsion)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    """U @ A @ V == S with U, V unimodular and S diagonal with d_1 | d_2 | ..."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        n = min(self.S.shape)
        d = [0] * n
        for r, c, v in self.S.triplets():
            d[r] = v
        return d

    @property
    def rank(self) -> int:
        return self.S.nnz


class _SNF:
    """Dense elimination state; V_inv tracks the inverse of V alongside it."""

    def __init__(self, a: list[list[int]], rows: int, cols: int):
        self.a = [list(r) for r in a]
        self.m, self.n = rows, cols
        self.U = [[int(i == j) for j in range(rows)] for i in range(rows)]
        self.V = [[int(i == j) for j in range(cols)] for i in range(cols)]
        self.Vinv = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(self, i, j):
        if i != j:
            self.a[i], self.a[j] = self.a[j], self.a[i]
            self.U[i], self.U[j] = self.U[j], self.U[i]

    def swap_cols(self, i, j):
        if i != j:
            for row in self.a:
                row[i], row[j] = row[j], row[i]
            for row in self.V:
                row[i], row[j] = row[j], row[i]
            self.Vinv[i], self.Vinv[j] = self.Vinv[j], self.Vinv[i]

    def add_row(self, dst, src, q):
        """row_dst += q * row_src."""
        a, U = self.a, self.U
        ra, rs = a[dst], a[src]
        for k in range(self.n):
            if rs[k]:
                ra[k] += q * rs[k]
        ua, us = U[dst], U[src]
        for k in range(self.m):
            if us[k]:
                ua[k] += q * us[k]

    def add_col(self, dst, src, q):
        """col_dst += q * col_src."""
        for row in self.a:
            if row[src]:
                row[dst] += q * row[src]
        for row in self.V:
            if row[src]:
                row[dst] += q * row[src]
        vs, vd = self.Vinv[src], self.Vinv[dst]
        for k in range(self.n):
            if vd[k]:
                vs[k] -= q * vd[k]

    def negate_row(self, i):
        self.a[i] = [-x for x in self.a[i]]
        self.U[i] = [-x for x in self.U[i]]

    def min_pivot(self, t):
        best = None
        for i in range(t, self.m):
            row = self.a[i]
            for j in range(t, self.n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        return best
        return best

    def run(self):
        t = 0
        while t < min(self.m, self.n):
            piv = self.min_pivot(t)
            if piv is None:
                break
            while True:
                _, i, j = piv
                self.swap_rows(t, i)
                self.swap_cols(t, j)
                p = self.a[t][t]
                clean = True
                for i in range(t + 1, self.m):
                    x = self.a[i][t]
                    if x:
                        self.add_row(i, t, -(x // p))
                        clean = clean and self.a[i][t] == 0
                for j in range(t + 1, self.n):
                    x = self.a[t][j]
                    if x:
                        self.add_col(j, t, -(x // p))
                        clean = clean and self.a[t][j] == 0
                if clean:
                    bad = next(
                        (i for i in range(t + 1, self.m) if any(x % p for x in self.a[i][t + 1 :])),
                        None,
                    )
                    if bad is None:
                        break
                    self.add_row(t, bad, 1)
                piv = self.min_pivot(t)
            if self.a[t][t] < 0:
                self.negate_row(t)
            t += 1
        return self


def _snf_state(a: IntMatrix) -> _SNF:
    return _SNF(a.to_dense(), a.rows, a.cols).run()


def snf(a: IntMatrix) -> SNFResult:
    """Smith normal form with minimal-absolute-value pivoting (ties: lowest row, col)."""
    st = _snf_state(a)
    return SNFResult(
        IntMatrix.from_dense(st.U, a.rows),
        IntMatrix.from_dense(st.a, a.cols),
        IntMatrix.from_dense(st.V, a.cols),
    )


def _diag(st: _SNF) -> list[int]:
    return [st.a[i][i] for i in range(min(st.m, st.n)) if st.a[i][i]]


# ---------------------------------------------------------------------------
# homology over Z and Z/m


def _check_composable(d_in: IntMatrix, d_out: IntMatrix, m: int = 0) -> None:
    if d_out.cols != d_in.rows:
        raise ShapeMismatch(f"d_out {d_out.shape} and d_in {d_in.shape} do not compose")
    if not (d_out @ d_in).mod(m).is_zero():
        raise CompositionNotZero("d_out @ d_in is not zero" + (f" mod {m}" if m else ""))


def homology_z(d_in: IntMatrix, d_out: IntMatrix) -> FGAbelianGroup:
    """ker(d_out) / im(d_in) for C_{i+1} --d_in--> C_i --d_out--> C_{i-1}."""
    _check_composable(d_in, d_out)
    n = d_in.rows
    st = _snf_state(d_out)
    r = len(_diag(st))
    if d_in.cols == 0 or n == r:
        return FGAbelianGroup(n - r)
    vinv = IntMatrix.from_dense(st.Vinv, n)
    coords = (vinv @ d_in).take(np.arange(r, n), np.arange(d_in.cols))
    inner = _diag(_snf_state(coords))
    return FGAbelianGroup.from_cyclic(n - r - len(inner), [abs(d) for d in inner])


def homology_mod(d_in: IntMatrix, d_out: IntMatrix, m: int) -> FGAbelianGroup:
    """Homology of the complex tensored with Z/m.

    Cycles are the lattice {x : d_out x = 0 mod m}, read off the kernel of
    [d_out | m I]; boundaries are generated by [d_in | m I].
    """
    if m < 2:
        raise ValueError("modulus must be >= 2")
    _check_composable(d_in, d_out, m)
    n = d_in.rows
    if n == 0:
        return FGAbelianGroup()
    b = d_out.rows
    aug_out = IntMatrix.hstack([d_out, IntMatrix.identity(b).scale(m)]) if b else IntMatrix(0, n)
    st = _snf_state(aug_out)
    r = len(_diag(st))
    # the kernel of aug_out has rank n and projects injectively onto the first n coordinates
    basis = [[st.V[i][j] for j in range(r, n + b)] for i in range(n)]
    w = IntMatrix.from_dense(basis, n + b - r)
    bnd = IntMatrix.hstack([d_in, IntMatrix.identity(n).scale(m)])
    ws = _snf_state(w)
    d = [ws.a[i][i] for i in range(n)]
    ub = IntMatrix.from_dense(ws.U, n) @ bnd
    scaled = ub.to_dense()
    for i in range(n):
        row = scaled[i]
        for j in range(len(row)):
            q, rem = divmod(row[j], d[i])
            if rem:
                raise ArithmeticError("boundaries are not contained in cycles")
            row[j] = q
    rel = IntMatrix.from_dense(ws.V, n) @ IntMatrix.from_dense(scaled, bnd.cols)
    inner = _diag(_snf_state(rel))
    return FGAbelianGroup.from_cyclic(n - len(inner), [abs(x) for x in inner])


# ---------------------------------------------------------------------------
# prime fields


def rref_mod_p(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p of a dense matrix; returns (nonzero rows, pivot columns)."""
    m = np.array(mat, dtype=np.int64) % p
    if m.ndim != 2:
        raise ShapeMismatch("expected a 2-d array")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace_mod_p(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel as rows, one per free column in increasing order."""
    mat = np.asarray(mat, dtype=np.int64)
    cols = mat.shape[1]
    red, piv = rref_mod_p(mat, p) if mat.shape[0] else (np.zeros((0, cols), np.int64), [])
    free = [c for c in range(cols) if c not in set(piv)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for r, c in enumerate(piv):
            out[k, c] = (-red[r, f]) % p
    return out


def solve_mod_p(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Some x with a @ x = b over F_p (b may be a matrix of right-hand sides), or None."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    n = a.shape[1]
    red, piv = rref_mod_p(np.hstack([a, b]), p)
    if any(c >= n for c in piv):
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = red[r, n:]
    return x[:, 0] if vec else x


def _reduce_block(v: np.ndarray, basis: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    if not pivots:
        return v % p
    k = len(pivots)
    coeff = v[:, pivots]
    if k * (p - 1) ** 2 + p < 2**52:
        prod = coeff.astype(np.float64) @ basis.astype(np.float64)
        return np.mod(v - prod, p).astype(np.int64)
    if k * (p - 1) ** 2 < 2**62:
        return (v - coeff @ basis) % p
    return ((v.astype(object) - coeff.astype(object) @ basis.astype(object)) % p).astype(np.int64)


def rank_fp(a: FpMatrix) -> int:
    """Rank over F_p; exact and deterministic for every input."""
    if a.nnz == 0:
        return 0
    p = a.p
    if a.rows <= a.cols:
        short, long_, comp, vec = a.rows, a.cols, a.row, a.col
    else:
        short, long_, comp, vec = a.cols, a.rows, a.col, a.row
    if short * long_ <= _DENSE_CUTOFF * _DENSE_CUTOFF:
        return len(rref_mod_p(a.to_dense(), p)[1])
    order = np.argsort(vec, kind="stable")
    comp, vec, val = comp[order], vec[order], a.val[order]
    chunk = max(1, 2_000_000 // short)
    basis = np.zeros((0, short), dtype=np.int64)
    pivots: list[int] = []
    for start in range(0, long_, chunk):
        lo, hi = np.searchsorted(vec, [start, start + chunk])
        if lo == hi:
            continue
        width = min(chunk, long_ - start)
        block = np.zeros((width, short), dtype=np.int64)
        block[vec[lo:hi] - start, comp[lo:hi]] = val[lo:hi]
        block = _reduce_block(block, basis, pivots, p)
        block = block[block.any(axis=1)]
        if block.shape[0] == 0:
            continue
        new_rows, new_piv = rref_mod_p(block, p)
        if basis.shape[0]:
            basis = (basis - basis[:, new_piv] @ new_rows) % p
        basis = np.vstack([basis, new_rows])
        pivots.extend(new_piv)
        if len(pivots) == short:
            break
    return len(pivots)


def homology_fp_dim(d_in: IntMatrix, d_out: IntMatrix, p: int) -> int:
    """dim over F_p of ker(d_out) / im(d_in), both matrices read mod p."""
    if d_out.cols != d_in.rows:
        raise ShapeMismatch("differentials do not compose")
    r_out = rank_fp(FpMatrix.from_int_matrix(d_out, p))
    r_in = rank_fp(FpMatrix.from_int_matrix(d_in, p))
    return d_in.rows - r_out - r_in
