"""Vectorized multilinear term engine.

A :class:`TermState` is a list of weighted pure tensors of basis vectors of a
d-dimensional module, one row per term. Structure tensors (products,
coproducts, counits, units) act on selected columns; rows expand when a
tensor produces several basis terms. Every term remembers the input basis
vector it came from, so the final state reads off as a sparse matrix.
"""

from __future__ import annotations

import numpy as np

from ..exact_linalg import IntMatrix
from .sets import decode_leaves, encode_leaves


class TermState:
    def __init__(self, d: int, modulus: int, leaves: np.ndarray, src: np.ndarray | None = None):
        self.d = int(d)
        self.modulus = int(modulus)
        leaves = np.asarray(leaves, dtype=np.int64)
        if leaves.ndim != 2:
            raise ValueError("leaves must be 2-d")
        self.cols = list(np.ascontiguousarray(leaves.T))
        n = leaves.shape[0]
        self.coef = np.ones(n, dtype=np.int64)
        self.src = np.arange(n, dtype=np.int64) if src is None else np.asarray(src, dtype=np.int64)
        self.n_terms = n

    @classmethod
    def from_columns(cls, d: int, modulus: int, cols: list[np.ndarray], n_terms: int) -> TermState:
        """State whose term t has leaf j equal to cols[j][t] (columns are not copied)."""
        st = cls(d, modulus, np.zeros((n_terms, 0), dtype=np.int64))
        st.cols = [np.asarray(c, dtype=np.int64) for c in cols]
        return st

    @classmethod
    def basis(cls, d: int, modulus: int, length: int) -> TermState:
        """One term per basis tensor of the length-fold tensor power, in lexicographic order."""
        return cls(d, modulus, decode_leaves(np.arange(d**length), d, length))

    def apply(self, in_cols: list[int], tensor: np.ndarray, k_out: int) -> list[int]:
        """Apply a (k_in -> k_out) structure tensor; returns the new column ids."""
        d, k_in = self.d, len(in_cols)
        t = np.asarray(tensor, dtype=np.int64).reshape(d**k_in, d**k_out)
        if self.modulus:
            t = t % self.modulus
        key = np.zeros(self.n_terms, dtype=np.int64)
        for c in in_cols:
            key = key * d + self.cols[c]
        nz_r, nz_c = np.nonzero(t)
        vals = t[nz_r, nz_c]
        counts = np.bincount(nz_r, minlength=d**k_in)
        if counts.max(initial=0) <= 1:
            return self._apply_monomial(key, counts, nz_r, nz_c, vals, k_out)
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        cnt = counts[key]
        rep = np.repeat(np.arange(self.n_terms), cnt)
        within = np.arange(len(rep)) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        pos = starts[key][rep] + within
        self.cols = [c[rep] for c in self.cols]
        self.coef = self.coef[rep] * vals[pos]
        if self.modulus:
            self.coef %= self.modulus
        self.src = self.src[rep]
        self.n_terms = len(rep)
        out = nz_c[pos]
        new = decode_leaves(out, d, k_out).astype(np.int64) if k_out else np.zeros((len(rep), 0), np.int64)
        ids = []
        for j in range(k_out):
            self.cols.append(new[:, j])
            ids.append(len(self.cols) - 1)
        self._prune()
        return ids

    def _apply_monomial(self, key, counts, nz_r, nz_c, vals, k_out) -> list[int]:
        """Fast path for tensors sending each input basis tensor to at most one output."""
        d = self.d
        target = np.full(len(counts), -1, dtype=np.int64)
        weight = np.zeros(len(counts), dtype=np.int64)
        target[nz_r] = nz_c
        weight[nz_r] = vals
        if not (counts[key] == 1).all():
            keep = counts[key] == 1
            self.cols = [c[keep] for c in self.cols]
            self.coef = self.coef[keep]
            self.src = self.src[keep]
            self.n_terms = int(keep.sum())
            key = key[keep]
        w = weight[key]
        if not (w == 1).all():
            self.coef = self.coef * w
            if self.modulus:
                self.coef %= self.modulus
        out = target[key]
        if k_out == 1:
            new = out[:, None]
        else:
            new = decode_leaves(out, d, k_out).astype(np.int64) if k_out else None
        ids = []
        for j in range(k_out):
            self.cols.append(np.ascontiguousarray(new[:, j]))
            ids.append(len(self.cols) - 1)
        self._prune()
        return ids

    def _prune(self) -> None:
        keep = self.coef != 0
        if not keep.all():
            self.cols = [c[keep] for c in self.cols]
            self.coef = self.coef[keep]
            self.src = self.src[keep]
            self.n_terms = int(keep.sum())

    def fold(self, cols: list[int], mul: np.ndarray, unit: np.ndarray) -> int:
        """Product of the given columns (the unit when the list is empty)."""
        if not cols:
            return self.apply([], unit, 1)[0]
        acc = cols[0]
        for c in cols[1:]:
            acc = self.apply([acc, c], mul, 1)[0]
        return acc

    def copies(self, col: int, delta: np.ndarray, counit: np.ndarray, k: int) -> list[int]:
        """k-fold iterated coproduct (k = 0 is the counit, k = 1 the column itself)."""
        if k == 0:
            self.apply([col], counit, 0)
            return []
        out = []
        rest = col
        for _ in range(k - 1):
            a, rest = self.apply([rest], delta, 2)
            out.append(a)
        out.append(rest)
        return out

    def to_matrix(self, out_cols: list[int], n_src: int) -> IntMatrix:
        d = self.d
        if out_cols:
            leaves = np.stack([self.cols[c] for c in out_cols], axis=1)
            rows = encode_leaves(leaves, d)
        else:
            rows = np.zeros(self.n_terms, dtype=np.int64)
        m = IntMatrix(d ** len(out_cols), n_src, rows, self.src, self.coef)
        return m.mod(self.modulus)


def pattern_map(d: int, modulus: int, pattern: IntMatrix, mul: np.ndarray, unit: np.ndarray,
                counit: np.ndarray) -> IntMatrix:
    """Translate an additive 0/1 pattern into the matching multiplicative map.

    ``pattern`` (L_out x L_in) must have 0/1 entries with at most one 1 per
    column. Output leaf j becomes the product of the input leaves in row j
    (the unit for an empty row); unused input leaves are sent through the
    counit. For the nerve this turns +, 0 and the terminal map into the
    product, unit and augmentation of an algebra.
    """
    if any(int(v) != 1 for v in pattern.val) or len(np.unique(pattern.col)) != pattern.nnz:
        raise ValueError("pattern must be 0/1 with at most one entry per column")
    l_out, l_in = pattern.shape
    st = TermState.basis(d, modulus, l_in)
    used = set(pattern.col.tolist())
    for c in range(l_in):
        if c not in used:
            st.apply([c], counit, 0)
    rows: list[list[int]] = [[] for _ in range(l_out)]
    for r, c in zip(pattern.row.tolist(), pattern.col.tolist()):
        rows[r].append(c)
    outs = [st.fold(sorted(cs), mul, unit) for cs in rows]
    return st.to_matrix(outs, d**l_in)
