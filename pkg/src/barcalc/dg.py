"""Chain-level tools: shuffle and Alexander-Whitney maps, condensation of
bisimplicial modules, the dg bar construction and the Dold-Puppe comparison.

Signs are Koszul throughout. The total complex of a bicomplex uses
d = d_h + (-1)^p d_v with p the horizontal degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import InvalidAlgebra, ShapeMismatch, TruncationMismatch, TruncationTooLow
from .exact_linalg import FGAbelianGroup, IntMatrix
from .rings import AugCommAlgebra
from .simplicial.bisimplicial import BisimplicialObject, diagonal
from .simplicial.chains import ChainComplex, nondegenerate_basis
from .simplicial.modules import SimplicialKModule, tensor_modules


def shuffles(p: int, q: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """All (p, q)-shuffles as (mu, nu, sign).

    mu (size p) and nu (size q) partition {0, ..., p+q-1}; sign is the parity
    of the permutation listing mu then nu. In the shuffle map a degree-p
    simplex receives the degeneracies indexed by nu and a degree-q simplex
    those indexed by mu.
    """
    for mu in itertools.combinations(range(p + q), p):
        nu = tuple(k for k in range(p + q) if k not in mu)
        inv = sum(m - k for k, m in enumerate(mu))
        yield mu, nu, -1 if inv % 2 else 1


def _coeffs(modulus: int) -> FGAbelianGroup:
    return FGAbelianGroup.cyclic(modulus)


# ---------------------------------------------------------------------------
# chain maps and normalized chains


@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    maps: list[IntMatrix]
    modulus: int = 0
    name: str = "f"

    def __post_init__(self):
        for n, f in enumerate(self.maps):
            if f.shape != (self.target.ranks[n], self.source.ranks[n]):
                raise ShapeMismatch(f"{self.name} in degree {n} has shape {f.shape}")

    def failures(self) -> list[int]:
        """Degrees n >= 1 where d f_n != f_(n-1) d."""
        bad = []
        for n in range(1, len(self.maps)):
            lhs = self.target.d(n) @ self.maps[n]
            rhs = self.maps[n - 1] @ self.source.d(n)
            if not (lhs - rhs).mod(self.modulus).is_zero():
                bad.append(n)
        return bad

    @property
    def is_chain_map(self) -> bool:
        return not self.failures()

    def compose(self, other: ChainMap) -> ChainMap:
        """self after other."""
        k = min(len(self.maps), len(other.maps))
        return ChainMap(other.source, self.target,
                        [(self.maps[n] @ other.maps[n]).mod(self.modulus) for n in range(k)],
                        self.modulus, f"{self.name}.{other.name}")


def _alternating(m: SimplicialKModule, p: int) -> IntMatrix:
    out = IntMatrix.zeros(m.rank(p - 1), m.rank(p))
    for i in range(p + 1):
        f = m.face(p, i)
        out = out + (f if i % 2 == 0 else -f)
    return out


class Normalized:
    """N(M) in degrees 0..top with its nondegenerate bases."""

    def __init__(self, m: SimplicialKModule, top: int):
        if top > m.truncation:
            raise TruncationTooLow(f"degree {top} beyond truncation {m.truncation} of {m.name}")
        self.m, self.top = m, top
        self.basis = [nondegenerate_basis(m, p) for p in range(top + 1)]
        diffs = [IntMatrix(0, len(self.basis[0]))]
        for p in range(1, top + 1):
            diffs.append(_alternating(m, p).take(self.basis[p - 1], self.basis[p]).mod(m.modulus))
        self.complex = ChainComplex([len(b) for b in self.basis], diffs, _coeffs(m.modulus), name=f"N({m.name})")

    def dim(self, p: int) -> int:
        return len(self.basis[p])


def tensor_complex(a: ChainComplex, b: ChainComplex, top: int, modulus: int) -> tuple[ChainComplex, list]:
    """A (x) B with d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy.

    Degree n is the direct sum over i = 0..n of A_i (x) B_(n-i), in that
    order; the pair (x, y) has index x * rank B_(n-i) + y inside its block.
    Returns the complex and, per degree, the list of (i, offset) blocks.
    """
    ranks, blocks = [], []
    for n in range(top + 1):
        off, bl = 0, []
        for i in range(n + 1):
            bl.append((i, off))
            off += a.ranks[i] * b.ranks[n - i]
        ranks.append(off)
        blocks.append(bl)
    diffs = [IntMatrix(0, ranks[0])]
    for n in range(1, top + 1):
        parts_r, parts_c, parts_v = [], [], []
        for i, off in blocks[n]:
            j = n - i
            cols_here = a.ranks[i] * b.ranks[j]
            if cols_here == 0:
                continue
            if i >= 1:
                m = a.d(i).kron(IntMatrix.identity(b.ranks[j]))
                t_off = dict(blocks[n - 1])[i - 1]
                parts_r.append(m.row + t_off)
                parts_c.append(m.col + off)
                parts_v.append(m.val)
            if j >= 1:
                m = IntMatrix.identity(a.ranks[i]).kron(b.d(j))
                t_off = dict(blocks[n - 1])[i]
                parts_r.append(m.row + t_off)
                parts_c.append(m.col + off)
                parts_v.append(m.val * (-1 if i % 2 else 1))
        if parts_r:
            d = IntMatrix(ranks[n - 1], ranks[n], np.concatenate(parts_r), np.concatenate(parts_c),
                          np.concatenate(parts_v))
        else:
            d = IntMatrix(ranks[n - 1], ranks[n])
        diffs.append(d.mod(modulus))
    return ChainComplex(ranks, diffs, _coeffs(modulus), name=f"{a.name} (x) {b.name}"), blocks


def _compose_degens(m: SimplicialKModule, start: int, indices) -> IntMatrix:
    out = IntMatrix.identity(m.rank(start))
    for lvl, k in enumerate(indices):
        out = m.degen(start + lvl, k) @ out
    return out


def _front(m: SimplicialKModule, n: int, keep: int) -> IntMatrix:
    """d_(keep+1) ... d_n: the front face with vertices 0..keep."""
    out = IntMatrix.identity(m.rank(n))
    for lvl in range(n, keep, -1):
        out = m.face(lvl, lvl) @ out
    return out


def _back(m: SimplicialKModule, n: int, keep: int) -> IntMatrix:
    """d_0 applied n - keep times: the back face with the last keep + 1 vertices."""
    out = IntMatrix.identity(m.rank(n))
    for lvl in range(n, keep, -1):
        out = m.face(lvl, 0) @ out
    return out


def _check_pair(x: SimplicialKModule, y: SimplicialKModule, up_to: int):
    if x.modulus != y.modulus:
        raise TruncationMismatch("base rings differ")
    if min(x.truncation, y.truncation) < up_to:
        raise TruncationTooLow(f"shuffle maps to degree {up_to} need truncation >= {up_to}")


@dataclass
class MonoidalData:
    nx: Normalized
    ny: Normalized
    nxy: Normalized
    tensor: ChainComplex
    blocks: list


def _monoidal(x, y, up_to) -> MonoidalData:
    _check_pair(x, y, up_to)
    nx, ny = Normalized(x, up_to), Normalized(y, up_to)
    xy = tensor_modules(x, y)
    nxy = Normalized(xy, up_to)
    tc, blocks = tensor_complex(nx.complex, ny.complex, up_to, x.modulus)
    return MonoidalData(nx, ny, nxy, tc, blocks)


def ez_shuffle(x: SimplicialKModule, y: SimplicialKModule, up_to: int) -> ChainMap:
    """Shuffle map N(X) (x) N(Y) -> N(X (x) Y)."""
    md = _monoidal(x, y, up_to)
    maps = []
    for n in range(up_to + 1):
        cols = []
        for i, _off in md.blocks[n]:
            j = n - i
            acc = IntMatrix.zeros(x.rank(n) * y.rank(n), md.nx.dim(i) * md.ny.dim(j))
            for mu, nu, sign in shuffles(i, j):
                sx = _compose_degens(x, i, nu).take(np.arange(x.rank(n)), md.nx.basis[i])
                sy = _compose_degens(y, j, mu).take(np.arange(y.rank(n)), md.ny.basis[j])
                acc = acc + sx.kron(sy).scale(sign)
            cols.append(acc.take(md.nxy.basis[n], np.arange(acc.cols)))
        maps.append(IntMatrix.hstack(cols).mod(x.modulus))
    return ChainMap(md.tensor, md.nxy.complex, maps, x.modulus, "EZ")


def alexander_whitney(x: SimplicialKModule, y: SimplicialKModule, up_to: int) -> ChainMap:
    """Front-face/back-face map N(X (x) Y) -> N(X) (x) N(Y)."""
    md = _monoidal(x, y, up_to)
    maps = []
    for n in range(up_to + 1):
        rows = []
        for i, _off in md.blocks[n]:
            j = n - i
            f = _front(x, n, i).take(md.nx.basis[i], np.arange(x.rank(n)))
            b = _back(y, n, j).take(md.ny.basis[j], np.arange(y.rank(n)))
            rows.append(f.kron(b).take(np.arange(f.rows * b.rows), md.nxy.basis[n]))
        maps.append(IntMatrix.vstack(rows).mod(x.modulus))
    return ChainMap(md.nxy.complex, md.tensor, maps, x.modulus, "AW")


# ---------------------------------------------------------------------------
# condensation and Dold-Puppe


def _double_nondegenerate(x: BisimplicialObject, p: int, q: int) -> np.ndarray:
    hit = np.zeros(x.size(p, q), dtype=bool)
    for i in range(p):
        hit[x.hdegen(p - 1, q, i).row] = True
    for j in range(q):
        hit[x.vdegen(p, q - 1, j).row] = True
    return np.flatnonzero(~hit)


def condense(x: BisimplicialObject, up_to: int) -> ChainComplex:
    """Total complex of the doubly normalized bicomplex, degrees 0..up_to."""
    if x.kind != "module":
        raise TypeError("condense expects a bisimplicial module")
    if x.truncation < up_to:
        raise TruncationTooLow(f"condensation to degree {up_to} needs truncation >= {up_to}")
    basis = {(p, q): _double_nondegenerate(x, p, q) for p in range(up_to + 1) for q in range(up_to + 1 - p)}
    offsets, ranks = [], []
    for n in range(up_to + 1):
        off, o = 0, {}
        for p in range(n + 1):
            o[p] = off
            off += len(basis[(p, n - p)])
        offsets.append(o)
        ranks.append(off)
    diffs = [IntMatrix(0, ranks[0])]
    for n in range(1, up_to + 1):
        r, c, v = [], [], []
        for p in range(n + 1):
            q = n - p
            src = basis[(p, q)]
            if len(src) == 0:
                continue
            if p >= 1:
                dh = IntMatrix.zeros(x.size(p - 1, q), x.size(p, q))
                for i in range(p + 1):
                    f = x.hface(p, q, i)
                    dh = dh + (f if i % 2 == 0 else -f)
                m = dh.take(basis[(p - 1, q)], src)
                r.append(m.row + offsets[n - 1][p - 1])
                c.append(m.col + offsets[n][p])
                v.append(m.val)
            if q >= 1:
                dv = IntMatrix.zeros(x.size(p, q - 1), x.size(p, q))
                for j in range(q + 1):
                    f = x.vface(p, q, j)
                    dv = dv + (f if j % 2 == 0 else -f)
                m = dv.take(basis[(p, q - 1)], src)
                r.append(m.row + offsets[n - 1][p])
                c.append(m.col + offsets[n][p])
                v.append(m.val * (-1 if p % 2 else 1))
        if r:
            d = IntMatrix(ranks[n - 1], ranks[n], np.concatenate(r), np.concatenate(c), np.concatenate(v))
        else:
            d = IntMatrix(ranks[n - 1], ranks[n])
        diffs.append(d.mod(x.modulus))
    return ChainComplex(ranks, diffs, _coeffs(x.modulus), name=f"C({x.name})")


@dataclass
class DoldPuppeReport:
    degrees: int
    diagonal_dims: list[int]
    condensed_dims: list[int]
    modulus: int

    @property
    def agree(self) -> list[bool]:
        return [a == b for a, b in zip(self.diagonal_dims, self.condensed_dims)]

    @property
    def ok(self) -> bool:
        return all(self.agree)

    def to_dict(self) -> dict:
        return {"up_to": self.degrees, "modulus": self.modulus, "diagonal": self.diagonal_dims,
                "condensed": self.condensed_dims, "agree": self.agree, "ok": self.ok}


def _fp_dims(c: ChainComplex, up_to: int, p: int) -> list[int]:
    return [h.fp_dim(p) if p else h.free_rank for h in c.homology_list(up_to)]


def dold_puppe_compare(x: BisimplicialObject, up_to: int) -> DoldPuppeReport:
    """Homology of N(diag X) against homology of the condensation, degrees <= up_to.

    Both sides are computed to degree up_to + 1 so that H_up_to is determined.
    Dimensions over F_p for a prime modulus p (free ranks over Z).
    """
    if x.truncation < up_to + 1:
        raise TruncationTooLow(f"comparison to degree {up_to} needs truncation >= {up_to + 1}")
    diag = diagonal(x)
    nd = Normalized(diag, up_to + 1).complex
    cd = condense(x, up_to + 1)
    p = x.modulus
    return DoldPuppeReport(up_to, _fp_dims(nd, up_to, p), _fp_dims(cd, up_to, p), p)


# ---------------------------------------------------------------------------
# dg algebras and the bar construction


@dataclass
class DGReport:
    checks: dict[str, list[str]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.checks.values())

    def to_dict(self) -> dict:
        return {"ok": self.ok, "failures": self.checks}


@dataclass
class DGAlgebra:
    """Graded algebra with differential, stored in degrees 0..top.

    ``product[(i, j)]`` maps C_i (x) C_j -> C_(i+j) for i + j <= top, input
    (x, y) at index x * rank_j + y. ``unit`` is a basis index in degree 0 and
    ``augmentation`` a row vector on C_0.
    """

    complex: ChainComplex
    product: dict
    unit: int
    augmentation: np.ndarray
    modulus: int
    basis_names: list | None = None

    @property
    def top(self) -> int:
        return self.complex.top

    @property
    def ranks(self) -> list[int]:
        return self.complex.ranks

    @classmethod
    def from_algebra(cls, a: AugCommAlgebra) -> DGAlgebra:
        d = a.dim
        mul = np.asarray(a.mul, dtype=np.int64)
        r, c, v = [], [], []
        for x in range(d):
            for y in range(d):
                for z in np.flatnonzero(mul[x, y] % a.modulus if a.modulus else mul[x, y]):
                    r.append(z)
                    c.append(x * d + y)
                    v.append(int(mul[x, y, z]))
        prod = IntMatrix(d, d * d, r, c, v).mod(a.modulus)
        cx = ChainComplex([d], [IntMatrix(0, d)], _coeffs(a.modulus), complete=True, name=a.name)
        return cls(cx, {(0, 0): prod}, a.unit, np.asarray(a.augmentation, dtype=np.int64), a.modulus,
                   list(a.basis_names) if a.basis_names else None)

    def mult(self, i: int, j: int) -> IntMatrix:
        return self.product[(i, j)]

    def check(self) -> DGReport:
        """Leibniz rule, graded commutativity, associativity and unit on every stored degree."""
        rep = DGReport({"leibniz": [], "graded commutativity": [], "associativity": [], "unit": []})
        r, top, mod = self.ranks, self.top, self.modulus

        def eq(a: IntMatrix, b: IntMatrix) -> bool:
            return (a - b).mod(mod).is_zero()

        def eye(k):
            return IntMatrix.identity(r[k])

        for i in range(top + 1):
            for j in range(top + 1 - i):
                pij = self.mult(i, j)
                if i + j >= 1:
                    lhs = self.complex.d(i + j) @ pij
                    rhs = IntMatrix.zeros(r[i + j - 1], r[i] * r[j])
                    if i >= 1:
                        rhs = rhs + self.mult(i - 1, j) @ self.complex.d(i).kron(eye(j))
                    if j >= 1:
                        t = self.mult(i, j - 1) @ eye(i).kron(self.complex.d(j))
                        rhs = rhs + (t if i % 2 == 0 else -t)
                    if not eq(lhs, rhs):
                        rep.checks["leibniz"].append(f"degrees ({i},{j})")
                swap_idx = np.arange(r[i] * r[j])
                xs, ys = np.divmod(swap_idx, r[j]) if r[j] else (swap_idx, swap_idx)
                swap = IntMatrix.from_index_map(ys * r[i] + xs, r[j] * r[i]) if r[i] * r[j] else IntMatrix(0, 0)
                other = self.mult(j, i) @ swap if r[i] * r[j] else IntMatrix(r[i + j], 0)
                if not eq(pij, other if (i * j) % 2 == 0 else -other):
                    rep.checks["graded commutativity"].append(f"degrees ({i},{j})")
                for k in range(top + 1 - i - j):
                    lhs = self.mult(i + j, k) @ pij.kron(eye(k))
                    rhs = self.mult(i, j + k) @ eye(i).kron(self.mult(j, k))
                    if not eq(lhs, rhs):
                        rep.checks["associativity"].append(f"degrees ({i},{j},{k})")
        u = IntMatrix(r[0], 1, [self.unit], [0], [1])
        for k in range(top + 1):
            if not eq(self.mult(0, k) @ u.kron(eye(k)), eye(k)) or not eq(self.mult(k, 0) @ eye(k).kron(u), eye(k)):
                rep.checks["unit"].append(f"degree {k}")
        return rep

    def homology_dims(self, p: int, up_to: int) -> list[int]:
        return _fp_dims(self.complex, up_to, p)


@dataclass(frozen=True)
class BarWord:
    """A bar word [a_1 | ... | a_k]; each letter is (internal degree, ideal basis index)."""

    letters: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return sum(d + 1 for d, _ in self.letters)


def _ideal_data(a: DGAlgebra):
    """Basis of the augmentation ideal and coordinates of products in it.

    In degree 0 the ideal has basis e_k - eps(e_k) e_unit for k != unit;
    higher degrees lie entirely in the ideal.
    """
    eps = a.augmentation
    off = int(eps[a.unit]) - 1
    if (off % a.modulus if a.modulus else off) != 0:
        raise InvalidAlgebra("augmentation must send the unit to 1")
    ideal = {0: [k for k in range(a.ranks[0]) if k != a.unit]}
    for dgr in range(1, a.top + 1):
        ideal[dgr] = list(range(a.ranks[dgr]))

    def lift(dgr: int, k: int) -> np.ndarray:
        v = np.zeros(a.ranks[dgr], dtype=np.int64)
        b = ideal[dgr][k]
        v[b] = 1
        if dgr == 0:
            v[a.unit] -= int(eps[b])
        return v

    def coords(dgr: int, v: np.ndarray) -> dict[int, int]:
        # v lies in the ideal; drop the unit coordinate in degree 0
        out = {}
        for k, b in enumerate(ideal[dgr]):
            c = int(v[b]) % a.modulus if a.modulus else int(v[b])
            if c:
                out[k] = c
        return out

    return ideal, lift, coords


def _words(ideal: dict, top_internal: int, n: int) -> list[BarWord]:
    """All bar words of total degree n, sorted by length, letter degrees, letter indices."""
    out = []

    def comps(total):
        if total == 0:
            yield ()
            return
        for first in range(1, total + 1):
            if first - 1 > top_internal:
                break
            for rest in comps(total - first):
                yield (first - 1,) + rest

    shapes = sorted(comps(n), key=lambda s: (len(s), s))
    for shape in shapes:
        choices = [range(len(ideal.get(dg, []))) for dg in shape]
        for idx in itertools.product(*choices):
            out.append(BarWord(tuple(zip(shape, idx))))
    return out


def dg_bar(a, up_to: int) -> DGAlgebra:
    """Bar construction of an augmented commutative dg algebra with the shuffle product.

    Words [a_1|...|a_k] of ideal elements have degree sum(|a_i| + 1). With
    e_i = sum_{j<i} (|a_j| + 1) the differential is
        d = -sum_i (-1)^e_i [..|d a_i|..] + sum_{i>=2} (-1)^e_i [..|a_(i-1) a_i|..].
    Every word of total degree <= up_to is present (internal degrees of
    ``a`` must be stored that far). The product interleaves letters with the
    Koszul sign of moving suspended letters past each other.
    """
    if isinstance(a, AugCommAlgebra):
        a = DGAlgebra.from_algebra(a)
    if up_to < 0:
        raise TruncationTooLow("up_to must be nonnegative")
    if not a.complex.complete and a.top < up_to - 1:
        raise TruncationTooLow(f"internal degrees up to {up_to - 1} are needed; algebra stops at {a.top}")
    top_int = a.top if a.complex.complete else min(a.top, up_to - 1)
    mod = a.modulus
    ideal, lift, coords = _ideal_data(a)
    words = [_words(ideal, top_int, n) for n in range(up_to + 1)]
    index = [{w: k for k, w in enumerate(ws)} for ws in words]

    def letter_prod(l1, l2) -> dict:
        (d1, k1), (d2, k2) = l1, l2
        if d1 + d2 > a.top:
            return {}
        v = np.kron(lift(d1, k1), lift(d2, k2))
        out_vec = np.asarray(a.mult(d1, d2).apply(v.tolist()), dtype=object)
        return {(d1 + d2, k): c for k, c in coords(d1 + d2, np.asarray(out_vec, dtype=np.int64)).items()}

    def letter_diff(l) -> dict:
        d1, k1 = l
        if d1 == 0:
            return {}
        out_vec = np.asarray(a.complex.d(d1).apply(lift(d1, k1).tolist()), dtype=np.int64)
        return {(d1 - 1, k): c for k, c in coords(d1 - 1, out_vec).items()}

    diffs = [IntMatrix(0, len(words[0]))]
    for n in range(1, up_to + 1):
        r, c, v = [], [], []
        for col, w in enumerate(words[n]):
            L = w.letters
            e = 0
            for i, (dg, _k) in enumerate(L):
                for nl, coef in letter_diff(L[i]).items():
                    new = BarWord(L[:i] + (nl,) + L[i + 1:])
                    r.append(index[n - 1][new])
                    c.append(col)
                    v.append(-coef * (-1) ** e)
                if i >= 1:
                    for nl, coef in letter_prod(L[i - 1], L[i]).items():
                        new = BarWord(L[:i - 1] + (nl,) + L[i + 1:])
                        r.append(index[n - 1][new])
                        c.append(col)
                        v.append(coef * (-1) ** e)
                e += dg + 1
        diffs.append(IntMatrix(len(words[n - 1]), len(words[n]), r, c, v).mod(mod))
    cx = ChainComplex([len(ws) for ws in words], diffs, _coeffs(mod), name=f"B({a.complex.name})")

    product = {}
    for i in range(up_to + 1):
        for j in range(up_to + 1 - i):
            r, c, v = [], [], []
            nj = len(words[j])
            for x, w1 in enumerate(words[i]):
                for y, w2 in enumerate(words[j]):
                    for w, sign in shuffle_words(w1, w2):
                        r.append(index[i + j][w])
                        c.append(x * nj + y)
                        v.append(sign)
            product[(i, j)] = IntMatrix(len(words[i + j]), len(words[i]) * nj, r, c, v).mod(mod)
    aug = np.zeros(len(words[0]), dtype=np.int64)
    aug[0] = 1
    return DGAlgebra(cx, product, 0, aug, mod, [_word_name(w, a) for w in words[0]])


def shuffle_words(w1: BarWord, w2: BarWord) -> Iterator[tuple[BarWord, int]]:
    """Interleavings of two words with the Koszul sign of the suspended letters."""
    k, l = len(w1.letters), len(w2.letters)
    for mu, nu, _ in shuffles(k, l):
        merged = [None] * (k + l)
        for pos, letter in zip(mu, w1.letters):
            merged[pos] = letter
        for pos, letter in zip(nu, w2.letters):
            merged[pos] = letter
        sign = 0
        for a_pos, la in zip(mu, w1.letters):
            for b_pos, lb in zip(nu, w2.letters):
                if b_pos < a_pos:
                    sign += (la[0] + 1) * (lb[0] + 1)
        yield BarWord(tuple(merged)), -1 if sign % 2 else 1


def _word_name(w: BarWord, a: DGAlgebra) -> str:
    return "[" + "|".join(f"{d}:{k}" for d, k in w.letters) + "]"


def bar_words(a, up_to: int) -> list[list[BarWord]]:
    """The basis words of dg_bar(a, up_to) in each degree."""
    if isinstance(a, AugCommAlgebra):
        a = DGAlgebra.from_algebra(a)
    ideal, _, _ = _ideal_data(a)
    top_int = a.top if a.complex.complete else min(a.top, up_to - 1)
    return [_words(ideal, top_int, n) for n in range(up_to + 1)]


__all__ = [
    "BarWord", "ChainMap", "DGAlgebra", "DGReport", "DoldPuppeReport", "Normalized", "alexander_whitney",
    "bar_words", "condense", "dg_bar", "dold_puppe_compare", "ez_shuffle", "shuffle_words", "shuffles",
    "tensor_complex",
]
