"""The graded multiplication B^n S x B^m S -> B^(n+m) S and its checks.

The product is defined recursively: on B^0 it is the ring product, a B^0
element multiplies a tuple componentwise, and a tuple in the first argument
distributes over its components. Unwinding the recursion, the leaf of the
result at index path (I, J) is y_I * x_J, a Kronecker product of leaf
vectors with the first argument outermost.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .bar import NestedTuple, nested_from_leaves, nested_to_leaves, validate_nested
from .config import check_cap
from .dg import shuffles
from .errors import ResourceBudgetExceeded, ShapeMismatch, TruncationTooLow
from .exact_linalg import IntMatrix, nullspace_mod_p, rref_mod_p, solve_mod_p
from .rings import FiniteRing, GroupRingStructure
from .simplicial import GridSimplicialSet, LinearizedModule, SimplicialAlgebra
from .simplicial.chains import nondegenerate_basis
from .simplicial.sets import bar_degen_axis, bar_face_axis, decode_leaves, encode_leaves, leaf_dtype
from .simplicial.terms import TermState

# ---------------------------------------------------------------------------
# pointwise evaluation


def _check_element(s: FiniteRing, t, n, p, what):
    try:
        validate_nested(t, n, p, lambda x: isinstance(x, (int, np.integer)) and 0 <= x < s.size)
    except ShapeMismatch as exc:
        raise ShapeMismatch(f"{what}: {exc}") from None


def cup_eval(s: FiniteRing, n: int, m: int, p: int, y: NestedTuple, x: NestedTuple) -> NestedTuple:
    """Literal recursive evaluation of y cup x at level p."""
    _check_element(s, y, n, p, "first argument")
    _check_element(s, x, m, p, "second argument")
    return _cup_rec(s, n, m, y, x)


def _cup_rec(s, n, m, y, x):
    if n == 0 and m == 0:
        return int(s.mul[y, x])
    if n == 0:
        return tuple(_cup_rec(s, 0, m - 1, y, xk) for xk in x)
    return tuple(_cup_rec(s, n - 1, m, yk, x) for yk in y)


def cup_closed_form(s: FiniteRing, n: int, m: int, p: int, y: NestedTuple, x: NestedTuple) -> NestedTuple:
    """Leaf (I, J) of the result is y_I * x_J."""
    _check_element(s, y, n, p, "first argument")
    _check_element(s, x, m, p, "second argument")
    ly = nested_to_leaves(y, n)
    lx = nested_to_leaves(x, m)
    return nested_from_leaves([int(s.mul[a, b]) for a in ly for b in lx], n + m, p)


# ---------------------------------------------------------------------------
# vectorized forms on leaf grids of shape (batch,) + (p,)*depth


def cup_grid(mul: Callable, y: np.ndarray, x: np.ndarray, n: int, m: int) -> np.ndarray:
    """Closed form on batches (batches broadcast)."""
    b = max(y.shape[0], x.shape[0])
    p = (y.shape[1:] + x.shape[1:] + (0,))[0]
    yy = y.reshape(y.shape[0], -1)[:, :, None]
    xx = x.reshape(x.shape[0], -1)[:, None, :]
    out = mul(yy, xx)
    return np.broadcast_to(out, (b,) + out.shape[1:]).reshape((b,) + (p,) * (n + m))


def cup_grid_recursive(mul: Callable, y: np.ndarray, x: np.ndarray, n: int, m: int) -> np.ndarray:
    """The recursion itself, vectorized over the batch axis."""
    if n == 0 and m == 0:
        return mul(y, x)
    p = x.shape[1] if n == 0 else y.shape[1]
    if p == 0:
        b = max(y.shape[0], x.shape[0])
        return np.zeros((b,) + (0,) * (n + m), dtype=np.result_type(y, x))
    if n == 0:
        return np.stack([cup_grid_recursive(mul, y, x[:, k], 0, m - 1) for k in range(p)], axis=1)
    return np.stack([cup_grid_recursive(mul, y[:, k], x, n - 1, m) for k in range(p)], axis=1)


def _lut(table: np.ndarray) -> Callable:
    """Binary operation given by a q x q table, as a flat lookup on leaf arrays."""
    q = table.shape[0]
    flat = np.ascontiguousarray(table).ravel()
    idx = np.uint8 if q * q <= 256 else (np.uint16 if q * q <= 65536 else np.int64)
    scale = idx(q)

    def op(a, b):
        return flat.take(np.asarray(a).astype(idx, copy=False) * scale + np.asarray(b).astype(idx, copy=False))

    return op


def _ring_mul(s: FiniteRing):
    return _lut(s.mul.astype(leaf_dtype(s.size)))


def _ring_add(s: FiniteRing):
    return _lut(s.add.astype(leaf_dtype(s.size)))


def grids(q: int, depth: int, p: int, chunk: int = 1 << 18) -> Iterator[np.ndarray]:
    """All leaf grids of the given depth at level p, in index order, in chunks."""
    length = p**depth
    total = q**length
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(total, lo + chunk))
        yield decode_leaves(idx, q, length).reshape((len(idx),) + (p,) * depth)


def _count(q, depth, p):
    return q ** (p**depth)


# ---------------------------------------------------------------------------
# recursion vs closed form


@dataclass
class CupFormCheck:
    ring: str
    n: int
    m: int
    p: int
    method: str
    checked: int
    mismatches: int
    witness: str | None = None


def _universal_check(n: int, m: int, p: int) -> bool:
    """Run both forms on free symbols: leaves y_I = I, x_J = J and product = the pair (I, J)."""
    ly, lx = p**n, p**m
    y = np.arange(ly).reshape((1,) + (p,) * n)
    x = np.arange(lx).reshape((1,) + (p,) * m)
    pair = lambda a, b: a * max(lx, 1) + b  # noqa: E731
    return np.array_equal(cup_grid_recursive(pair, y, x, n, m), cup_grid(pair, y, x, n, m))


def check_cup_forms(s: FiniteRing, n: int, m: int, p: int, budget: int = 1 << 25, samples: int = 20000,
                    seed: int = 0) -> CupFormCheck:
    """Compare recursion and closed form on every pair when the pair count fits ``budget``.

    Larger domains are settled on the free universal instance (which covers
    every ring and every input at once) plus a random sample of real pairs.
    """
    mul = _ring_mul(s)
    q = s.size
    ny, nx = _count(q, n, p), _count(q, m, p)
    if ny * nx <= budget:
        checked = bad = 0
        witness = None
        for ys in grids(q, n, p, chunk=max(1, (1 << 20) // max(1, nx))):
            for xs in grids(q, m, p, chunk=max(1, (1 << 20) // max(1, len(ys)))):
                yy = np.repeat(ys, len(xs), axis=0)
                xx = np.tile(xs, (len(ys),) + (1,) * m)
                r1 = cup_grid_recursive(mul, yy, xx, n, m)
                r2 = cup_grid(mul, yy, xx, n, m)
                diff = (r1 != r2).reshape(len(yy), -1).any(axis=1)
                checked += len(yy)
                if diff.any():
                    k = int(np.flatnonzero(diff)[0])
                    bad += int(diff.sum())
                    witness = witness or f"Y={yy[k].ravel().tolist()} X={xx[k].ravel().tolist()}"
        return CupFormCheck(s.name, n, m, p, "exhaustive", checked, bad, witness)
    ok = _universal_check(n, m, p)
    rng = np.random.default_rng(seed)
    yy = rng.integers(0, q, size=(samples,) + (p,) * n).astype(leaf_dtype(q))
    xx = rng.integers(0, q, size=(samples,) + (p,) * m).astype(leaf_dtype(q))
    diff = (cup_grid_recursive(mul, yy, xx, n, m) != cup_grid(mul, yy, xx, n, m)).reshape(samples, -1).any(axis=1)
    bad = int(diff.sum()) + (0 if ok else 1)
    witness = None if ok else "universal instance differs"
    return CupFormCheck(s.name, n, m, p, "universal+sampled", samples + 1, bad, witness)


# ---------------------------------------------------------------------------
# graded ring axioms


@dataclass
class AxiomResult:
    axiom: str
    degrees: tuple
    p: int
    passed: bool
    checked: int
    method: str = "exhaustive"
    witness: str | None = None

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom, "degrees": list(self.degrees), "p": self.p, "passed": self.passed,
            "checked": self.checked, "method": self.method, "witness": self.witness,
        }


@dataclass
class GradedRingReport:
    ring: str
    n_max: int
    p_max: int
    results: list[AxiomResult] = field(default_factory=list)
    measurements: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.passed]

    def summary(self) -> dict[str, bool]:
        out: dict[str, bool] = {}
        for r in self.results:
            out[r.axiom] = out.get(r.axiom, True) and r.passed
        return out

    def to_dict(self) -> dict:
        return {
            "ring": self.ring, "n_max": self.n_max, "p_max": self.p_max, "ok": self.ok,
            "summary": self.summary(), "results": [r.to_dict() for r in self.results],
            "measurements": self.measurements,
        }


def _first_bad(a: np.ndarray, b: np.ndarray) -> int | None:
    diff = (a != b).reshape(a.shape[0], -1).any(axis=1)
    return int(np.flatnonzero(diff)[0]) if diff.any() else None


def _fmt(*arrs) -> str:
    return " ; ".join(str(np.asarray(a).ravel().tolist()) for a in arrs)


def _pairs(q, n, m, p, target=1 << 20) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """All (Y, X) pairs in aligned batches; the smaller side is iterated outside."""
    for _, y, x in _blocks(q, n, m, p, target, broadcast=False):
        yield y, x


def _blocks(q, n, m, p, target=1 << 20, broadcast=True) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """All (Y, X) pairs as (chunk id, Y, X) with batches that broadcast against each other.

    When one side has at most 4096 elements, chunks of the larger side are the
    outer loop and the smaller side is fed one element (batch 1) at a time, so
    per-chunk work on the larger side can be cached under the chunk id.
    """
    ny, nx = _count(q, n, p), _count(q, m, p)
    small_y = ny <= nx
    ns, nb = (ny, nx) if small_y else (nx, ny)
    ds, db = (n, m) if small_y else (m, n)
    if broadcast and ns <= 4096:
        for cid, big in enumerate(grids(q, db, p, chunk=target)):
            for el in grids(q, ds, p, chunk=1):
                yield (cid, el, big) if small_y else (cid, big, el)
        return
    cid = 0
    for ss in grids(q, ds, p, chunk=max(1, target // nb) if nb <= target else 1):
        for bs in grids(q, db, p, chunk=target):
            a = np.repeat(ss, len(bs), axis=0)
            b = np.tile(bs, (len(ss),) + (1,) * db)
            yield (cid, a, b) if small_y else (cid, b, a)
            cid += 1


def _face_grid(arr, depth, i, add_table):
    for ax in range(1, depth + 1):
        arr = bar_face_axis(arr, ax, i, add_table)
    return arr


def _degen_grid(arr, depth, i, zero):
    for ax in range(1, depth + 1):
        arr = bar_degen_axis(arr, ax, i, zero)
    return arr


def _additive_generators(s: FiniteRing) -> list[int]:
    """A small generating set of (S, +), chosen greedily from 1, 2, ..."""
    gens: list[int] = []
    span = {s.zero}
    for g in range(s.size):
        if g in span:
            continue
        gens.append(g)
        frontier = set(span)
        while True:
            new = {int(s.add[a, h]) for a in frontier for h in gens} - span
            if not new:
                break
            span |= new
            frontier = new
        if len(span) == s.size:
            break
    return gens


def check_graded_ring_axioms(s: FiniteRing, n_max: int, p_max: int, budget: int = 1 << 27) -> GradedRingReport:
    """Exhaustive axiom suite for cup on B^* S, degrees n + m <= n_max, levels p <= p_max.

    Checks that cup commutes with every face and degeneracy, associativity,
    the two-sided unit and both distributivity laws. A distributivity domain
    whose size exceeds ``budget`` is checked in generator-reduced form: f(A + g)
    = f(A) + f(g) for every A and every g in a generating set of the additive
    group, which implies additivity of f.
    """
    q = s.size
    # the sweep streams chunks; the cap bounds the largest level it enumerates
    check_cap(f"axiom sweep over B^{n_max}({s.name}) at level {p_max}", q ** (p_max**n_max))
    mul, add = _ring_mul(s), _ring_add(s)
    zero, one = s.zero, s.one
    rep = GradedRingReport(s.name, n_max, p_max)
    degs = [(n, m) for n in range(n_max + 1) for m in range(n_max + 1 - n)]

    for p in range(p_max + 1):
        # (a) faces and degeneracies; maps of the larger factor are cached per chunk
        ops = [("d", i) for i in range(p + 1 if p >= 1 else 0)]
        ops += [("s", i) for i in range(p + 1)] if p < p_max else []

        def apply(op, arr, depth):
            kind, i = op
            return _face_grid(arr, depth, i, add) if kind == "d" else _degen_grid(arr, depth, i, zero)

        for n, m in degs:
            checked, wit, cache = 0, None, (None, {})
            for cid, y, x in _blocks(q, n, m, p):
                batch = max(len(y), len(x))
                checked += batch
                if wit is not None:
                    continue
                if cache[0] != cid:
                    cache = (cid, {})
                big_is_x = len(x) >= len(y)
                prod = cup_grid(mul, y, x, n, m)
                for op in ops:
                    key = (op, big_is_x)
                    if key not in cache[1]:
                        cache[1][key] = apply(op, x, m) if big_is_x else apply(op, y, n)
                    fx = cache[1][key] if big_is_x else apply(op, x, m)
                    fy = apply(op, y, n) if big_is_x else cache[1][key]
                    k = _first_bad(apply(op, prod, n + m), cup_grid(mul, fy, fx, n, m))
                    if k is not None:
                        wit = f"{op[0]}_{op[1]}: Y,X = {_fmt(y[min(k, len(y) - 1)], x[min(k, len(x) - 1)])}"
                        break
            rep.results.append(AxiomResult("simplicial", (n, m), p, wit is None, checked, witness=wit))

        # (b) associativity; the smallest factor is iterated element by element
        for n1 in range(n_max + 1):
            for n2 in range(n_max + 1 - n1):
                for n3 in range(n_max + 1 - n1 - n2):
                    dgs = (n1, n2, n3)
                    small = min(range(3), key=lambda t: (_count(q, dgs[t], p), t))
                    a_, b_ = [t for t in range(3) if t != small]
                    checked, wit = 0, None
                    for el in grids(q, dgs[small], p, chunk=1):
                        for _, ga, gb in _blocks(q, dgs[a_], dgs[b_], p):
                            args = [None, None, None]
                            args[small], args[a_], args[b_] = el, ga, gb
                            y, x, z = args
                            lhs = cup_grid(mul, cup_grid(mul, y, x, n1, n2), z, n1 + n2, n3)
                            rhs = cup_grid(mul, y, cup_grid(mul, x, z, n2, n3), n1, n2 + n3)
                            checked += len(lhs)
                            if wit is None:
                                k = _first_bad(lhs, rhs)
                                if k is not None:
                                    pick = [a[min(k, len(a) - 1)] for a in (y, x, z)]
                                    wit = f"X,Y,Z = {_fmt(*pick)}"
                    rep.results.append(AxiomResult("associativity", dgs, p, wit is None, checked, witness=wit))

        # (c) units: the unit is `one` in B^0
        unit = np.full((1,), one, dtype=leaf_dtype(q))
        for m in range(n_max + 1):
            checked, wit = 0, None
            for x in grids(q, m, p):
                left = cup_grid(mul, unit, x, 0, m)
                right = cup_grid(mul, x, unit, m, 0)
                checked += len(x)
                for lhs, side in ((left, "left"), (right, "right")):
                    k = _first_bad(lhs, x)
                    if k is not None and wit is None:
                        wit = f"{side} unit fails on X = {_fmt(x[k])}"
            rep.results.append(AxiomResult("unit", (0, m), p, wit is None, checked, witness=wit))

        # (d) distributivity over the levelwise sum
        for n, m in degs:
            for side in ("left", "right"):
                # side "left": Y cup (X + X'); "right": (Y + Y') cup X
                var_deg, fix_deg = (m, n) if side == "left" else (n, m)

                def f(a, fixed, side=side, n=n, m=m):
                    return cup_grid(mul, fixed, a, n, m) if side == "left" else cup_grid(mul, a, fixed, n, m)

                n_var = _count(q, var_deg, p)
                domain = _count(q, fix_deg, p) * n_var * n_var
                if domain <= budget:
                    method = "exhaustive"
                    others = list(grids(q, var_deg, p, chunk=1))
                else:
                    # f(A + g) = f(A) + f(g) over generators g = s e_leaf implies additivity
                    method = "generator-reduced"
                    others = []
                    length = p**var_deg
                    for leaf in range(length):
                        for g in _additive_generators(s):
                            flat = np.full(length, zero, dtype=leaf_dtype(q))
                            flat[leaf] = g
                            others.append(flat.reshape((1,) + (p,) * var_deg))
                checked, wit = 0, None
                for _, fixed_a, a1 in _blocks(q, fix_deg, var_deg, p):
                    if wit is not None:
                        checked += max(len(fixed_a), len(a1)) * len(others)
                        continue
                    fa1 = f(a1, fixed_a)
                    for a2 in others:
                        lhs = f(add(a1, a2), fixed_a)
                        rhs = add(fa1, f(a2, fixed_a))
                        checked += len(lhs)
                        k = _first_bad(lhs, rhs)
                        if k is not None and wit is None:
                            wit = (f"{side}: fixed={_fmt(fixed_a[min(k, len(fixed_a) - 1)])} "
                                   f"a={_fmt(a1[min(k, len(a1) - 1)])} b={_fmt(a2[0])}")
                            break
                rep.results.append(
                    AxiomResult(f"distributivity ({side})", (n, m), p, wit is None, checked, method, wit))

    rep.measurements["commutativity_up_to_index_swap"] = _measure_commutativity(s, n_max, p_max)
    return rep


def _measure_commutativity(s: FiniteRing, n_max: int, p_max: int) -> dict:
    """Fraction of pairs with Y cup X equal to X cup Y after swapping index blocks (reported only)."""
    mul = _ring_mul(s)
    out = {}
    for n in range(n_max + 1):
        for m in range(n_max + 1 - n):
            for p in range(1, p_max + 1):
                if _count(s.size, n, p) * _count(s.size, m, p) > 1 << 20:
                    continue
                same = total = 0
                for y, x in _pairs(s.size, n, m, p):
                    a = cup_grid(mul, y, x, n, m)
                    b = cup_grid(mul, x, y, m, n)
                    b = np.moveaxis(b.reshape((len(y),) + (p,) * (n + m)),
                                    list(range(1 + m, 1 + m + n)) + list(range(1, 1 + m)),
                                    list(range(1, 1 + n + m)))
                    same += int((a == b).reshape(len(y), -1).all(axis=1).sum())
                    total += len(y)
                out[f"{n},{m},p={p}"] = same / total if total else 1.0
    return out


# ---------------------------------------------------------------------------
# homology circle product


@dataclass
class HomologyPairing:
    """Matrix of H_i(B^n S; k) (x) H_j(B^m S; k) -> H_(i+j)(B^(n+m) S; k) in the computed bases.

    Column a * dim_j + b is the image of (basis_i[a], basis_j[b]).
    """

    ring: str
    p: int
    source: tuple[tuple[int, int], tuple[int, int]]
    target: tuple[int, int]
    dims: tuple[int, int, int]
    matrix: np.ndarray
    perturbations: int = 0
    representative_independent: bool = True

    def to_dict(self) -> dict:
        return {
            "ring": self.ring, "coeff": f"F{self.p}",
            "source": [list(self.source[0]), list(self.source[1])], "target": list(self.target),
            "dims": list(self.dims), "matrix": self.matrix.tolist(),
            "perturbations": self.perturbations,
            "representative_independent": self.representative_independent,
        }


class _HomologyData:
    """Normalized chains of k[X] around one degree, with a homology basis."""

    def __init__(self, x: GridSimplicialSet, deg: int, p: int):
        self.x, self.deg, self.p = x, deg, p
        self.nd = {d: nondegenerate_basis(x, d) for d in (deg - 1, deg, deg + 1) if d >= 0}
        self.pos = {}
        for d, b in self.nd.items():
            look = np.full(x.size(d), -1, dtype=np.int64)
            look[b] = np.arange(len(b))
            self.pos[d] = look
        self.d_out = self._diff(deg) if deg >= 1 else np.zeros((0, len(self.nd[deg])), dtype=np.int64)
        self.d_in = self._diff(deg + 1)
        cycles = nullspace_mod_p(self.d_out, p) if self.d_out.shape[0] else np.eye(len(self.nd[deg]), dtype=np.int64)
        bnd, _ = rref_mod_p(self.d_in.T, p) if self.d_in.size else (np.zeros((0, len(self.nd[deg])), np.int64), [])
        self.boundaries = bnd
        reps = []
        span = bnd.copy()
        rank = span.shape[0]
        for z in cycles:
            trial = np.vstack([span, z[None, :]]) if span.size else z[None, :]
            r = len(rref_mod_p(trial, p)[1])
            if r > rank:
                reps.append(z)
                span, rank = trial, r
        self.reps = np.array(reps, dtype=np.int64).reshape(len(reps), len(self.nd[deg]))

    def _diff(self, d: int) -> np.ndarray:
        rows, cols = len(self.nd[d - 1]), len(self.nd[d])
        out = np.zeros((rows, cols), dtype=np.int64)
        for i in range(d + 1):
            tgt = self.pos[d - 1][self.x.face(d, i)[self.nd[d]]]
            keep = tgt >= 0
            np.add.at(out, (tgt[keep], np.flatnonzero(keep)), 1 if i % 2 == 0 else -1)
        return out % self.p

    @property
    def dim(self) -> int:
        return self.reps.shape[0]

    def coordinates(self, chain: np.ndarray) -> np.ndarray:
        """Coordinates of a cycle (on all simplices of the degree) in the homology basis."""
        v = chain[self.nd[self.deg]] % self.p
        if (self.d_out @ v % self.p).any():
            raise ArithmeticError("image is not a cycle")
        basis = np.vstack([self.reps, self.boundaries]) if self.boundaries.size else self.reps
        sol = solve_mod_p(basis.T, v, self.p)
        if sol is None:
            raise ArithmeticError("cycle outside the span of the homology basis")
        return sol[: self.dim] % self.p


def _cross_then_cup(s: FiniteRing, xa: GridSimplicialSet, ya: GridSimplicialSet, z: GridSimplicialSet,
                    a: np.ndarray, b: np.ndarray, i: int, j: int, n: int, m: int, p: int) -> np.ndarray:
    """Chain in degree i+j of k[B^(n+m) S]: shuffle product of a and b, then cup on each simplex."""
    out = np.zeros(z.size(i + j), dtype=np.int64)
    ai = np.flatnonzero(a % p)
    bi = np.flatnonzero(b % p)
    mul = _ring_mul(s)
    for mu, nu, sign in shuffles(i, j):
        sa = ai.copy()
        for lvl, k in enumerate(nu):
            sa = xa.degen(i + lvl, k)[sa]
        sb = bi.copy()
        for lvl, k in enumerate(mu):
            sb = ya.degen(j + lvl, k)[sb]
        ga = xa.leaves(i + j, sa)
        gb = ya.leaves(i + j, sb)
        yy = np.repeat(ga, len(gb), axis=0)
        xx = np.tile(gb, (len(ga),) + (1,) * m)
        prod = cup_grid(mul, yy, xx, n, m)
        idx = encode_leaves(prod, s.size)
        coef = np.outer(a[ai], b[bi]).ravel() * sign
        np.add.at(out, idx, coef)
    return out % p


def homology_circle_product(s: FiniteRing, p: int, n: int, m: int, i: int, j: int,
                            truncation: int | None = None, perturbations: int = 10,
                            seed: int = 0) -> HomologyPairing:
    """Pairing on homology induced by the shuffle map followed by cup."""
    need = i + j + 1
    t = need if truncation is None else truncation
    if t < need:
        raise TruncationTooLow(f"the pairing needs truncation >= {need}")
    xa = GridSimplicialSet(s, n, max(t, i + j + 1))
    ya = GridSimplicialSet(s, m, max(t, i + j + 1))
    z = GridSimplicialSet(s, n + m, t)
    hx, hy, hz = _HomologyData(xa, i, p), _HomologyData(ya, j, p), _HomologyData(z, i + j, p)

    def full(h: _HomologyData, v):
        out = np.zeros(h.x.size(h.deg), dtype=np.int64)
        out[h.nd[h.deg]] = v
        return out

    def pairing(reps_x, reps_y):
        cols = []
        for a in reps_x:
            for b in reps_y:
                chain = _cross_then_cup(s, xa, ya, z, full(hx, a), full(hy, b), i, j, n, m, p)
                cols.append(hz.coordinates(chain))
        return np.array(cols, dtype=np.int64).T.reshape(hz.dim, hx.dim * hy.dim)

    base = pairing(hx.reps, hy.reps)
    rng = np.random.default_rng(seed)
    stable = True
    for _ in range(perturbations):
        def perturb(h):
            if h.boundaries.size == 0:
                return h.reps
            c = rng.integers(0, p, size=(h.reps.shape[0], h.boundaries.shape[0]))
            return (h.reps + c @ h.boundaries) % p
        if not np.array_equal(pairing(perturb(hx), perturb(hy)), base):
            stable = False
    return HomologyPairing(s.name, p, ((n, i), (m, j)), (n + m, i + j), (hx.dim, hy.dim, hz.dim),
                           base, perturbations, stable)


# ---------------------------------------------------------------------------
# naturality of linearization


@dataclass
class NaturalityReport:
    ring: str
    p: int
    n_max: int
    level_max: int
    checks: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def mismatches(self) -> list[dict]:
        return [c for c in self.checks if not c["passed"]]

    def to_dict(self) -> dict:
        return {"ring": self.ring, "coeff": f"F{self.p}", "n_max": self.n_max, "level_max": self.level_max,
                "ok": self.ok, "checks": self.checks}


def algebra_cup_matrix(gs: GroupRingStructure, n: int, m: int, p: int) -> IntMatrix:
    """cup on B^n k[S] (x) B^m k[S] built from the coalgebraic-ring structure of k[S].

    Literal recursion on terms: B^0 x B^0 uses the product induced by the ring
    multiplication; a degree-0 factor is split by the p-fold coproduct and
    paired with each component; a tuple in the first argument distributes
    after splitting the second argument by its p-fold coproduct.
    """
    d = gs.ring.size
    ly, lx = p**n, p**m
    check_cap("cup matrix", d ** (ly + lx))
    st = TermState.basis(d, gs.modulus, ly + lx)

    def shape(cols, depth):
        # nested blocks of column ids
        if depth == 0:
            return cols[0]
        step = p ** (depth - 1)
        return [shape(cols[k * step:(k + 1) * step], depth - 1) for k in range(p)]

    def flat(tree, depth):
        if depth == 0:
            return [tree]
        return [c for sub in tree for c in flat(sub, depth - 1)]

    def copies_of(tree, depth, k):
        """k-fold coproduct of a tensor of leaves: each leaf split k ways, regrouped."""
        leaves = flat(tree, depth)
        split = [st.copies(c, gs.delta, gs.counit, k) for c in leaves]
        out = []
        for r in range(k):
            out.append(shape([split[t][r] for t in range(len(leaves))], depth) if leaves else tree)
        return out

    def rec(y, x, a, b):
        if a == 0 and b == 0:
            return st.apply([y, x], gs.times, 1)[0]
        if a == 0:
            parts = st.copies(y, gs.delta, gs.counit, p)
            return [rec(parts[k], x[k], 0, b - 1) for k in range(p)]
        xs = copies_of(x, b, p)
        return [rec(y[k], xs[k], a - 1, b) for k in range(p)]

    y_tree = shape(list(range(ly)), n) if ly else []
    x_tree = shape(list(range(ly, ly + lx)), m) if lx else []
    res = rec(y_tree, x_tree, n, m)
    return st.to_matrix(flat(res, n + m), d ** (ly + lx))


def set_cup_matrix(s: FiniteRing, n: int, m: int, p: int, transpose: bool = False) -> IntMatrix:
    """Linearization of the set map (Y, X) -> Y cup X; the pair has index Y * |X_p| + X."""
    q = s.size
    ny, nx = _count(q, n, p), _count(q, m, p)
    check_cap("cup matrix", ny * nx)
    y = decode_leaves(np.arange(ny), q, p**n)
    x = decode_leaves(np.arange(nx), q, p**m)
    yy = np.repeat(y, nx, axis=0)
    xx = np.tile(x, (ny, 1))
    if transpose:
        prod = s.mul[xx[:, None, :], yy[:, :, None]].transpose(0, 2, 1)
    else:
        prod = s.mul[yy[:, :, None], xx[:, None, :]]
    idx = encode_leaves(prod.reshape(ny * nx, -1), q)
    return IntMatrix.from_index_map(idx, q ** (p ** (n + m)))


def naturality_check(s: FiniteRing, p: int, n_max: int, level_max: int, *, transpose_fault: bool = False) -> NaturalityReport:
    """Compare k[B^n S] with B^n k[S] under the basis identification of pure tensors."""
    gs = GroupRingStructure.of(s, p)
    from .rings import AugCommAlgebra

    alg = AugCommAlgebra.group_algebra(s, p)
    rep = NaturalityReport(s.name, p, n_max, level_max)

    def record(kind, n, lvl, a: IntMatrix, b: IntMatrix, extra=""):
        passed = a == b
        entry = {"check": kind, "n": n, "p": lvl, "passed": bool(passed)}
        if extra:
            entry["detail"] = extra
        if not passed:
            d = (a - b).mod(p)
            entry["witness_column"] = int(d.col.min()) if d.nnz else None
        rep.checks.append(entry)

    for n in range(n_max + 1):
        xs = GridSimplicialSet(s, n, level_max)
        lin = LinearizedModule(xs, p)
        ba = SimplicialAlgebra(alg, n, level_max, coalgebra=(gs.delta, gs.counit))
        for lvl in range(level_max + 1):
            for i in range(lvl + 1):
                if lvl >= 1:
                    record("face", n, lvl, lin.face(lvl, i), ba.face(lvl, i), f"d_{i}")
                if lvl < level_max:
                    record("degeneracy", n, lvl, lin.degen(lvl, i), ba.degen(lvl, i), f"s_{i}")
            record("comultiplication", n, lvl, lin.comultiplication(lvl), ba.comultiplication(lvl))
            record("counit", n, lvl, lin.counit(lvl), ba.counit(lvl))
            record("unit", n, lvl, IntMatrix.from_index_map(
                [encode_leaves(np.full((1, xs.leaf_count(lvl)), s.zero), s.size)[0]], xs.size(lvl)), ba.unit(lvl))
            # products, compared in row blocks to keep memory bounded
            size = xs.size(lvl)
            ok = True
            d, L = alg.dim, xs.leaf_count(lvl)
            unit = np.zeros(d, dtype=np.int64)
            unit[alg.unit] = 1
            all_l = decode_leaves(np.arange(size), d, L).astype(np.int64)
            block = max(1, (1 << 20) // max(1, size))
            for lo in range(0, size, block):
                rows = np.arange(lo, min(size, lo + block))
                left = [np.repeat(all_l[rows, j], size) for j in range(L)]
                right = [np.tile(all_l[:, j], len(rows)) for j in range(L)]
                expect = np.zeros(len(rows) * size, dtype=np.int64)
                for j in range(L):
                    expect = expect * s.size + s.add[left[j], right[j]]
                st = TermState.from_columns(d, p, left + right, len(expect))
                outs = [st.fold([c, L + c], alg.mul, unit) for c in range(L)]
                got = np.zeros(st.n_terms, dtype=np.int64)
                for c in outs:
                    got = got * d + st.cols[c]
                # each pair must map to exactly one basis tensor with coefficient 1
                if not (st.n_terms == len(expect) and np.array_equal(st.src, np.arange(len(expect)))
                        and (st.coef % p == 1).all() and np.array_equal(got, expect)):
                    ok = False
                    break
            rep.checks.append({"check": "product", "n": n, "p": lvl, "passed": ok})
    for n in range(n_max + 1):
        for m in range(n_max + 1 - n):
            for lvl in range(level_max + 1):
                a = set_cup_matrix(s, n, m, lvl, transpose=transpose_fault)
                b = algebra_cup_matrix(gs, n, m, lvl)
                record("cup", n, lvl, a, b, f"({n},{m})")
    return rep


# ---------------------------------------------------------------------------
# Hopf structure of k[B^n S]


@dataclass
class HopfReport:
    ring: str
    p: int
    n: int
    level_max: int
    checks: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_dict(self) -> dict:
        return {"ring": self.ring, "coeff": f"F{self.p}", "n": self.n, "level_max": self.level_max,
                "ok": self.ok, "checks": self.checks}


class _Bialgebra:
    """Dense structure tensors of k[X_p] for one level of B^n S."""

    def __init__(self, x: GridSimplicialSet, lvl: int, p: int):
        s = x.ring
        n_el = x.size(lvl)
        leaves = decode_leaves(np.arange(n_el), s.size, x.leaf_count(lvl)).astype(np.int64)
        summed = encode_leaves(s.add[leaves[:, None, :], leaves[None, :, :]].reshape(n_el * n_el, -1), s.size)
        negated = encode_leaves(s.neg[leaves], s.size)
        a, b = np.divmod(np.arange(n_el * n_el), n_el)
        self.n, self.p = n_el, p
        self.mu = np.zeros((n_el, n_el, n_el), dtype=np.int64)
        self.mu[a, b, summed] = 1
        self.delta = np.zeros((n_el, n_el, n_el), dtype=np.int64)
        self.delta[np.arange(n_el), np.arange(n_el), np.arange(n_el)] = 1
        self.eta = np.zeros(n_el, dtype=np.int64)
        self.eta[encode_leaves(np.full((1, leaves.shape[1]), s.zero), s.size)[0]] = 1
        self.eps = np.ones(n_el, dtype=np.int64)
        self.anti = np.zeros((n_el, n_el), dtype=np.int64)
        self.anti[negated, np.arange(n_el)] = 1


def _eq(a, b, p) -> bool:
    diff = np.rint(np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)).astype(np.int64)
    return not (diff % p).any()


def _ein(spec: str, *ops) -> np.ndarray:
    # structure tensors have small entries, so float64 contraction is exact here
    return np.einsum(spec, *[np.asarray(o, dtype=np.float64) for o in ops], optimize=True)


def _bialgebra_axioms(h: _Bialgebra) -> dict[str, bool]:
    mu, de, eta, eps, S, p = h.mu, h.delta, h.eta, h.eps, h.anti, h.p
    eye = np.eye(h.n, dtype=np.int64)
    out = {}
    out["associativity"] = _eq(_ein("abx,xcy->abcy", mu, mu), _ein("bcx,axy->abcy", mu, mu), p)
    out["commutativity"] = _eq(mu, mu.transpose(1, 0, 2), p)
    out["unit"] = _eq(_ein("a,abc->bc", eta, mu), eye, p) and _eq(_ein("b,abc->ac", eta, mu), eye, p)
    out["coassociativity"] = _eq(_ein("axb,xcd->acdb", de, de), _ein("acx,xdb->acdb", de, de), p)
    out["cocommutativity"] = _eq(de, de.transpose(0, 2, 1), p)
    out["counit"] = _eq(_ein("abc,b->ac", de, eps), eye, p) and _eq(_ein("abc,c->ab", de, eps), eye, p)
    # Delta(xy) = Delta(x) Delta(y)
    lhs = _ein("abx,xcd->abcd", mu, de)
    rhs = _ein("aik,bjl,ijc,kld->abcd", de, de, mu, mu)
    out["coproduct multiplicative"] = _eq(lhs, rhs, p)
    out["counit multiplicative"] = _eq(_ein("abc,c->ab", mu, eps), np.outer(eps, eps), p)
    out["coproduct of unit"] = _eq(_ein("a,abc->bc", eta, de), np.outer(eta, eta), p)
    out["counit of unit"] = _eq(eta @ eps, 1, p)
    # mu (S (x) id) Delta = eta eps = mu (id (x) S) Delta
    ee = np.outer(eps, eta)
    left = _ein("abc,ib,icd->ad", de, S.T, mu)
    right = _ein("abc,jc,bjd->ad", de, S.T, mu)
    out["antipode"] = _eq(left, ee, p) and _eq(right, ee, p)
    out["antipode involution"] = _eq(S @ S, eye, p)
    return out


def _is_bialgebra_map(f: np.ndarray, src: _Bialgebra, dst: _Bialgebra) -> dict[str, bool]:
    """f is a dense (dst.n x src.n) matrix."""
    p = src.p
    out = {}
    out["preserves product"] = _eq(_ein("abx,yx->aby", src.mu, f),
                                   _ein("ia,jb,ijy->aby", f, f, dst.mu), p)
    out["preserves coproduct"] = _eq(_ein("xa,xbc->abc", f, dst.delta),
                                     _ein("ajk,bj,ck->abc", src.delta, f, f), p)
    out["preserves unit"] = _eq(f @ src.eta, dst.eta, p)
    out["preserves counit"] = _eq(dst.eps @ f, src.eps, p)
    out["preserves antipode"] = _eq(f @ src.anti, dst.anti @ f, p)
    return out


def hopf_checks(s: FiniteRing, p: int, n: int, level_max: int) -> HopfReport:
    """Bicommutative Hopf algebra axioms on each level of k[B^n S], and that the
    structure maps of the simplicial object are Hopf algebra maps."""
    x = GridSimplicialSet(s, n, level_max)
    rep = HopfReport(s.name, p, n, level_max)
    levels = []
    for lvl in range(level_max + 1):
        size = x.size(lvl)
        check_cap(f"Hopf tensors at level {lvl}", size**3)
        levels.append(_Bialgebra(x, lvl, p))
        for name, ok in _bialgebra_axioms(levels[-1]).items():
            rep.checks.append({"check": name, "p": lvl, "passed": bool(ok)})

    def dense(index_map, rows):
        m = np.zeros((rows, len(index_map)), dtype=np.int64)
        m[index_map, np.arange(len(index_map))] = 1
        return m

    for lvl in range(1, level_max + 1):
        for i in range(lvl + 1):
            f = dense(x.face(lvl, i), x.size(lvl - 1))
            for name, ok in _is_bialgebra_map(f, levels[lvl], levels[lvl - 1]).items():
                rep.checks.append({"check": f"d_{i} {name}", "p": lvl, "passed": bool(ok)})
    for lvl in range(level_max):
        for i in range(lvl + 1):
            f = dense(x.degen(lvl, i), x.size(lvl + 1))
            for name, ok in _is_bialgebra_map(f, levels[lvl], levels[lvl + 1]).items():
                rep.checks.append({"check": f"s_{i} {name}", "p": lvl, "passed": bool(ok)})
    return rep


__all__ = [
    "AxiomResult", "CupFormCheck", "GradedRingReport", "HomologyPairing", "HopfReport", "NaturalityReport",
    "algebra_cup_matrix", "check_cup_forms", "check_graded_ring_axioms", "cup_closed_form", "cup_eval",
    "cup_grid", "cup_grid_recursive", "homology_circle_product", "hopf_checks", "naturality_check",
    "set_cup_matrix",
]
