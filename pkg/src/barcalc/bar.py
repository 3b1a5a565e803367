"""Simplicial bar construction, its realization and the iterated bar B^n.

Leaf convention: an element of level p of B^n S is a depth-n nested p-tuple;
its flattened leaf vector lists index paths (i_1, .., i_n) lexicographically,
with i_1 the outermost (last applied) bar level.
"""

from __future__ import annotations

from typing import Any, Callable, Sequence

import numpy as np

from .errors import IndexOutOfRange, InvalidInput, ShapeMismatch, TruncationTooLow
from .exact_linalg import FGAbelianGroup, IntMatrix
from .rings import AugCommAlgebra, FiniteRing, RingSpec
from .simplicial import (
    GridSimplicialSet,
    SimplicialAbGroup,
    SimplicialAlgebra,
    SimplicialKModule,
    constant_group,
)
from .simplicial.sets import bar_degen_matrix, bar_face_matrix
from .config import check_cap

NestedTuple = Any


def _resolve_ring(s) -> tuple[FGAbelianGroup, FiniteRing | None, str]:
    if isinstance(s, FiniteRing):
        return s.additive_group(), s, s.name
    spec = s if isinstance(s, RingSpec) else RingSpec.parse(str(s))
    ring = spec.ring() if spec.is_finite else None
    return spec.additive_group(), ring, str(spec)


# ---------------------------------------------------------------------------
# the two instances of the levelwise bar construction


def bar_simplicial_group(s, truncation: int) -> SimplicialAbGroup:
    """Nerve of the additive group of s: level p is G^p with the cartesian bar faces."""
    if truncation < 1:
        raise TruncationTooLow("truncation must be >= 1")
    group, ring, name = _resolve_ring(s)
    return SimplicialAbGroup(group, truncation, lambda p: p, bar_face_matrix, bar_degen_matrix,
                             ring=ring, name=f"B.({name})", bar_depth=1)


def _kron_all(mats: Sequence[IntMatrix]) -> IntMatrix:
    out = IntMatrix.identity(1)
    for m in mats:
        out = out.kron(m)
    return out


def _mult_matrix(a: AugCommAlgebra) -> IntMatrix:
    d = a.dim
    c, ab = np.nonzero(a.mul.reshape(d * d, d).T)
    return IntMatrix(d, d * d, c, ab, a.mul.reshape(d * d, d).T[c, ab]).mod(a.modulus)


def bar_simplicial_algebra(a: AugCommAlgebra, truncation: int) -> SimplicialKModule:
    """Reduced Hochschild object: level p is A^(x p), inner faces multiply, outer faces augment."""
    if truncation < 1:
        raise TruncationTooLow("truncation must be >= 1")
    d = a.dim
    mu = _mult_matrix(a)
    eps = IntMatrix(1, d, np.zeros(d), np.arange(d), a.augmentation).mod(a.modulus)
    eta = IntMatrix(d, 1, [a.unit], [0], [1])

    def eye(k):
        return IntMatrix.identity(d**k)

    def face(p, i):
        if i == 0:
            return eps.kron(eye(p - 1))
        if i == p:
            return eye(p - 1).kron(eps)
        return _kron_all([eye(i - 1), mu, eye(p - i - 1)])

    def degen(p, i):
        check_cap(f"level {p + 1} of B.({a.name})", d ** (p + 1))
        return _kron_all([eye(i), eta, eye(p - i)])

    def rank(p):
        check_cap(f"level {p} of B.({a.name})", d**p)
        return d**p

    return SimplicialKModule(a.modulus, truncation, rank, face, degen, name=f"B.({a.name})")


# ---------------------------------------------------------------------------
# realized bar construction B = diag B.


class BarModule(SimplicialKModule):
    """B of a simplicial module that is levelwise an augmented commutative algebra.

    The input must provide ``product(p)``, ``unit(p)`` and ``augmentation(p)``.
    Level p is (M_p)^(x p); d_i = (bar face of M_(p-1)) o (d_i of M)^(x p).
    """

    def __init__(self, m: SimplicialKModule, truncation: int | None = None):
        t = m.truncation if truncation is None else truncation
        if t > m.truncation:
            raise TruncationTooLow(f"input truncation {m.truncation} below requested {t}")
        self.inner = m
        super().__init__(m.modulus, t, self._rank, self._face, self._degen, name=f"B({m.name})")

    def _rank(self, p):
        r = self.inner.rank(p) ** p
        check_cap(f"level {p} of {self.name}", r)
        return r

    def _hface(self, p, i):
        m = self.inner
        r = m.rank(p - 1)
        if i == 0:
            return m.augmentation(p - 1).kron(IntMatrix.identity(r ** (p - 1)))
        if i == p:
            return IntMatrix.identity(r ** (p - 1)).kron(m.augmentation(p - 1))
        return _kron_all([IntMatrix.identity(r ** (i - 1)), m.product(p - 1), IntMatrix.identity(r ** (p - i - 1))])

    def _face(self, p, i):
        return self._hface(p, i) @ _kron_all([self.inner.face(p, i)] * p)

    def _degen(self, p, i):
        m = self.inner
        self.rank(p + 1)
        r = m.rank(p + 1)
        h = _kron_all([IntMatrix.identity(r**i), m.unit(p + 1), IntMatrix.identity(r ** (p - i))])
        return h @ _kron_all([m.degen(p, i)] * p)

    def product(self, p: int) -> IntMatrix:
        m = self.inner
        r = m.rank(p)
        n = r**p
        check_cap(f"product at level {p} of {self.name}", n * n)
        # (x_1..x_p, y_1..y_p) -> (x_1, y_1, .., x_p, y_p), then multiply blockwise
        idx = np.arange(n * n)
        x, y = idx // n, idx % n
        xs = [(x // r ** (p - 1 - k)) % r for k in range(p)]
        ys = [(y // r ** (p - 1 - k)) % r for k in range(p)]
        target = np.zeros(n * n, dtype=np.int64)
        for k in range(p):
            target = (target * r + xs[k]) * r + ys[k]
        perm = IntMatrix.from_index_map(target, n * n)
        return _kron_all([m.product(p)] * p) @ perm

    def unit(self, p: int) -> IntMatrix:
        return _kron_all([self.inner.unit(p)] * p)

    def augmentation(self, p: int) -> IntMatrix:
        return _kron_all([self.inner.augmentation(p)] * p)


def bar_group(m: SimplicialAbGroup, truncation: int | None = None) -> SimplicialAbGroup:
    """B of a simplicial abelian group: level p is (M_p)^p, d_i = (nerve d_i) (x) (d_i of M)."""
    t = m.truncation if truncation is None else truncation
    if t > m.truncation:
        raise TruncationTooLow(f"input truncation {m.truncation} below requested {t}")
    depth = None if m.bar_depth is None else m.bar_depth + 1
    return SimplicialAbGroup(
        m.group, t,
        lambda p: p * m.exponent(p),
        lambda p, i: bar_face_matrix(p, i).kron(m.face(p, i)),
        lambda p, i: bar_degen_matrix(p, i).kron(m.degen(p, i)),
        ring=m.ring, name=f"B({m.name})", bar_depth=depth,
    )


def bar(m, truncation: int | None = None):
    """Realized bar construction diag(B. M) of a levelwise augmented commutative monoid.

    Accepts a SimplicialAbGroup (monoid under +), a simplicial module with a
    levelwise algebra structure (``product``/``unit``/``augmentation``), or a
    :class:`GridSimplicialSet` (the set view of B^n S).
    """
    if isinstance(m, SimplicialAbGroup):
        return bar_group(m, truncation)
    if isinstance(m, GridSimplicialSet):
        t = m.truncation if truncation is None else truncation
        if t > m.truncation:
            raise TruncationTooLow(f"input truncation {m.truncation} below requested {t}")
        return GridSimplicialSet(m.ring, m.n + 1, t)
    if isinstance(m, SimplicialKModule) and all(hasattr(m, a) for a in ("product", "unit", "augmentation")):
        return BarModule(m, truncation)
    raise InvalidInput(f"bar needs a levelwise augmented commutative monoid, got {type(m).__name__}")


def iterated_bar(s, n: int, truncation: int) -> SimplicialAbGroup:
    """B^n of the additive group of s, built as n literal applications of :func:`bar`.

    ``n = 0`` is the constant simplicial group. The set view (``.as_set()``)
    enumerates S^(p^n) and is subject to the simplex cap; the group view
    never enumerates and also works for S = Z.
    """
    if n < 0:
        raise IndexOutOfRange("n must be nonnegative")
    if truncation < 1:
        raise TruncationTooLow("truncation must be >= 1")
    group, ring, name = _resolve_ring(s)
    m = constant_group(group, truncation, ring=ring, name=name)
    for _ in range(n):
        m = bar_group(m)
    m.name = f"B^{n}({name})"
    return m


def iterated_bar_algebra(a: AugCommAlgebra, n: int, truncation: int) -> SimplicialKModule:
    """B^n A through n literal applications of :class:`BarModule` to the constant algebra."""
    m: SimplicialKModule = SimplicialAlgebra(a, 0, truncation)
    for _ in range(n):
        m = BarModule(m)
    return m


# ---------------------------------------------------------------------------
# pointwise evaluation on nested tuples


def _ops(s) -> tuple[Callable, Any, Callable]:
    """(add, zero, is_element) for a FiniteRing, a spec or plain Z."""
    if isinstance(s, FiniteRing):
        ring = s
    else:
        spec = s if isinstance(s, RingSpec) else RingSpec.parse(str(s))
        if not spec.is_finite:
            return (lambda a, b: a + b), 0, (lambda x: isinstance(x, (int, np.integer)))
        ring = spec.ring()
    return (lambda a, b: int(ring.add[a, b])), ring.zero, (lambda x: isinstance(x, (int, np.integer)) and 0 <= x < ring.size)


def validate_nested(t: NestedTuple, n: int, p: int, is_element=None) -> None:
    if n == 0:
        if isinstance(t, (tuple, list)) or (is_element is not None and not is_element(t)):
            raise ShapeMismatch(f"expected a ring element, got {t!r}")
        return
    if not isinstance(t, (tuple, list)) or len(t) != p:
        raise ShapeMismatch(f"expected a {p}-tuple at depth {n}, got {t!r}")
    for c in t:
        validate_nested(c, n - 1, p, is_element)


def nested_to_leaves(t: NestedTuple, n: int) -> list:
    if n == 0:
        return [t]
    out = []
    for c in t:
        out.extend(nested_to_leaves(c, n - 1))
    return out


def nested_from_leaves(leaves: Sequence, n: int, p: int) -> NestedTuple:
    leaves = list(leaves)
    if len(leaves) != p**n:
        raise ShapeMismatch(f"{len(leaves)} leaves do not fill depth {n}, level {p}")
    if n == 0:
        return leaves[0]
    step = p ** (n - 1)
    return tuple(nested_from_leaves(leaves[k * step:(k + 1) * step], n - 1, p) for k in range(p))


def _nested_add(a, b, n, add):
    if n == 0:
        return add(a, b)
    return tuple(_nested_add(x, y, n - 1, add) for x, y in zip(a, b))


def _nested_zero(n, p, zero):
    if n == 0:
        return zero
    return tuple(_nested_zero(n - 1, p, zero) for _ in range(p))


def face_eval(s, n: int, p: int, i: int, t: NestedTuple) -> NestedTuple:
    """d_i on level p of B^n S, evaluated recursively as d_i^h o d_i^v."""
    if p < 1 or not 0 <= i <= p:
        raise IndexOutOfRange(f"face d_{i} at level {p}")
    add, zero, is_el = _ops(s)
    validate_nested(t, n, p, is_el)
    return _face(n, p, i, t, add)


def _face(n, p, i, t, add):
    if n == 0:
        return t
    inner = [_face(n - 1, p, i, c, add) for c in t]
    if i == 0:
        return tuple(inner[1:])
    if i == p:
        return tuple(inner[:-1])
    merged = _nested_add(inner[i - 1], inner[i], n - 1, add)
    return tuple(inner[: i - 1] + [merged] + inner[i + 1:])


def degen_eval(s, n: int, p: int, i: int, t: NestedTuple) -> NestedTuple:
    """s_i on level p of B^n S: degenerate every component, then insert a zero component."""
    if p < 0 or not 0 <= i <= p:
        raise IndexOutOfRange(f"degeneracy s_{i} at level {p}")
    add, zero, is_el = _ops(s)
    validate_nested(t, n, p, is_el)
    return _degen(n, p, i, t, zero)


def _degen(n, p, i, t, zero):
    if n == 0:
        return t
    inner = [_degen(n - 1, p, i, c, zero) for c in t]
    return tuple(inner[:i] + [_nested_zero(n - 1, p + 1, zero)] + inner[i:])
