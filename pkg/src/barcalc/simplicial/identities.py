"""Exhaustive check of the simplicial identities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import TruncationTooLow
from ..exact_linalg import IntMatrix
from .bisimplicial import BisimplicialObject


@dataclass(frozen=True)
class Violation:
    identity: str
    p: int
    i: int
    j: int
    simplex: int
    where: str = ""

    def __str__(self) -> str:
        loc = f" [{self.where}]" if self.where else ""
        return f"{self.identity} fails at level {self.p}, i={self.i}, j={self.j}, simplex {self.simplex}{loc}"


@dataclass
class IdentityReport:
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def extend(self, other: IdentityReport) -> None:
        self.violations.extend(other.violations)
        self.checked += other.checked


class _Ops:
    """Uniform access to a simplicial direction of some object."""

    def __init__(self, kind, size, face, degen, truncation, modulus=0, where=""):
        self.kind, self.size, self.face, self.degen = kind, size, face, degen
        self.truncation, self.modulus, self.where = truncation, modulus, where

    def comp(self, f, g):
        return f[g] if self.kind == "set" else f @ g

    def ident(self, p):
        n = self.size(p)
        return np.arange(n) if self.kind == "set" else IntMatrix.identity(n)

    def diff(self, a, b) -> int | None:
        """First simplex (column) on which the two maps differ, or None."""
        if self.kind == "set":
            bad = np.flatnonzero(np.asarray(a) != np.asarray(b))
            return int(bad[0]) if bad.size else None
        d = (a - b).mod(self.modulus)
        return int(d.col.min()) if d.nnz else None


def _ops_for(x) -> _Ops:
    kind = "set" if getattr(x, "kind", None) == "set" else "matrix"
    size = x.size if kind == "set" else x.rank
    return _Ops(kind, size, x.face, x.degen, x.truncation, getattr(x, "modulus", 0))


def _check_direction(ops: _Ops, d: int) -> IdentityReport:
    rep = IdentityReport()

    def test(name, p, i, j, lhs, rhs):
        rep.checked += 1
        bad = ops.diff(lhs, rhs)
        if bad is not None:
            rep.violations.append(Violation(name, p, i, j, bad, ops.where))

    for p in range(0, d + 1):
        if p >= 2:
            for j in range(p + 1):
                for i in range(j):
                    test("d_i d_j = d_(j-1) d_i", p, i, j,
                         ops.comp(ops.face(p - 1, i), ops.face(p, j)),
                         ops.comp(ops.face(p - 1, j - 1), ops.face(p, i)))
        if p + 1 <= d:
            for j in range(p + 1):
                for i in range(p + 2):
                    lhs = ops.comp(ops.face(p + 1, i), ops.degen(p, j))
                    if i < j:
                        test("d_i s_j = s_(j-1) d_i", p, i, j, lhs,
                             ops.comp(ops.degen(p - 1, j - 1), ops.face(p, i)))
                    elif i in (j, j + 1):
                        test("d_i s_j = id", p, i, j, lhs, ops.ident(p))
                    else:
                        test("d_i s_j = s_j d_(i-1)", p, i, j, lhs,
                             ops.comp(ops.degen(p - 1, j), ops.face(p, i - 1)))
        if p + 2 <= d:
            for j in range(p + 1):
                for i in range(j + 1):
                    test("s_i s_j = s_(j+1) s_i", p, i, j,
                         ops.comp(ops.degen(p + 1, i), ops.degen(p, j)),
                         ops.comp(ops.degen(p + 1, j + 1), ops.degen(p, i)))
    return rep


def _bisimplicial(x: BisimplicialObject, d: int) -> IdentityReport:
    kind = "set" if x.kind == "set" else "matrix"
    rep = IdentityReport()
    for q in range(d + 1):
        ops = _Ops(kind, lambda p, q=q: x.size(p, q), lambda p, i, q=q: x.hface(p, q, i),
                   lambda p, i, q=q: x.hdegen(p, q, i), d, x.modulus, where=f"horizontal, q={q}")
        rep.extend(_check_direction(ops, d))
    for p in range(d + 1):
        ops = _Ops(kind, lambda q, p=p: x.size(p, q), lambda q, j, p=p: x.vface(p, q, j),
                   lambda q, j, p=p: x.vdegen(p, q, j), d, x.modulus, where=f"vertical, p={p}")
        rep.extend(_check_direction(ops, d))
    # horizontal and vertical maps commute
    ops = _Ops(kind, None, None, None, d, x.modulus, where="h/v commutation")

    def test(name, p, q, i, j, lhs, rhs):
        rep.checked += 1
        bad = ops.diff(lhs, rhs)
        if bad is not None:
            rep.violations.append(Violation(name, p, i, j, bad, f"h/v commutation at q={q}"))

    for p in range(d + 1):
        for q in range(d + 1):
            for i in range(p + 1):
                for j in range(q + 1):
                    if p >= 1 and q >= 1:
                        test("d^h_i d^v_j = d^v_j d^h_i", p, q, i, j,
                             ops.comp(x.hface(p, q - 1, i), x.vface(p, q, j)),
                             ops.comp(x.vface(p - 1, q, j), x.hface(p, q, i)))
                    if p >= 1 and q + 1 <= d:
                        test("d^h_i s^v_j = s^v_j d^h_i", p, q, i, j,
                             ops.comp(x.hface(p, q + 1, i), x.vdegen(p, q, j)),
                             ops.comp(x.vdegen(p - 1, q, j), x.hface(p, q, i)))
                    if q >= 1 and p + 1 <= d:
                        test("s^h_i d^v_j = d^v_j s^h_i", p, q, i, j,
                             ops.comp(x.hdegen(p, q - 1, i), x.vface(p, q, j)),
                             ops.comp(x.vface(p + 1, q, j), x.hdegen(p, q, i)))
                    if p + 1 <= d and q + 1 <= d:
                        test("s^h_i s^v_j = s^v_j s^h_i", p, q, i, j,
                             ops.comp(x.hdegen(p, q + 1, i), x.vdegen(p, q, j)),
                             ops.comp(x.vdegen(p + 1, q, j), x.hdegen(p, q, i)))
    return rep


def verify_identities(x, d: int | None = None) -> IdentityReport:
    """Check every simplicial identity on levels <= d; violations come back as data.

    Works for simplicial sets, groups and modules, and for bisimplicial objects
    (both directions plus the commutation of horizontal with vertical maps).
    """
    d = x.truncation if d is None else d
    if d > x.truncation:
        raise TruncationTooLow(f"level {d} beyond truncation {x.truncation}")
    if isinstance(x, BisimplicialObject):
        return _bisimplicial(x, d)
    return _check_direction(_ops_for(x), d)
