"""Finite commutative rings, ring specs, coefficient specs and augmented algebras."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from sympy import factorint, isprime

from .errors import InfiniteLevel, InvalidAlgebra, InvalidRing, ParseError
from .exact_linalg import FGAbelianGroup


class FiniteRing:
    """A finite commutative ring given by addition and multiplication tables.

    Elements are the integers ``0 .. size-1``. With ``validate=True`` (the
    default) every ring axiom is checked exhaustively and a violation raises
    :class:`InvalidRing`; ``validate=False`` keeps broken tables around for
    fault-injection runs.
    """

    def __init__(self, add, mul, zero: int = 0, one: int = 1, *, name: str | None = None, validate: bool = True):
        add = np.asarray(add, dtype=np.int64)
        mul = np.asarray(mul, dtype=np.int64)
        n = add.shape[0] if add.ndim == 2 else -1
        if add.shape != (n, n) or mul.shape != (n, n) or n < 1:
            raise InvalidRing("tables must be square and of equal size")
        if add.min() < 0 or add.max() >= n or mul.min() < 0 or mul.max() >= n:
            raise InvalidRing("table entries out of range")
        if not (0 <= zero < n and 0 <= one < n):
            raise InvalidRing("zero/one out of range")
        self.size = n
        self.add = add
        self.mul = mul
        self.zero = int(zero)
        self.one = int(one)
        self.name = name or f"table[{n}]"
        neg = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(add == zero)
        neg[rows[::-1]] = cols[::-1]
        self.neg = neg
        for a in (self.add, self.mul, self.neg):
            a.flags.writeable = False
        if validate:
            bad = self.violations()
            if bad:
                raise InvalidRing(f"{self.name}: {bad[0]}")

    def __repr__(self) -> str:
        return f"FiniteRing({self.name})"

    # -- constructors -------------------------------------------------
    @classmethod
    def cyclic(cls, m: int) -> FiniteRing:
        if m < 1:
            raise InvalidRing(f"Z/{m} is not a finite ring")
        r = np.arange(m)
        return cls((r[:, None] + r[None, :]) % m, (r[:, None] * r[None, :]) % m, 0, 1 % m, name=f"Z/{m}")

    @classmethod
    def product(cls, factors: Sequence[FiniteRing]) -> FiniteRing:
        """Direct product; element (a_1, .., a_k) has mixed-radix index with a_1 most significant."""
        ring = factors[0]
        for other in factors[1:]:
            n1, n2 = ring.size, other.size
            i = np.arange(n1 * n2)
            a, b = i // n2, i % n2
            add = ring.add[a[:, None], a[None, :]] * n2 + other.add[b[:, None], b[None, :]]
            mul = ring.mul[a[:, None], a[None, :]] * n2 + other.mul[b[:, None], b[None, :]]
            ring = cls(add, mul, ring.zero * n2 + other.zero, ring.one * n2 + other.one,
                       name=f"{ring.name} x {other.name}", validate=False)
        return cls(ring.add, ring.mul, ring.zero, ring.one, name=ring.name)

    @classmethod
    def from_table_file(cls, path: str | Path) -> FiniteRing:
        try:
            doc = json.loads(Path(path).read_text())
            return cls(doc["add"], doc["mul"], doc["zero"], doc["one"], name=f"table:{path}")
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"cannot read ring table {path}: {exc}") from exc

    def to_table_dict(self) -> dict:
        return {
            "size": self.size,
            "add": self.add.tolist(),
            "mul": self.mul.tolist(),
            "zero": self.zero,
            "one": self.one,
        }

    def with_mul_entry(self, a: int, b: int, value: int) -> FiniteRing:
        """Copy with one (unsymmetrized) multiplication entry overwritten, unvalidated."""
        mul = self.mul.copy()
        mul[a, b] = value
        return FiniteRing(self.add, mul, self.zero, self.one, name=f"{self.name} (mul[{a},{b}]={value})", validate=False)

    # -- axioms -------------------------------------------------------
    def violations(self) -> list[str]:
        """Every failing commutative-ring axiom, each with one witness."""
        n, add, mul = self.size, self.add, self.mul
        out = []
        r = np.arange(n)

        def first(mask) -> tuple:
            return tuple(int(x) for x in np.argwhere(mask)[0])

        for name, t in (("addition", add), ("multiplication", mul)):
            bad = t != t.T
            if bad.any():
                out.append(f"{name} not commutative at {first(bad)}")
            bad = t[t[:, :, None], r[None, None, :]] != t[r[:, None, None], t[None, :, :]]
            if bad.any():
                out.append(f"{name} not associative at {first(bad)}")
        if (add[self.zero] != r).any():
            out.append(f"zero is not additive identity at {int(np.flatnonzero(add[self.zero] != r)[0])}")
        if (mul[self.one] != r).any():
            out.append(f"one is not multiplicative identity at {int(np.flatnonzero(mul[self.one] != r)[0])}")
        if (self.neg < 0).any():
            out.append(f"no additive inverse for {int(np.flatnonzero(self.neg < 0)[0])}")
        lhs = mul[r[:, None, None], add[None, :, :]]
        rhs = add[mul[:, :, None], mul[:, None, :]]
        bad = lhs != rhs
        if bad.any():
            out.append(f"distributivity fails at {first(bad)}")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    # -- derived data -------------------------------------------------
    def times(self, k: int) -> np.ndarray:
        """The map x -> k x (k-fold sum) as an index array."""
        out = np.full(self.size, self.zero, dtype=np.int64)
        base = np.arange(self.size)
        k = int(k)
        if k < 0:
            base, k = self.neg.copy(), -k
        while k:
            if k & 1:
                out = self.add[out, base]
            base = self.add[base, base]
            k >>= 1
        return out

    def additive_group(self) -> FGAbelianGroup:
        """Isomorphism type of (R, +), read off from p^k-torsion counts."""
        orders: list[int] = []
        for p in factorint(self.size):
            prev, k = 0, 1
            counts = []
            while True:
                c = int((self.times(p**k) == self.zero).sum())
                e = round(np.log(c) / np.log(p))
                counts.append(e - prev)
                if e == prev:
                    break
                prev = e
                k += 1
            # counts[k-1] = number of cyclic p-factors of exponent >= k
            for k in range(len(counts) - 1):
                extra = counts[k] - counts[k + 1]
                orders.extend([p ** (k + 1)] * extra)
        return FGAbelianGroup.from_cyclic(0, orders)


# ---------------------------------------------------------------------------
# ring specs


@dataclass(frozen=True)
class RingSpec:
    """Parsed ring description: ``Z``, ``Z/m``, ``A x B`` or ``table:<path>``."""

    kind: str  # "Z", "cyclic", "product", "table"
    modulus: int = 0
    factors: tuple["RingSpec", ...] = ()
    path: str = ""

    @classmethod
    def parse(cls, text: str) -> RingSpec:
        text = text.strip()
        if not text:
            raise ParseError("empty ring spec")
        if text.startswith("table:"):
            return cls("table", path=text[len("table:"):])
        parts = [p.strip() for p in re.split(r"\s+x\s+", text)]
        if len(parts) > 1:
            return cls("product", factors=tuple(cls.parse(p) for p in parts))
        if text == "Z":
            return cls("Z")
        m = re.fullmatch(r"Z/(\d+)", text)
        if m:
            mod = int(m.group(1))
            if mod < 2:
                raise ParseError(f"ring spec {text!r} needs a modulus >= 2")
            return cls("cyclic", modulus=mod)
        raise ParseError(f"cannot parse ring spec {text!r}")

    def __str__(self) -> str:
        if self.kind == "Z":
            return "Z"
        if self.kind == "cyclic":
            return f"Z/{self.modulus}"
        if self.kind == "table":
            return f"table:{self.path}"
        return " x ".join(str(f) for f in self.factors)

    @property
    def is_finite(self) -> bool:
        if self.kind == "Z":
            return False
        if self.kind == "product":
            return all(f.is_finite for f in self.factors)
        return True

    def additive_group(self) -> FGAbelianGroup:
        if self.kind == "Z":
            return FGAbelianGroup(1)
        if self.kind == "cyclic":
            return FGAbelianGroup.cyclic(self.modulus)
        if self.kind == "product":
            out = FGAbelianGroup()
            for f in self.factors:
                out = out + f.additive_group()
            return out
        return self.ring().additive_group()

    def ring(self) -> FiniteRing:
        if not self.is_finite:
            raise InfiniteLevel(f"ring {self} is infinite; only the symbolic group view is available")
        if self.kind == "cyclic":
            return FiniteRing.cyclic(self.modulus)
        if self.kind == "table":
            return FiniteRing.from_table_file(self.path)
        return FiniteRing.product([f.ring() for f in self.factors])


@dataclass(frozen=True)
class Coeff:
    """Coefficient ring Z (modulus 0), Z/m or F_p."""

    modulus: int
    name: str

    @classmethod
    def parse(cls, text: str) -> Coeff:
        text = text.strip()
        if text == "Z":
            return cls(0, "Z")
        m = re.fullmatch(r"Z/(\d+)", text)
        if m and int(m.group(1)) >= 2:
            return cls(int(m.group(1)), text)
        m = re.fullmatch(r"F_?(\d+)", text)
        if m:
            p = int(m.group(1))
            if not isprime(p):
                raise ParseError(f"F{p}: {p} is not prime")
            return cls(p, f"F{p}")
        raise ParseError(f"cannot parse coefficient spec {text!r}")

    @property
    def is_field(self) -> bool:
        return self.modulus > 0 and isprime(self.modulus)

    def __str__(self) -> str:
        return self.name


# ---------------------------------------------------------------------------
# augmented commutative algebras


@dataclass
class AugCommAlgebra:
    """Finite-rank augmented commutative algebra over Z/modulus (modulus 0 means Z).

    ``mul[a, b, c]`` is the coefficient of e_c in e_a e_b. The unit must be a
    basis vector, ``e_unit``.
    """

    modulus: int
    mul: np.ndarray
    unit: int
    augmentation: np.ndarray
    name: str = "A"
    basis_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        self.mul = np.asarray(self.mul, dtype=np.int64)
        self.augmentation = np.asarray(self.augmentation, dtype=np.int64)
        d = self.mul.shape[0]
        if self.mul.shape != (d, d, d) or self.augmentation.shape != (d,):
            raise InvalidAlgebra("structure constants must have shape (d, d, d) and augmentation (d,)")
        if not 0 <= self.unit < d:
            raise InvalidAlgebra("unit index out of range")
        if self.modulus:
            self.mul = self.mul % self.modulus
            self.augmentation = self.augmentation % self.modulus
        if not self.basis_names:
            self.basis_names = tuple(f"e{i}" for i in range(d))
        bad = self.violations()
        if bad:
            raise InvalidAlgebra(f"{self.name}: {bad[0]}")

    @property
    def dim(self) -> int:
        return self.mul.shape[0]

    def _red(self, x):
        return x % self.modulus if self.modulus else x

    def violations(self) -> list[str]:
        mu, eps, d = self.mul, self.augmentation, self.dim
        out = []
        bad = self._red(mu - mu.transpose(1, 0, 2)) != 0
        if bad.any():
            out.append(f"product not commutative at {tuple(np.argwhere(bad)[0])}")
        left = self._red(np.einsum("abx,xcy->abcy", mu, mu))
        right = self._red(np.einsum("bcx,axy->abcy", mu, mu))
        bad = left != right
        if bad.any():
            out.append(f"product not associative at {tuple(np.argwhere(bad)[0][:3])}")
        if (self._red(mu[self.unit] - np.eye(d, dtype=np.int64)) != 0).any():
            out.append("unit does not act as the identity")
        if self._red(eps[self.unit] - 1) != 0:
            out.append("augmentation does not send the unit to 1")
        lhs = self._red(np.einsum("abc,c->ab", mu, eps))
        rhs = self._red(np.outer(eps, eps))
        if (lhs != rhs).any():
            out.append(f"augmentation not multiplicative at {tuple(np.argwhere(lhs != rhs)[0])}")
        return out

    @classmethod
    def truncated_polynomial(cls, modulus: int, e: int) -> AugCommAlgebra:
        """k[x]/x^e with basis 1, x, .., x^(e-1) and x -> 0."""
        if e < 1:
            raise InvalidAlgebra("need e >= 1")
        mul = np.zeros((e, e, e), dtype=np.int64)
        for a in range(e):
            for b in range(e - a):
                mul[a, b, a + b] = 1
        eps = np.zeros(e, dtype=np.int64)
        eps[0] = 1
        k = f"F{modulus}" if modulus and isprime(modulus) else (f"Z/{modulus}" if modulus else "Z")
        names = tuple("1" if i == 0 else ("x" if i == 1 else f"x^{i}") for i in range(e))
        return cls(modulus, mul, 0, eps, name=f"{k}[x]/x^{e}", basis_names=names)

    @classmethod
    def group_algebra(cls, ring: FiniteRing, modulus: int) -> AugCommAlgebra:
        """k[(R, +)] with e_a e_b = e_{a+b} and every e_a -> 1."""
        n = ring.size
        mul = np.zeros((n, n, n), dtype=np.int64)
        a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        mul[a, b, ring.add] = 1
        return cls(modulus, mul, ring.zero, np.ones(n, dtype=np.int64), name=f"k[{ring.name}]")

    @classmethod
    def parse(cls, text: str) -> AugCommAlgebra:
        """``F<p>[x]/x^<e>`` (also ``Z/m[..]``) or a path to a JSON structure-constant file."""
        m = re.fullmatch(r"\s*(F_?\d+|Z/\d+|Z)\[x\]/x\^(\d+)\s*", text)
        if m:
            return cls.truncated_polynomial(Coeff.parse(m.group(1)).modulus, int(m.group(2)))
        return cls.from_json_file(text)

    @classmethod
    def from_json_file(cls, path: str | Path) -> AugCommAlgebra:
        """JSON fields: coeff (e.g. "F2"), dim, mul (dim^3 nested list), unit, augmentation."""
        try:
            doc = json.loads(Path(path).read_text())
            coeff = Coeff.parse(doc["coeff"])
            d = int(doc["dim"])
            mul = np.asarray(doc["mul"], dtype=np.int64).reshape(d, d, d)
            return cls(coeff.modulus, mul, int(doc["unit"]), doc["augmentation"],
                       name=doc.get("name", str(path)), basis_names=tuple(doc.get("basis", ())))
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidAlgebra):
                raise
            raise ParseError(f"cannot read algebra {path}: {exc}") from exc


@dataclass
class GroupRingStructure:
    """Structure tensors of k[S] for a finite ring S.

    ``plus`` is the product induced by addition, ``times`` the one induced by
    multiplication, ``delta`` the diagonal coproduct e_s -> e_s (x) e_s,
    ``counit`` sends every e_s to 1 and ``antipode`` is e_s -> e_{-s}.
    """

    ring: FiniteRing
    modulus: int
    plus: np.ndarray
    times: np.ndarray
    delta: np.ndarray
    counit: np.ndarray
    antipode: np.ndarray

    @classmethod
    def of(cls, ring: FiniteRing, modulus: int) -> GroupRingStructure:
        n = ring.size
        a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        plus = np.zeros((n, n, n), dtype=np.int64)
        plus[a, b, ring.add] = 1
        times = np.zeros((n, n, n), dtype=np.int64)
        times[a, b, ring.mul] = 1
        delta = np.zeros((n, n, n), dtype=np.int64)
        delta[np.arange(n), np.arange(n), np.arange(n)] = 1
        antipode = np.zeros((n, n), dtype=np.int64)
        antipode[ring.neg, np.arange(n)] = 1
        return cls(ring, modulus, plus, times, delta, np.ones(n, dtype=np.int64), antipode)
