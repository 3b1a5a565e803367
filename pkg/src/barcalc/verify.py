"""Verification suites run by ``barcalc verify``.

Each suite returns a :class:`SuiteResult` with a pass flag, the checks it ran
and, on failure, counterexample payloads. With ``fault=True`` a suite
deliberately corrupts its input (a face map, a multiplication-table entry,
the Kronecker order) so that the checks must report a failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bar import iterated_bar, iterated_bar_algebra
from .cup import (
    check_cup_forms,
    check_graded_ring_axioms,
    homology_circle_product,
    hopf_checks,
    naturality_check,
)
from .dg import alexander_whitney, dg_bar, dold_puppe_compare, ez_shuffle
from .exact_linalg import FGAbelianGroup, IntMatrix
from .rings import AugCommAlgebra, Coeff, FiniteRing, RingSpec
from .simplicial import (
    GridSimplicialSet,
    TabulatedSimplicialSet,
    bar_bisimplicial,
    grid_bisimplicial,
    homology,
    homotopy_groups,
    linearize,
    linearize_bisimplicial,
    verify_identities,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: list[dict] = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "checks": self.checks, "witnesses": self.witnesses}


@dataclass
class SuiteConfig:
    ring: str | None = None
    coeff: str | None = None
    seed: int = 0
    fault: bool = False


def _ring(cfg: SuiteConfig, default: str) -> FiniteRing:
    return RingSpec.parse(cfg.ring or default).ring()


def _modulus(cfg: SuiteConfig, default: str) -> int:
    return Coeff.parse(cfg.coeff or default).modulus


def _result(name, checks, witnesses=()) -> SuiteResult:
    return SuiteResult(name, all(c["passed"] for c in checks), checks, list(witnesses))


def _fault_entry(s: FiniteRing) -> tuple[int, int, int]:
    """A multiplication entry to flip: prefer a product of two non-units."""
    a = b = s.size - 1
    for x in range(s.size):
        for y in range(x, s.size):
            if {x, y} & {s.zero, s.one}:
                continue
            a, b = x, y
            break
        else:
            continue
        break
    return a, b, int((s.mul[a, b] + 1) % s.size)


def _corrupt_face(x, top: int):
    """Redirect d_0 of simplex 0 at the lowest level whose target has two or more simplices.

    Returns None when every such target is a point (nothing to corrupt).
    """
    tab = TabulatedSimplicialSet.from_set(x)
    for p in range(1, top + 1):
        if tab.size(p - 1) > 1:
            f = np.array(tab.face(p, 0))
            f[0] = (f[0] + 1) % tab.size(p - 1)
            return tab.with_face(p, 0, f)
    return None


def suite_identities(cfg: SuiteConfig) -> SuiteResult:
    checks, wit = [], []
    rings = [cfg.ring] if cfg.ring else ["Z/2", "Z/3", "Z/4", "Z/2 x Z/2"]
    for spec in rings:
        s = RingSpec.parse(spec).ring()
        for n in range(4):
            top = 0
            while top < 4 and s.size ** ((top + 1) ** n) <= 1 << 14:
                top += 1
            if top < 1:
                continue
            x = GridSimplicialSet(s, n, top)
            if cfg.fault:
                x = _corrupt_face(x, top)
                if x is None:
                    continue
            rep = verify_identities(x)
            checks.append({"ring": s.name, "n": n, "levels": top, "checked": rep.checked, "passed": rep.ok})
            wit.extend(str(v) for v in rep.violations[:3])
    return _result("identities", checks, wit)


def suite_em(cfg: SuiteConfig) -> SuiteResult:
    checks = []
    groups = [cfg.ring] if cfg.ring else ["Z/2", "Z/5", "Z/2 x Z/4", "Z"]
    for spec in groups:
        g = RingSpec.parse(spec).additive_group()
        for n in range(3):
            got = homotopy_groups(iterated_bar(spec, n, n + 2), n + 1)
            want = [g if i == n else FGAbelianGroup() for i in range(n + 2)]
            checks.append({"group": str(g), "n": n, "pi": [str(h) for h in got], "passed": got == want})
    return _result("em", checks)


def suite_homology(cfg: SuiteConfig) -> SuiteResult:
    checks = []
    s = FiniteRing.cyclic(2)
    h = homology(GridSimplicialSet(s, 1, 6), Coeff.parse("Z"), 5, normalized=False)
    want = [FGAbelianGroup.parse(t) for t in ["Z", "Z/2", "0", "Z/2", "0", "Z/2"]]
    checks.append({"input": "B(Z/2)", "coeff": "Z", "H": [str(g) for g in h], "passed": h == want})
    for spec, coeff, n, deg in (("Z/2", "F2", 1, 4), ("Z/3", "F3", 1, 4), ("Z/2", "F2", 2, 2), ("Z/2", "Z/4", 1, 3)):
        x = GridSimplicialSet(RingSpec.parse(spec).ring(), n, deg + 1)
        a = homology(x, Coeff.parse(coeff), deg, normalized=True)
        b = homology(x, Coeff.parse(coeff), deg, normalized=False)
        checks.append({"input": f"B^{n}({spec})", "coeff": coeff, "normalized": [str(g) for g in a],
                       "unnormalized": [str(g) for g in b], "passed": a == b})
    return _result("homology", checks)


def suite_cup_forms(cfg: SuiteConfig) -> SuiteResult:
    checks, wit = [], []
    s = _ring(cfg, "Z/4")
    for n in range(3):
        for m in range(3 - n):
            for p in range(3):
                r = check_cup_forms(s, n, m, p, seed=cfg.seed)
                checks.append({"n": n, "m": m, "p": p, "method": r.method, "checked": r.checked,
                               "passed": r.mismatches == 0})
                if r.witness:
                    wit.append(r.witness)
    return _result("cup-forms", checks, wit)


def suite_axioms(cfg: SuiteConfig) -> SuiteResult:
    s = _ring(cfg, "Z/6")
    if cfg.fault:
        a, b, v = _fault_entry(s)
        s = s.with_mul_entry(a, b, v)
    rep = check_graded_ring_axioms(s, 2, 2)
    checks = [{"axiom": k, "passed": v} for k, v in rep.summary().items()]
    wit = [r.to_dict() for r in rep.failures()[:5]]
    return _result("axioms", checks, wit)


def suite_naturality(cfg: SuiteConfig) -> SuiteResult:
    s = _ring(cfg, "Z/3")
    p = _modulus(cfg, "F3")
    rep = naturality_check(s, p, 2, 2, transpose_fault=cfg.fault)
    return _result("naturality", rep.checks, rep.mismatches()[:5])


def suite_circle(cfg: SuiteConfig) -> SuiteResult:
    s = _ring(cfg, "Z/2")
    p = _modulus(cfg, "F2")
    hp = homology_circle_product(s, p, 1, 1, 1, 1, seed=cfg.seed)
    nonzero = bool((hp.matrix % p).any())
    checks = [{"pairing": hp.to_dict(), "nonzero": nonzero, "passed": hp.representative_independent}]
    return _result("circle", checks)


def suite_hopf(cfg: SuiteConfig) -> SuiteResult:
    s = _ring(cfg, "Z/4")
    p = _modulus(cfg, "F2")
    checks = []
    for n in range(2):
        rep = hopf_checks(s, p, n, 2)
        checks.append({"n": n, "failed": [c for c in rep.checks if not c["passed"]][:5], "passed": rep.ok})
    return _result("hopf", checks)


def suite_dg(cfg: SuiteConfig) -> SuiteResult:
    checks = []
    for q in (2, 3):
        x = linearize(GridSimplicialSet(FiniteRing.cyclic(q), 1, 3), q)
        ez, aw = ez_shuffle(x, x, 3), alexander_whitney(x, x, 3)
        comp = aw.compose(ez)
        ident = all((comp.maps[k] - IntMatrix.identity(comp.maps[k].rows)).mod(q).is_zero() for k in range(4))
        checks.append({"input": f"nerve(Z/{q})", "ez_chain_map": ez.is_chain_map, "aw_chain_map": aw.is_chain_map,
                       "aw_ez_identity": ident, "passed": ez.is_chain_map and aw.is_chain_map and ident})
    for p in (2, 3):
        a = AugCommAlgebra.truncated_polynomial(p, 2)
        b = dg_bar(a, 5)
        dims_dg = b.homology_dims(p, 4)
        pi = homotopy_groups(iterated_bar_algebra(a, 1, 5), 4)
        dims_s = [g.fp_dim(p) for g in pi]
        rep = b.check()
        checks.append({"algebra": a.name, "dg_bar_dims": dims_dg, "simplicial_dims": dims_s,
                       "dga_axioms": rep.to_dict(), "passed": rep.ok and dims_dg == dims_s})
    return _result("dg", checks)


def suite_dold_puppe(cfg: SuiteConfig) -> SuiteResult:
    checks = []
    for q in (2, 3):
        g = iterated_bar(f"Z/{q}", 1, 5)
        rep = dold_puppe_compare(bar_bisimplicial(g, q), 3)
        checks.append({"input": f"B.(B.Z/{q}) coordinates over F{q}", **rep.to_dict(), "passed": rep.ok})
    x = linearize_bisimplicial(grid_bisimplicial(FiniteRing.cyclic(2), 1, 1, 4), 2)
    rep = dold_puppe_compare(x, 3)
    checks.append({"input": "F2[B.(B.Z/2)]", **rep.to_dict(), "passed": rep.ok})
    return _result("dold-puppe", checks)


SUITES: dict[str, Callable[[SuiteConfig], SuiteResult]] = {
    "identities": suite_identities,
    "em": suite_em,
    "homology": suite_homology,
    "cup-forms": suite_cup_forms,
    "axioms": suite_axioms,
    "naturality": suite_naturality,
    "circle": suite_circle,
    "hopf": suite_hopf,
    "dg": suite_dg,
    "dold-puppe": suite_dold_puppe,
}

# suites that corrupt their input under fault injection
FAULT_SUITES = ("identities", "axioms", "naturality")


def run_suites(names: list[str], cfg: SuiteConfig) -> list[SuiteResult]:
    return [SUITES[n](cfg) for n in names]
