"""Command-line front end.

Every command prints a ResultDocument (JSON) to stdout or to ``--output``.
Exit status: 0 success, 2 invalid input, 3 resource cap, 4 verification
failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .bar import iterated_bar
from .config import simplex_cap
from .cup import check_graded_ring_axioms, homology_circle_product
from .dg import dg_bar
from .errors import BarcalcError, InvalidInput, ParseError, ResourceBudgetExceeded, TruncationTooLow
from .exact_linalg import FGAbelianGroup, IntMatrix
from .rings import AugCommAlgebra, Coeff, RingSpec
from .simplicial import ChainComplex, GridSimplicialSet, SimplicialAlgebra, homotopy_groups, linearize
from .simplicial.chains import chains_to
from .verify import FAULT_SUITES, SUITES, SuiteConfig, run_suites

EXIT_OK, EXIT_INVALID, EXIT_CAP, EXIT_FAILED = 0, 2, 3, 4


# ---------------------------------------------------------------------------
# result documents


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def determinism_hash(doc: dict) -> str:
    """sha256 of the canonical JSON of everything except timings and the hash itself."""
    body = {k: v for k, v in doc.items() if k not in ("timings", "determinism_hash")}
    return hashlib.sha256(canonical_json(body).encode()).hexdigest()


def result_document(command: str, inputs: dict, results: dict, seconds: float) -> dict:
    doc = {
        "command": command,
        "inputs": inputs,
        "results": results,
        "timings": {"seconds": round(seconds, 6)},
        "artifact_version": __version__,
    }
    doc["determinism_hash"] = determinism_hash(doc)
    return doc


@dataclass
class RunConfig:
    command: str
    ring: str | None = None
    n: int = 1
    m: int = 0
    coeff: str = "Z"
    max_degree: int = 3
    truncation: int | None = None
    cap: int | None = None
    output: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise InvalidInput("n and m must be nonnegative")
        if self.max_degree < 0:
            raise InvalidInput("--max-degree must be nonnegative")
        if self.truncation is not None and self.truncation < self.max_degree + 1:
            raise TruncationTooLow(f"truncation {self.truncation} must be >= max degree + 1 = {self.max_degree + 1}")

    @property
    def trunc(self) -> int:
        return self.max_degree + 1 if self.truncation is None else self.truncation

    def inputs(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if k not in ("command", "output") and v is not None}


# ---------------------------------------------------------------------------
# commands


def _groups(gs: list[FGAbelianGroup]) -> list[str]:
    return [str(g) for g in gs]


def cmd_em_homotopy(cfg: RunConfig) -> dict:
    groups = homotopy_groups(iterated_bar(cfg.ring, cfg.n, cfg.trunc), cfg.max_degree)
    return {"pi": _groups(groups)}


def _complex(cfg: RunConfig, top: int, normalized: bool = True) -> tuple[ChainComplex, Coeff]:
    """Chains of k[B^n S] in degrees 0..top (levels up to top are enumerated)."""
    spec = RingSpec.parse(cfg.ring)
    coeff = Coeff.parse(cfg.coeff)
    x = GridSimplicialSet(spec.ring(), cfg.n, max(cfg.trunc, top))
    return chains_to(linearize(x, coeff.modulus), top, normalized), coeff


def cmd_em_homology(cfg: RunConfig, normalized: bool = True) -> dict:
    c, coeff = _complex(cfg, cfg.max_degree + 1, normalized)
    hs = c.homology_list(cfg.max_degree)
    out = {"H": _groups(hs), "normalized": normalized}
    if coeff.is_field:
        out["dims"] = [h.fp_dim(coeff.modulus) for h in hs]
    return out


def _parse_pair(text: str) -> tuple[int, int, int, int]:
    try:
        left, right = text.split(":")
        n, i = (int(v) for v in left.split(","))
        m, j = (int(v) for v in right.split(","))
    except ValueError:
        raise ParseError(f"--pair expects n,i:m,j, got {text!r}") from None
    if min(n, i, m, j) < 0:
        raise InvalidInput("--pair entries must be nonnegative")
    return n, i, m, j


def cmd_cup_table(cfg: RunConfig, pair: str | None, verify_axioms: bool, nmax: int, pmax: int,
                  perturbations: int) -> dict:
    s = RingSpec.parse(cfg.ring).ring()
    out: dict = {}
    if pair:
        coeff = Coeff.parse(cfg.coeff)
        if not coeff.is_field:
            raise InvalidInput("the homology pairing needs a prime field coefficient (F<p>)")
        n, i, m, j = _parse_pair(pair)
        hp = homology_circle_product(s, coeff.modulus, n, m, i, j, cfg.truncation, perturbations, cfg.seed)
        out["pairing"] = hp.to_dict()
    if verify_axioms:
        rep = check_graded_ring_axioms(s, nmax, pmax)
        out["axioms"] = rep.to_dict()
    if not out:
        raise InvalidInput("cup-table needs --pair and/or --verify-axioms")
    return out


def cmd_hochschild(cfg: RunConfig, algebra: str, dg: bool) -> dict:
    a = AugCommAlgebra.parse(algebra)
    if a.modulus == 0 or not Coeff(a.modulus, "").is_field:
        raise InvalidInput("Hochschild dimensions need an algebra over a prime field")
    x = SimplicialAlgebra(a, cfg.n, cfg.trunc)
    pi = homotopy_groups(x, cfg.max_degree)
    out = {"algebra": a.name, "dims": [g.fp_dim(a.modulus) for g in pi]}
    if dg:
        if cfg.n not in (1, 2):
            raise InvalidInput("--dg supports n = 1 or n = 2")
        top = cfg.max_degree + 1
        b = dg_bar(a, top) if cfg.n == 1 else dg_bar(dg_bar(a, top), top)
        out["dg_dims"] = b.homology_dims(a.modulus, cfg.max_degree)
    return out


# ---------------------------------------------------------------------------
# complex export / import


def export_complex(c: ChainComplex, ring_label: str) -> str:
    """Serialize a chain complex of free modules over ``ring_label``.

    Entries are reduced mod the coefficient modulus (zeros dropped). ``torsion``
    lists the torsion of H_i of the exported (finite) complex over Z and is
    empty for Z/m coefficients.
    """
    mod = Coeff.parse(ring_label).modulus
    closed = ChainComplex(c.ranks, c.differentials, c.coefficients, complete=True, name=c.name)
    degrees = []
    for i, r in enumerate(c.ranks):
        torsion = [int(t) for t in closed.homology(i).torsion] if mod == 0 else []
        degrees.append({"degree": i, "rank": r, "torsion": torsion})
    diffs = []
    for i in range(1, len(c.ranks)):
        trip = ((int(a), int(b), int(v) % mod if mod else int(v)) for a, b, v in c.differentials[i].triplets())
        entries = sorted([a, b, v] for a, b, v in trip if v != 0)
        diffs.append({"from": i, "to": i - 1, "entries": entries})
    doc = {"ring": ring_label, "degrees": degrees, "differentials": diffs}
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def import_complex(text: str) -> tuple[ChainComplex, str]:
    """Inverse of :func:`export_complex`; validates schema, ranks and torsion."""
    try:
        doc = json.loads(text)
        ring = doc["ring"]
        degrees = doc["degrees"]
        diffs = doc["differentials"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"not a complex document: {exc}") from None
    if not isinstance(ring, str) or not isinstance(degrees, list) or not isinstance(diffs, list):
        raise ParseError("complex document has wrong field types")
    coeff = Coeff.parse(ring)
    ranks = []
    for k, d in enumerate(degrees):
        if not isinstance(d, dict) or d.get("degree") != k or not isinstance(d.get("rank"), int) or d["rank"] < 0:
            raise ParseError(f"bad degree entry {d!r}")
        ranks.append(d["rank"])
    if len(diffs) != max(0, len(ranks) - 1):
        raise ParseError("one differential per positive degree is required")
    mats = [IntMatrix(0, ranks[0] if ranks else 0)]
    for k, d in enumerate(diffs, start=1):
        if d.get("from") != k or d.get("to") != k - 1:
            raise ParseError(f"differential {k} is out of order")
        ent = d.get("entries")
        if not isinstance(ent, list) or ent != sorted(ent):
            raise ParseError(f"entries of differential {k} must be sorted")
        try:
            rows, cols, vals = zip(*ent) if ent else ((), (), ())
            if any(not (0 <= r < ranks[k - 1]) for r in rows) or any(not (0 <= c < ranks[k]) for c in cols):
                raise ParseError(f"entry index out of range in differential {k}")
            mats.append(IntMatrix(ranks[k - 1], ranks[k], rows, cols, vals))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad entries in differential {k}: {exc}") from None
    c = ChainComplex(ranks, mats, FGAbelianGroup.cyclic(coeff.modulus), name="imported")
    if export_complex(c, ring) != json.dumps(doc, sort_keys=True, indent=1) + "\n":
        raise ParseError("torsion or entries disagree with the recomputed complex")
    return c, ring


def cmd_export_complex(cfg: RunConfig, unnormalized: bool, roundtrip: bool) -> dict:
    if not cfg.output:
        raise InvalidInput("export-complex needs --output")
    c, coeff = _complex(cfg, cfg.max_degree, not unnormalized)
    text = export_complex(c, str(coeff))
    Path(cfg.output).write_text(text)
    out = {"path": cfg.output, "sha256": hashlib.sha256(text.encode()).hexdigest(), "ranks": c.ranks}
    if roundtrip:
        back, _ = import_complex(Path(cfg.output).read_text())
        again = export_complex(back, str(coeff))
        out["roundtrip_equal"] = hashlib.sha256(again.encode()).hexdigest() == out["sha256"]
    return out


def cmd_verify(cfg: RunConfig, suites: list[str], fault: bool) -> tuple[dict, bool]:
    names = list(SUITES) if suites == ["all"] else suites
    for n in names:
        if n not in SUITES:
            raise InvalidInput(f"unknown suite {n!r}; choose from {', '.join(SUITES)} or all")
    if fault:
        names = [n for n in names if n in FAULT_SUITES] or list(FAULT_SUITES)
    res = run_suites(names, SuiteConfig(cfg.ring, cfg.coeff if cfg.coeff != "Z" else None, cfg.seed, fault))
    ok = all(r.passed for r in res)
    return {"passed": ok, "fault_injection": fault, "suites": [r.to_dict() for r in res]}, ok


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the result document here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--cap", type=int, help="simplex cap (overrides BARCALC_CAP)")

    p = argparse.ArgumentParser(prog="barcalc", description="Iterated bar constructions of finite rings and groups.")
    p.add_argument("--version", action="version", version=f"barcalc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def ring_args(sp, ring_required=True, coeff=True):
        sp.add_argument("--ring", required=ring_required, help='"Z", "Z/m", "A x B" or "table:<path>"')
        sp.add_argument("--n", type=int, default=1, help="bar depth")
        if coeff:
            sp.add_argument("--coeff", default="Z", help='"Z", "Z/m" or "F<p>"')
        sp.add_argument("--max-degree", type=int, default=3)
        sp.add_argument("--truncation", type=int)

    ring_args(sub.add_parser("em-homotopy", parents=[common], help="homotopy groups of B^n G"), coeff=False)
    sp = sub.add_parser("em-homology", parents=[common], help="homology of B^n S")
    ring_args(sp)
    sp.add_argument("--unnormalized", action="store_true")

    sp = sub.add_parser("cup-table", parents=[common], help="homology pairing and graded ring axioms")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--coeff", default="F2")
    sp.add_argument("--pair", help="n,i:m,j")
    sp.add_argument("--truncation", type=int)
    sp.add_argument("--perturbations", type=int, default=10)
    sp.add_argument("--verify-axioms", action="store_true")
    sp.add_argument("--nmax", type=int, default=2)
    sp.add_argument("--pmax", type=int, default=2)

    sp = sub.add_parser("hochschild", parents=[common], help="higher Hochschild dimensions of an algebra")
    sp.add_argument("--algebra", required=True, help='e.g. "F2[x]/x^2" or a JSON structure-constant file')
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--max-degree", type=int, default=4)
    sp.add_argument("--truncation", type=int)
    sp.add_argument("--dg", action="store_true", help="also compute the dg bar side")

    sp = sub.add_parser("export-complex", parents=[common], help="write chains of B^n S as JSON")
    ring_args(sp)
    sp.add_argument("--unnormalized", action="store_true")
    sp.add_argument("--complex-output", help="complex file (defaults to --output)")
    sp.add_argument("--roundtrip", action="store_true")

    sp = sub.add_parser("verify", parents=[common], help="run verification suites")
    sp.add_argument("--suite", action="append", help=f"one of {', '.join(SUITES)} or all (repeatable)")
    sp.add_argument("--ring")
    sp.add_argument("--coeff", default="Z")
    sp.add_argument("--fault-injection", action="store_true")
    return p


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> tuple[int, dict | None]:
    args = build_parser().parse_args(argv)
    old_cap = os.environ.get("BARCALC_CAP")
    try:
        if args.cap is not None:
            if args.cap < 1:
                raise InvalidInput("--cap must be positive")
            os.environ["BARCALC_CAP"] = str(args.cap)
        simplex_cap()
        start = time.perf_counter()
        status = EXIT_OK
        cmd = args.command
        base = dict(command=cmd, seed=args.seed, cap=args.cap)
        if cmd in ("em-homotopy", "em-homology", "export-complex"):
            out_file = getattr(args, "complex_output", None) or args.output if cmd == "export-complex" else args.output
            cfg = RunConfig(ring=args.ring, n=args.n, coeff=getattr(args, "coeff", "Z"), max_degree=args.max_degree,
                            truncation=args.truncation, output=out_file, **base)
            if cmd == "em-homotopy":
                results = cmd_em_homotopy(cfg)
            elif cmd == "em-homology":
                results = cmd_em_homology(cfg, not args.unnormalized)
            else:
                results = cmd_export_complex(cfg, args.unnormalized, args.roundtrip)
        elif cmd == "cup-table":
            cfg = RunConfig(ring=args.ring, coeff=args.coeff, truncation=args.truncation, max_degree=0, **base)
            results = cmd_cup_table(cfg, args.pair, args.verify_axioms, args.nmax, args.pmax, args.perturbations)
            results_ok = results.get("axioms", {}).get("ok", True)
            status = EXIT_OK if results_ok else EXIT_FAILED
        elif cmd == "hochschild":
            cfg = RunConfig(n=args.n, max_degree=args.max_degree, truncation=args.truncation, **base)
            results = cmd_hochschild(cfg, args.algebra, args.dg)
        else:
            cfg = RunConfig(ring=args.ring, coeff=args.coeff, **base)
            results, ok = cmd_verify(cfg, args.suite or ["all"], args.fault_injection)
            status = EXIT_OK if ok else EXIT_FAILED
        inputs = {k: v for k, v in sorted(vars(args).items())
                  if k not in ("command", "output", "complex_output") and v is not None}
        doc = result_document(cmd, inputs, results, time.perf_counter() - start)
        if cmd == "export-complex" and not args.complex_output:
            # the complex file took --output; the result document goes to stdout
            _emit(doc, None)
        else:
            _emit(doc, args.output)
        return status, doc
    except ResourceBudgetExceeded as exc:
        print(f"barcalc: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP, None
    except (InvalidInput, BarcalcError, OSError) as exc:
        print(f"barcalc: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID, None
    finally:
        if args.cap is not None:
            if old_cap is None:
                os.environ.pop("BARCALC_CAP", None)
            else:
                os.environ["BARCALC_CAP"] = old_cap


def main(argv: list[str] | None = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    raise SystemExit(main())
