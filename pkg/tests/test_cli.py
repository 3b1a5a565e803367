import json
import subprocess
import sys

import pytest

from barcalc.cli import determinism_hash, export_complex, import_complex, main, run
from barcalc.errors import ParseError
from barcalc.exact_linalg import FGAbelianGroup, IntMatrix
from barcalc.simplicial import ChainComplex


def results(argv):
    status, doc = run(argv)
    assert status == 0, argv
    return doc["results"]


def test_em_homotopy_examples(capsys):
    assert results(["em-homotopy", "--ring", "Z/5", "--n", "2", "--max-degree", "3"])["pi"] == ["0", "0", "Z/5", "0"]
    assert results(["em-homotopy", "--ring", "Z", "--n", "1", "--max-degree", "2"])["pi"] == ["0", "Z", "0"]
    assert results(["em-homotopy", "--ring", "Z/2 x Z/4", "--n", "0", "--max-degree", "2"])["pi"] == [
        "Z/2 + Z/4", "0", "0"]


def test_em_homology_examples(capsys):
    r = results(["em-homology", "--ring", "Z/2", "--n", "1", "--coeff", "Z", "--max-degree", "5"])
    assert r["H"] == ["Z", "Z/2", "0", "Z/2", "0", "Z/2"]
    assert results(["em-homology", "--ring", "Z/3", "--n", "1", "--coeff", "F3", "--max-degree", "4"])["dims"] == [1] * 5
    assert results(["em-homology", "--ring", "Z/2", "--n", "2", "--coeff", "F2", "--max-degree", "3"])["dims"] == [
        1, 0, 1, 1]
    un = results(["em-homology", "--ring", "Z/2", "--n", "1", "--coeff", "Z", "--max-degree", "3", "--unnormalized"])
    assert un["H"] == r["H"][:4] and un["normalized"] is False


def test_cup_table_examples(capsys):
    r = results(["cup-table", "--ring", "Z/2", "--coeff", "F2", "--pair", "1,1:1,1"])
    assert r["pairing"]["matrix"] == [[1]]
    r = results(["cup-table", "--ring", "Z/3", "--coeff", "F3", "--pair", "0,0:0,0"])
    mat = r["pairing"]["matrix"]
    assert len(mat) == 3 and len(mat[0]) == 9
    for a in range(3):
        for b in range(3):
            assert [row[a * 3 + b] for row in mat] == [int(k == (a * b) % 3) for k in range(3)]
    r = results(["cup-table", "--ring", "Z/6", "--verify-axioms", "--nmax", "2", "--pmax", "2"])
    assert r["axioms"]["ok"]


def test_hochschild_examples(capsys):
    r = results(["hochschild", "--algebra", "F2[x]/x^1", "--n", "1", "--max-degree", "3"])
    assert r["dims"] == [1, 0, 0, 0]
    r = results(["hochschild", "--algebra", "F2[x]/x^2", "--n", "1", "--max-degree", "4", "--dg"])
    assert r["dims"] == r["dg_dims"] == [1, 1, 1, 1, 1]
    r = results(["hochschild", "--algebra", "F2[x]/x^2", "--n", "2", "--max-degree", "3", "--dg"])
    assert r["dims"] == r["dg_dims"] == [1, 0, 1, 1]


def test_hochschild_structure_file(tmp_path, capsys):
    f = tmp_path / "dual.json"
    mul = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    f.write_text(json.dumps({"coeff": "F3", "dim": 2, "mul": mul, "unit": 0, "augmentation": [1, 0]}))
    assert results(["hochschild", "--algebra", str(f), "--max-degree", "3"])["dims"] == [1, 1, 1, 1]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"coeff": "F3", "dim": 2, "mul": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
                               "unit": 0, "augmentation": [1, 0]}))
    assert main(["hochschild", "--algebra", str(bad)]) == 2


def test_export_constant_complex():
    c = ChainComplex([1], [IntMatrix(0, 1)], FGAbelianGroup.cyclic(2))
    doc = json.loads(export_complex(c, "F2"))
    assert doc == {"ring": "F2", "degrees": [{"degree": 0, "rank": 1, "torsion": []}], "differentials": []}


def test_export_nerve_and_round_trip(tmp_path, capsys):
    out = tmp_path / "c.json"
    argv = ["export-complex", "--ring", "Z/2", "--n", "1", "--coeff", "F2", "--max-degree", "3",
            "--output", str(out), "--roundtrip"]
    r = results(argv)
    assert r["ranks"] == [1, 1, 1, 1] and r["roundtrip_equal"]
    doc = json.loads(out.read_text())
    assert all(d["entries"] == [] for d in doc["differentials"])
    first = out.read_bytes()
    results(argv)
    assert out.read_bytes() == first
    c, ring = import_complex(first.decode())
    assert ring == "F2" and c.ranks == [1, 1, 1, 1]


def test_export_over_z_reports_torsion(tmp_path, capsys):
    out = tmp_path / "z.json"
    results(["export-complex", "--ring", "Z/2", "--n", "1", "--max-degree", "3", "--output", str(out)])
    doc = json.loads(out.read_text())
    assert [d["torsion"] for d in doc["degrees"]][:3] == [[], [2], []]
    for d in doc["differentials"]:
        assert d["entries"] == sorted(d["entries"])


def test_import_rejects_tampering(tmp_path):
    c = ChainComplex([1, 1], [IntMatrix(0, 1), IntMatrix(1, 1, [0], [0], [2])], FGAbelianGroup.cyclic(0))
    text = export_complex(c, "Z")
    assert json.loads(text)["degrees"][0]["torsion"] == [2]
    import_complex(text)
    doc = json.loads(text)
    doc["degrees"][0]["torsion"] = []
    with pytest.raises(ParseError):
        import_complex(json.dumps(doc))
    with pytest.raises(ParseError):
        import_complex("{}")


def test_exit_codes(tmp_path, capsys):
    assert main(["em-homology", "--ring", "Z", "--n", "1"]) == 2
    assert main(["em-homotopy", "--ring", "Z/x"]) == 2
    assert main(["em-homotopy", "--ring", "Z/2", "--max-degree", "3", "--truncation", "2"]) == 2
    assert main(["em-homology", "--ring", "Z/7", "--n", "3"]) == 3
    assert main(["em-homology", "--ring", "Z/2", "--n", "2", "--cap", "10"]) == 3
    assert main(["verify", "--suite", "nope"]) == 2
    assert main(["export-complex", "--ring", "Z/2"]) == 2


def test_determinism_hash(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["em-homology", "--ring", "Z/3", "--n", "1", "--coeff", "F3", "--seed", "7"]
    main(argv + ["-o", str(a)])
    main(argv + ["-o", str(b)])
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    assert da["determinism_hash"] == db["determinism_hash"] == determinism_hash(da)
    assert set(da) == {"command", "inputs", "results", "timings", "artifact_version", "determinism_hash"}
    da["timings"] = {"total": 1e9}
    assert determinism_hash(da) == db["determinism_hash"]
    da["results"]["dims"][0] = 5
    assert determinism_hash(da) != db["determinism_hash"]


def test_verify_suites(capsys):
    status, doc = run(["verify", "--suite", "naturality", "--ring", "Z/3", "--coeff", "F3"])
    assert status == 0 and doc["results"]["passed"]
    status, doc = run(["verify", "--suite", "identities", "--suite", "circle", "--suite", "hopf"])
    assert status == 0


@pytest.mark.parametrize("suite", ["identities", "axioms", "naturality"])
def test_fault_injection_fails_with_witness(suite, capsys):
    status, doc = run(["verify", "--suite", suite, "--fault-injection"])
    assert status == 4
    (res,) = doc["results"]["suites"]
    assert not res["passed"] and res["witnesses"]


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "barcalc.cli", "em-homotopy", "--ring", "Z/2", "--n", "1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["results"]["pi"] == ["0", "Z/2", "0", "0"]


def test_verify_default_bounds_all_pass(capsys):
    status, doc = run(["verify"])
    assert status == 0
    assert {s["suite"] for s in doc["results"]["suites"]} == {
        "identities", "em", "homology", "cup-forms", "axioms", "naturality", "circle", "hopf", "dg", "dold-puppe"}
