import json
import subprocess
import sys

import pytest

from funcomp.cli import main
from funcomp.codes import CATALOG_IDS

OMEGA1_T2 = {"q": 2, "s": 3, "m": 3, "gamma": [[1, 2], [1, 3], [2, 3]], "T": [[1, 0], [1, 0], [0, 1]]}
OMEGA1_T1 = dict(OMEGA1_T2, T=[[1, 0], [0, 1], [1, 1]])


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_capacity(capsys, write):
    code, doc = run(capsys, "capacity", "--model", write("m.json", OMEGA1_T2))
    assert code == 0
    assert doc["value"] == "3/4" and doc["provenance"] == "Theorem3"


def test_capacity_out_of_coverage(capsys, write):
    four = {"q": 2, "s": 3, "m": 4, "gamma": [[1], [2], [3, 4]], "T": [[1, 0], [1, 0], [0, 1]]}
    code, doc = run(capsys, "capacity", "--model", write("m.json", four))
    assert code == 4 and doc["status"] == "out_of_coverage"


def test_classify(capsys, write):
    code, doc = run(capsys, "classify", "--model", write("m.json", OMEGA1_T1))
    assert code == 0 and doc["type"] == "Type1" and doc["rank"] == 2
    code, doc = run(capsys, "classify", "--model", write("n.json", OMEGA1_T2))
    assert doc["type"] == "Type2" and doc["dependent_pairs"] == [[1, 2]]


def test_bound(capsys, write):
    code, doc = run(capsys, "bound", "--model", write("m.json", OMEGA1_T2))
    assert code == 0
    assert doc["lower_bound_general"] == "2/3" and doc["lower_bound_gamma"] == "2/3"
    assert sorted(e for p in doc["witness"]["partition"] for e in p) == doc["witness"]["cut"]


def test_transform(capsys, write):
    code, doc = run(capsys, "transform", "--model", write("m.json", OMEGA1_T2))
    assert code == 0 and doc["ell"] == 2 and len(doc["edges"]) == 15


def test_catalog_code_then_verify(capsys, write, tmp_path):
    code, doc = run(capsys, "paper-code", "--id", "T2-m3-rate34", "--out-dir", str(tmp_path))
    assert code == 0 and doc["rate"] == "3/4"
    combined = str(tmp_path / "T2-m3-rate34.json")
    code, doc = run(capsys, "verify", "--code", combined)
    assert code == 0 and doc["admissible"] is True and doc["rate"] == "3/4"
    code_only = write("c.json", json.load(open(combined))["code"])
    code, doc = run(capsys, "verify", "--model", write("m.json", OMEGA1_T2), "--code", code_only)
    assert code == 0 and doc["admissible"] is True


def test_verify_inadmissible(capsys, write):
    zero = {"k": 1, "encoders": [{"linear": [[0], [0]], "columns": 1}] * 3}
    code, doc = run(capsys, "verify", "--model", write("m.json", OMEGA1_T2), "--code", write("c.json", zero))
    assert code == 2 and doc["admissible"] is False


def test_seed_fixtures(capsys, tmp_path):
    code, doc = run(capsys, "paper-code", "--seed-fixtures", str(tmp_path / "fx"))
    assert code == 0 and doc["written"] == list(CATALOG_IDS)
    for cid in CATALOG_IDS:
        for suffix in (".json", ".model.json", ".code.json"):
            assert (tmp_path / "fx" / f"{cid}{suffix}").exists()
        code, doc = run(capsys, "verify", "--model", str(tmp_path / "fx" / f"{cid}.model.json"),
                        "--code", str(tmp_path / "fx" / f"{cid}.code.json"))
        assert code == 0 and doc["admissible"], cid


def test_search_found_and_exhausted(capsys, write):
    path = write("m.json", OMEGA1_T2)
    code, doc = run(capsys, "search", "--model", path, "--k", "2", "--n", "2")
    assert code == 0 and doc["status"] == "found"
    code, doc = run(capsys, "search", "--model", path, "--k", "3", "--n", "2")
    assert code == 3 and doc["status"] == "exhausted"
    code, doc = run(capsys, "search", "--model", path, "--k", "1", "--n", "1", "--class", "table")
    assert code == 0 and doc["class"] == "table"


def test_search_cap(capsys, write):
    om2 = dict(OMEGA1_T2, gamma=[[1, 2], [1, 3], [1, 2, 3]])
    code, doc = run(capsys, "search", "--model", write("m.json", om2), "--k", "4", "--n", "4")
    assert code == 4 and doc["status"] == "cap_exceeded"


def test_isomorphic(capsys, write):
    rel_a = {"q": 2, "s": 3, "m": 3, "gamma": [[1], [1, 2, 3], [2, 3]], "T": [[1, 0], [0, 1], [1, 1]]}
    rel_b = {"q": 2, "s": 3, "m": 3, "gamma": [[1, 2, 3], [1, 3], [2]], "T": [[0, 1], [1, 1], [1, 0]]}
    code, doc = run(capsys, "isomorphic", "--model", write("a.json", rel_a), "--other", write("b.json", rel_b))
    assert code == 0 and doc["isomorphic"] is True and doc["perm"]["pi"] == [3, 1, 2]
    code, doc = run(capsys, "isomorphic", "--model", write("a.json", rel_a), "--other", write("c.json", OMEGA1_T1))
    assert doc == {"isomorphic": False, "perm": None}


def test_enumerate(capsys):
    code, doc = run(capsys, "enumerate", "--s", "3", "--m", "2")
    assert code == 0 and doc["count"] == 25 == len(doc["states"])
    assert run(capsys, "enumerate", "--s", "5", "--m", "1")[0] == 1


def test_malformed_and_invalid(capsys, write):
    assert run(capsys, "capacity", "--model", write("bad.json", "{not json"))[0] == 1
    assert run(capsys, "capacity", "--model", write("bad2.json", {"q": 2}))[0] == 1
    assert run(capsys, "capacity", "--model", "/nonexistent.json")[0] == 1
    empty = dict(OMEGA1_T2, gamma=[[], [1, 3], [2, 3]])
    assert run(capsys, "capacity", "--model", write("e.json", empty))[0] == 2
    assert run(capsys, "paper-code", "--id", "nope")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_module_entry_point(write):
    proc = subprocess.run([sys.executable, "-m", "funcomp", "capacity", "--model", write("m.json", OMEGA1_T2)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == "3/4"
