"""Acceptance criteria 1-8.  The terminal summary prints one line per criterion."""

import itertools
import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from funcomp.bounds import capacity_id, capacity_sum, lower_bound_gamma, lower_bound_general
from funcomp.capacity import capacity_oracle, case_of, clause_table, normalize_sources
from funcomp.codes import CATALOG_IDS, is_realizable, paper_code, rate_of, verify_converse_counting
from funcomp.ffield import Matrix, gf
from funcomp.model import (
    OMEGA_1,
    OMEGA_2,
    T2_ROWS,
    MatrixType,
    Model,
    classify,
    enumerate_states,
    find_isomorphism,
    make_model,
)
from funcomp.search import SearchSpec, scan_capacity_floor, search_linear

from _codegen import perturbed_code, states_below
from _oracles import brute_admissible

F = Fraction
HERE = Path(__file__).parent
F2 = gf(2)


def _rank2_matrices(kind):
    for rows in itertools.product(itertools.product(range(2), repeat=2), repeat=3):
        M = Matrix(rows, F2)
        if all(any(r) for r in rows) and M.rank() == 2 and classify(M) is kind:
            yield M


def _clause_value(model):
    cid = case_of(model)
    return cid, next(v for c, ok, v in clause_table(model) if c == cid)


@pytest.mark.criterion(1)
def test_type1_sweep():
    mats = list(_rank2_matrices(MatrixType.TYPE1))
    assert len(mats) == 6
    start = time.perf_counter()
    seen = 0
    for m in (1, 2, 3):
        for om in enumerate_states(3, m):
            for T in mats:
                model = Model(om, T)
                res = capacity_oracle(model)
                cid, value = _clause_value(model)
                assert res.value == value and res.case == cid
                assert value in {F(2), F(1), F(2, 3)}
                assert res.value == lower_bound_gamma(model), model
                seen += 1
    assert seen == 6 * (1 + 25 + 265)
    assert time.perf_counter() - start < 10


def _is_three_quarter_pattern(model):
    order = normalize_sources(model)
    g = [model.gamma[i] for i in order]
    normalized = make_model(g, T2_ROWS, m=model.m)
    return any(find_isomorphism(normalized, Model(om, Matrix(T2_ROWS, F2))) for om in (OMEGA_1, OMEGA_2))


@pytest.mark.criterion(2)
def test_type2_sweep():
    mats = list(_rank2_matrices(MatrixType.TYPE2))
    assert len(mats) == 18
    start = time.perf_counter()
    special = 0
    for m in (1, 2, 3):
        for om in enumerate_states(3, m):
            for T in mats:
                model = Model(om, T)
                res = capacity_oracle(model)
                cid, value = _clause_value(model)
                assert res.value == value
                assert value in {F(2), F(3, 2), F(1), F(2, 3), F(3, 4)}
                general = lower_bound_general(model)
                if m == 3 and _is_three_quarter_pattern(model):
                    special += 1
                    assert cid == "Theorem6-m3-clause4" and res.provenance == "Theorem3"
                    assert res.value == F(3, 4) and general == F(2, 3)
                else:
                    assert cid != "Theorem6-m3-clause4"
                    assert res.value == general, model
    assert special == 216
    assert time.perf_counter() - start < 60


CATALOG_RATES = [F(3, 4), F(2, 3), F(2, 3), F(3, 2), 2, 2, 2, 2, 1, 1, 1, 2, 1, 1]


@pytest.mark.criterion(3)
def test_catalog_codes():
    assert len(CATALOG_IDS) == 14
    start = time.perf_counter()
    for cid, rate in zip(CATALOG_IDS, CATALOG_RATES):
        model, code = paper_code(cid)
        assert is_realizable(model, code), cid
        assert rate_of(model, code).rate == rate, cid
    assert time.perf_counter() - start < 5
    for cid in CATALOG_IDS:
        model, code = paper_code(cid)
        assert brute_admissible(model, code), cid


@pytest.mark.criterion(4)
def test_achievability_by_search():
    start = time.perf_counter()
    om1 = Model(OMEGA_1, Matrix(T2_ROWS, F2))
    out = search_linear(SearchSpec(om1, 4, 3))
    assert out.found is not None and is_realizable(om1, out.found)
    assert rate_of(om1, out.found).rate == F(3, 4)
    scan = scan_capacity_floor(om1, 4)
    assert scan.floor == F(3, 4) and scan.attained_at == 4
    for cid in ("T1-m3-rate23", "T2-m3-rate23"):
        model, _ = paper_code(cid)
        out = search_linear(SearchSpec(model, 3, 2))
        assert out.found is not None and is_realizable(model, out.found), cid
        assert rate_of(model, out.found).rate == F(2, 3)
    assert time.perf_counter() - start < 300


@pytest.mark.criterion(5)
def test_linear_converse_exhaustion():
    fixture = json.loads((HERE / "fixtures" / "converse_exhaustion.json").read_text())
    runs = {r["name"]: r for r in fixture["runs"]}
    assert set(runs) == {"omega1", "omega2"}
    start = time.perf_counter()
    for name, om in (("omega1", OMEGA_1), ("omega2", OMEGA_2)):
        model = Model(om, Matrix(T2_ROWS, F2))
        assert runs[name]["model"] == model.to_json()
        out = search_linear(SearchSpec(model, 3, 2))
        doc = out.to_json()
        assert doc["status"] == "exhausted" and doc["certificate"] is None
        for key in ("status", "nodes_visited", "pruned", "pruned_by"):
            assert doc[key] == runs[name][key], (name, key)
    assert time.perf_counter() - start < 1800


@pytest.mark.criterion(6)
def test_counting_converse():
    model, code = paper_code("T2-m3-rate34")
    rep = verify_converse_counting(model, code)
    assert rep.holds and rep.image_size >= 2 ** 9
    rng = random.Random(2024)
    states = states_below()
    below_forwarding = 0
    for _ in range(100):
        om = rng.choice(states)
        k = rng.randint(1, 4)
        model = Model(om, Matrix(T2_ROWS, F2))
        code = perturbed_code(model, k, rng, tries=20)
        assert is_realizable(model, code)
        rep = verify_converse_counting(model, code)
        assert rep.holds, rep.to_json()
        if rep.n < k * max(len(om.theta(j)) for j in range(3)):
            below_forwarding += 1
    assert below_forwarding >= 50


def _theorem1_instances():
    for s, m in ((2, 1), (2, 2), (3, 1), (3, 2)):
        for om in enumerate_states(s, m):
            yield Model(om, Matrix([[1]] * s, F2)), capacity_sum
            yield Model(om, Matrix.identity(s, F2)), capacity_id


@pytest.mark.criterion(7)
def test_closed_forms_match_scans():
    checked = 0
    for model, formula in _theorem1_instances():
        value = formula(model)
        if value.denominator > 4:
            continue
        scan = scan_capacity_floor(model, 4)
        assert scan.floor == value, model
        checked += 1
    assert checked == 68


@pytest.mark.criterion(8)
def test_property_suites():
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-m", "property", "-q", "-p", "no:cacheprovider", str(HERE)],
        capture_output=True,
        text=True,
        cwd=HERE.parent,
    )
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stdout[-3000:]
    assert " passed" in proc.stdout and "failed" not in proc.stdout
    assert elapsed < 120, f"property suites took {elapsed:.1f}s"
