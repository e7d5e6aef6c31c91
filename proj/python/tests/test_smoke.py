import json

import pytest

import cclot


def test_generate_and_k():
    inst = cclot.generate(5, 100, 0.05, seed=1)
    assert inst.n == 5
    assert inst.m == 100
    assert inst.k() == 5
    assert len(inst.d) == 100
    assert all(len(row) == 5 for row in inst.d)


def test_json_round_trip():
    inst = cclot.generate(3, 6, 0.34, seed=9)
    text = inst.to_json()
    back = cclot.from_json(text)
    assert back.to_json() == text
    parsed = json.loads(text)
    assert parsed["n"] == 3 and parsed["m"] == 6


def test_solvers_agree_with_the_oracle():
    inst = cclot.generate(3, 6, 0.34, seed=4)
    ref = cclot.brute_force_optimum(inst)["objective"]
    for method in ("dep", "compact", "benders"):
        rep = cclot.solve(inst, method=method, time_limit=60.0)
        assert rep["status"] == "optimal"
        assert rep["objective"] == pytest.approx(ref, rel=1e-6, abs=1e-6)
    rep = cclot.solve(inst, cuts="", time_limit=60.0)
    assert rep["objective"] == pytest.approx(ref, rel=1e-6, abs=1e-6)
    assert rep["cuts"]["MIXING"] == 0


def test_incumbent_is_feasible():
    inst = cclot.generate(4, 8, 0.3, seed=11)
    rep = cclot.solve(inst, time_limit=60.0)
    assert cclot.chance_feasible(inst, rep["x"], rep["y"], rep["z"])
    assert sum(rep["z"]) <= inst.k() + 1e-6


def test_bad_arguments_raise():
    inst = cclot.generate(2, 4, 0.3, seed=2)
    with pytest.raises(ValueError):
        cclot.solve(inst, method="sorcery")
    with pytest.raises(ValueError):
        cclot.solve(inst, cuts="mixing,bogus")
    bad = cclot.Instance()
    bad.n = 0
    with pytest.raises(Exception):
        bad.validate()
