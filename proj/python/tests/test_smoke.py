import pytest

import alearn


def test_catalog():
    names = alearn.problem_names()
    for want in ("ramp1d", "tent1d", "gradient2d", "convex1d", "minimax"):
        assert want in names
    assert alearn.eta("ramp1d", [0.75]) == pytest.approx(0.5)


def test_index_set_and_bump():
    assert alearn.index_set(1024, 1) == [0, 1, 2, 3, 4]
    assert alearn.bump_u(0.0, 3) == 1.0
    assert alearn.bump_u(0.6, 3) == 0.0
    assert alearn.bump_u(0.3, 3) > alearn.bump_u(0.35, 3)


def test_active_run_respects_budget():
    out = alearn.run_active("shifted_ramp1d", 4096, seed=3)
    assert out["labels_used"] <= 4096
    assert out["iterations"]
    assert out["termination"] in {"empty_active_set", "budget_exhausted", "loop_end"}
    assert out["excess_risk"] >= 0.0
    again = alearn.run_active("shifted_ramp1d", 4096, seed=3)
    assert again == out


def test_passive_run():
    out = alearn.run_passive("ramp1d", 1 << 14)
    assert out["excess_risk"] <= 0.01


def test_run_csv_is_deterministic():
    a = alearn.run_csv(problem="ramp1d", budgets=[256, 1024], replications=2, seed=5)
    b = alearn.run_csv(problem="ramp1d", budgets=[256, 1024], replications=2, seed=5, jobs=2)
    assert a == b
    assert a.splitlines()[0] == alearn.RUN_CSV_HEADER


def test_bad_config_raises():
    with pytest.raises(ValueError):
        alearn.run_csv(budgetz=3)


def test_minimax_and_quick_verify():
    assert all(row["passed"] for row in alearn.minimax_check())
    rows = alearn.verify("7")
    assert len(rows) == 1 and rows[0]["passed"]
