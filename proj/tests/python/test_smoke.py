import math

import pytest

import covertnet


def test_min_error_reference_points():
    assert covertnet.min_detection_error(1.0, 2.0) == pytest.approx(0.5, abs=1e-12)
    assert covertnet.min_detection_error(1.0, 1.0) == pytest.approx(1 - math.exp(-1), abs=1e-12)


def test_threshold_minimizes_error():
    l1, l2, s2 = 0.7, 1.9, 0.01
    theta = covertnet.optimal_threshold(l1, l2, s2)
    err = lambda t: covertnet.false_alarm(t, l1, l2, s2) + covertnet.missed_detection(t, l1, l2, s2)
    assert err(theta) == pytest.approx(covertnet.min_detection_error(l1, l2, s2), abs=1e-12)
    for dt in (-1e-2, 1e-2):
        assert err(theta + dt) >= err(theta)


def test_resolved_config_fills_defaults():
    cfg = covertnet.resolved_config({"seed": 5})
    assert cfg["seed"] == 5
    assert "positions" in cfg and "solver" in cfg


def test_unknown_key_rejected():
    with pytest.raises(covertnet.ValidationError):
        covertnet.resolved_config({"sede": 5})


def test_solve_slot_is_feasible_with_loud_jammer():
    r = covertnet.solve_slot({"p_jmax_dbw": 20, "seed": 3})
    assert r["status"] in {"optimal", "infeasible", "max_iters"}
    if r["status"] != "infeasible":
        assert 0.0 <= r["p_ab"] <= 1.0
        assert r["objective"] == pytest.approx(r["secrecy_rate"] + r["carol_rate"])
        assert all(b >= a - 1e-12 for a, b in zip(r["trajectory"], r["trajectory"][1:]))


def test_sweep_is_deterministic():
    cfg = {"p_jmax_dbw": 20, "sweep": {"parameter": "d_ab", "values": [5, 10, 15], "trials": 40}}
    a = covertnet.sweep(cfg)
    assert a == covertnet.sweep(cfg)
    assert [row["value"] for row in a] == [5, 10, 15]
    assert a[0]["mean_rate"] >= a[-1]["mean_rate"]


def test_cli_unknown_subcommand():
    code, _, err = covertnet.run_cli(["frobnicate"])
    assert code == 2
    assert err
