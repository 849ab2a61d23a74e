import json
from fractions import Fraction
from pathlib import Path

import pytest

import heightlab

CONFIGS = Path(__file__).resolve().parents[2] / "configs"


def load(name):
    return json.loads((CONFIGS / name).read_text())


def test_commands():
    assert "solve" in heightlab.commands()
    assert "audit" in heightlab.commands()


def test_enumeration():
    assert heightlab.count_points(1, 2) == 8
    assert heightlab.enumerate_points(1, 1) == [(0, 1), (1, 0), (1, 1), (1, -1)]


def test_log_height():
    mid, rad = heightlab.log_height((3, 4))
    assert abs(mid - 1.3862943611198906) < 1e-15
    assert rad < 1e-30


def test_twisted_report_is_deterministic():
    cfg = load("twisted_example.json")
    a, csv_a, code = heightlab.run_experiment("twisted", cfg)
    b, csv_b, _ = heightlab.run_experiment("twisted", json.dumps(cfg))
    assert code == 0
    assert a == b and csv_a == csv_b
    assert a["schema"] == 1 and a["command"] == "twisted"
    assert a["max_identity_residual"] < 1e-9


def test_malformed_config_raises():
    with pytest.raises(heightlab.HeightlabError, match="row 0"):
        heightlab.run_experiment("twisted", load("malformed_weights.json"))
    with pytest.raises(heightlab.HeightlabError):
        heightlab.run_experiment("twisted", "{not json")


def test_planted_cover():
    report, _, code = heightlab.run_experiment("solve", load("planted_p2.json"))
    assert code == 0
    assert len(report["cover"]["subspaces"]) == 3


def test_cover_of_a_line():
    pts = [(1, t, 1) for t in range(-3, 4)]
    eqs, assignment, fell_back, _ = heightlab.subspace_cover(pts)
    assert len(eqs) == 1 and not fell_back
    assert set(assignment) == {0}
    row = eqs[0][0]
    assert all(row[0] * x0 + row[1] * x1 + row[2] * x2 == 0 for x0, x1, x2 in pts)


def test_fw_weights():
    eps, c = heightlab.fw_weights(1, [[2, Fraction(1, 10)]])
    assert eps == Fraction(1, 20)
    assert [sum(row) for row in c] == [0]
    with pytest.raises(heightlab.HeightlabError):
        heightlab.fw_weights(1, [[1, 1]])


def test_simplex_select():
    b = [Fraction(3), Fraction(1), Fraction(0)]
    a = heightlab.simplex_select(b, Fraction(3, 4))
    assert sum(a) == Fraction(3, 4)
    assert all(bj >= aj * sum(b) for aj, bj in zip(a, b))


def test_ru_vojta_constants():
    assert heightlab.h0_twist(2, 3, 1) == 6
    gamma, sup, ratios = heightlab.gamma_beta(3, 20)
    assert gamma == 4 and sup == Fraction(1, 4)
    assert set(ratios) == {Fraction(4)}
    assert heightlab.delta_sigma([Fraction(1, 4), Fraction(1, 4)], 1) == [(0, 4), (4, 0)]
