import pytest

from khcob.errors import KhError, UnsupportedVariant
from khcob.homology import Verdict
from khcob.laurent import LaurentPolynomial
from khcob.verify import (MOVE7_ENV, TABLE, kauffman_oracle, kh_threads, plan, variants, verify_all,
                          verify_movie_move)

from conftest import load


def test_oracle_small_examples():
    assert kauffman_oracle(load("unknot")) == LaurentPolynomial({-1: 1, 1: 1})
    assert kauffman_oracle(load("unlink2")) == LaurentPolynomial({-2: 1, 0: 2, 2: 1})
    assert kauffman_oracle(load("empty")) == LaurentPolynomial({0: 1})


def test_oracle_trefoil_is_chiral():
    right, left = kauffman_oracle(load("trefoil_right")), kauffman_oracle(load("trefoil_left"))
    assert right != left
    assert right == LaurentPolynomial({j: v for j, v in ((1, 1), (3, 1), (5, 1), (9, -1))})
    assert left == LaurentPolynomial({-j: v for j, v in right.coeffs.items()})


def test_table_covers_every_move():
    assert {n for n, _ in TABLE} == set(range(1, 16))
    for n in range(1, 16):
        assert variants(n)
        for v in variants(n):
            assert all(x in (Verdict.SAME, Verdict.OPPOSITE) for x in TABLE[(n, v)])


@pytest.mark.parametrize("n,direction", [(1, "down"), (1, "up"), (2, "down"), (3, "up"), (9, "down")])
def test_same_moves(n, direction):
    r = verify_movie_move(n, direction=direction)
    assert r.verdict is Verdict.SAME
    assert r.passed


def test_move6_positive_twist_is_opposite():
    r = verify_movie_move(6, "pos-front", "down")
    assert r.verdict is Verdict.OPPOSITE
    assert r.passed


def test_move8_down_is_same():
    assert verify_movie_move(8, "over", "down").verdict is Verdict.SAME


def test_move7_is_gated(monkeypatch):
    monkeypatch.delenv(MOVE7_ENV, raising=False)
    with pytest.raises(UnsupportedVariant):
        verify_movie_move(7)
    with pytest.raises(UnsupportedVariant):
        plan({"groups": ["table"], "moves": [7]})
    assert all(c.args[0] != 7 for c in plan({"groups": ["table"]}))
    monkeypatch.setenv(MOVE7_ENV, "1")
    assert any(c.args[0] == 7 for c in plan({"groups": ["table"]}))


def test_move7_runs_when_enabled():
    r = verify_movie_move(7, enable_move7=True)
    assert r.verdict is Verdict.SAME


def test_bad_direction():
    with pytest.raises(ValueError):
        verify_movie_move(1, direction="sideways")


def test_plan_groups():
    assert len(plan({"groups": ["morse"]})) == 3
    with pytest.raises(KhError):
        plan({"groups": ["nonsense"]})


def test_self_checks_pass(monkeypatch):
    monkeypatch.setenv("KH_THREADS", "1")
    report = verify_all({"groups": ["complex", "oracle", "maps", "inverses", "morse"]})
    assert report["passed"], report["failures"]
    assert report["total"] == len(plan({"groups": ["complex", "oracle", "maps", "inverses", "morse"]}))


def test_fault_injection_is_detected(monkeypatch):
    monkeypatch.setenv("KH_THREADS", "1")
    report = verify_all({"groups": ["maps"], "corrupt": "r2-add"})
    assert report["failures"] == ["chain map r2-add"]


def test_parallel_matches_serial(monkeypatch):
    config = {"groups": ["table"], "moves": [1, 2], "directions": ["down"]}
    monkeypatch.setenv("KH_THREADS", "1")
    serial = verify_all(config)
    monkeypatch.setenv("KH_THREADS", "2")
    assert verify_all(config) == serial


def test_kh_threads(monkeypatch):
    monkeypatch.setenv("KH_THREADS", "1")
    assert kh_threads() == 1
    monkeypatch.setenv("KH_THREADS", "100000")
    assert kh_threads() >= 1
    monkeypatch.setenv("KH_THREADS", "lots")
    with pytest.raises(KhError):
        kh_threads()
