import json

import pytest

from khcob.cli import run
from khcob.movie import FIXTURES

MOVIES = FIXTURES / "movies"


def kh(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_slice(capsys):
    code, out, _ = kh(capsys, "homology", "8_18", "--j", "-7")
    assert code == 0
    assert out.splitlines() == ["H^{-4,-7}=0", "H^{-3,-7}=Z^3 + Z/2"]


def test_homology_json(capsys):
    code, out, _ = kh(capsys, "homology", "unknot", "--json")
    assert code == 0
    rows = json.loads(out)
    assert [(r["i"], r["j"]) for r in rows] == [(0, -1), (0, 1)]


def test_complex(capsys):
    code, out, _ = kh(capsys, "complex", "8_18", "--i", "-4", "--j", "-7", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["rank"] == 5
    assert len(data["differential"]) == 8


def test_euler_and_oracle(capsys):
    _, euler, _ = kh(capsys, "euler", "trefoil_right")
    code, oracle, _ = kh(capsys, "oracle", "trefoil_right", "--check")
    assert code == 0
    assert oracle.splitlines()[0] == euler.strip()


def test_closed_movies(capsys):
    _, out, _ = kh(capsys, "movie", str(MOVIES / "torus.movie"))
    assert out.strip() == "map Z -> Z : *2, chi = 0"
    _, out, _ = kh(capsys, "movie", str(MOVIES / "sphere.movie"))
    assert out.strip() == "map Z -> Z : *0, chi = 2"


def test_movie_compare(capsys):
    script = str(MOVIES / "unlink_swap.movie")
    code, out, _ = kh(capsys, "movie", script, "--homology", "--up-to-sign-compare", script)
    assert code == 0
    assert out.strip().endswith("compare: Same")


def test_lefschetz(capsys):
    code, out, _ = kh(capsys, "lefschetz", str(MOVIES / "8_18_identity.movie"), "--j", "-7")
    assert code == 0
    assert out.startswith("L_-7 = -3")


def test_verify_single_move(capsys):
    code, out, _ = kh(capsys, "verify", "--move", "1", "--direction", "down")
    report = json.loads(out)
    assert code == 0
    assert report["passed"]


def test_verify_move7_gated(capsys, monkeypatch):
    monkeypatch.delenv("KH_ENABLE_MOVE7", raising=False)
    code, _, err = kh(capsys, "verify", "--move", "7")
    assert code == 1
    assert "move 7" in err


def test_moves_list(capsys):
    code, out, _ = kh(capsys, "moves", "--list")
    assert code == 0
    assert "R3Bar" in out
    assert "7: tetrahedron [gated]" in out


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["homology"], ["complex", "unknot"],
                                  ["verify", "--move", "99"]])
def test_usage_errors(capsys, argv):
    assert kh(capsys, *argv)[0] == 2


@pytest.mark.parametrize("argv", [["homology", "/no/such/file.json"], ["movie", "/no/such.movie"],
                                  ["lefschetz", str(MOVIES / "sphere.movie"), "--j", "0"]])
def test_domain_errors(capsys, argv):
    code = kh(capsys, *argv)[0]
    assert code in (0, 1)
    if argv[0] != "lefschetz":
        assert code == 1


def test_domain_error_on_bad_diagram(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"crossings": [{"id": "c1", "edges": [1, 2, 3]}]}')
    assert kh(capsys, "homology", str(bad))[0] == 1


def test_deterministic(capsys):
    first = kh(capsys, "homology", "figure_eight")[1]
    assert kh(capsys, "homology", "figure_eight")[1] == first
