import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khcob.errors import PatternMismatch, UnsupportedVariant
from khcob.homology import Verdict, equal_up_to_sign
from khcob.moves import ChainMap, apply_move, catalog, check_chain_map, move
from khcob.verify import _check_commute, _compatible_pairs, _corrupt, _local_moves, reverse_run, run_moves

from conftest import load
from strategies import braid_diagrams

LOCAL = _local_moves(load("trefoil_right"))
EXPECTED_DJ = {"birth": 1, "death": 1, "saddle": -1}


@pytest.mark.parametrize("name,start,m", LOCAL, ids=[x[0] for x in LOCAL])
def test_local_map_is_chain_map(name, start, m):
    _, f = apply_move(start, m)
    assert check_chain_map(f)
    assert f.dj == EXPECTED_DJ.get(name, 0)


@pytest.mark.parametrize("name,start,m", LOCAL, ids=[x[0] for x in LOCAL])
def test_corrupted_map_is_caught(name, start, m):
    _, f = apply_move(start, m)
    if f.is_zero():
        pytest.skip("zero map")
    assert not check_chain_map(_corrupt(f))


def _round_trip(start, moves):
    run = run_moves(start, moves)
    back = reverse_run(run)
    there = equal_up_to_sign((back.chain_map @ run.chain_map).on_homology(),
                             ChainMap.identity(start).on_homology())
    again = equal_up_to_sign((run.chain_map @ back.chain_map).on_homology(),
                             ChainMap.identity(run.end).on_homology())
    return there, again


@pytest.mark.parametrize("name", ["r1-add-pos", "r1-add-neg", "r1-remove", "r2-add", "r2-remove", "r3", "r3bar"])
def test_reidemeister_inverse_is_plus_minus_identity(name):
    start, m = {n: (s, mv) for n, s, mv in LOCAL}[name]
    assert Verdict.DIFFERENT not in _round_trip(start, [m])


def test_r3bar_round_trip_is_same():
    d = load("triangles")
    m = {n: mv for n, _, mv in LOCAL}["r3bar"]
    mid, _ = apply_move(d, m)
    assert mid != d
    assert _round_trip(d, [m]) == (Verdict.SAME, Verdict.SAME)


def test_r3_rejects_mirror_triangle():
    d = load("triangles")
    m = {n: mv for n, _, mv in LOCAL}["r3bar"]
    with pytest.raises(PatternMismatch):
        apply_move(d, move("R3", *m.site))


def test_r3bar_rejects_native_triangle():
    d = load("triangles")
    m = {n: mv for n, _, mv in LOCAL}["r3"]
    with pytest.raises(PatternMismatch):
        apply_move(d, move("R3Bar", *m.site))


def test_unknown_r3_variant():
    d = load("triangles")
    m = {n: mv for n, _, mv in LOCAL}["r3"]
    with pytest.raises(UnsupportedVariant):
        apply_move(d, move("R3", *m.site, variant="braidlike"))


def test_r1_remove_needs_a_kink():
    with pytest.raises(PatternMismatch):
        apply_move(load("trefoil_right"), move("R1Remove", "c1"))


def test_distant_moves_commute():
    ok, detail = _check_commute()
    assert ok, detail


def test_catalog_lists_every_kind():
    text = "\n".join(catalog())
    for kind in ["Birth", "Death", "Saddle", "R1AddPos", "R1AddNeg", "R1Remove", "R2Add", "R2Remove",
                 "R3 ", "R3Bar", "Isotopy"]:
        assert kind in text


@settings(max_examples=25, deadline=None)
@given(braid_diagrams(max_len=4), st.data())
def test_random_r1_is_chain_isomorphism(d, data):
    edge = data.draw(st.sampled_from(sorted(d.edges)))
    kind = data.draw(st.sampled_from(["R1AddPos", "R1AddNeg"]))
    side = data.draw(st.sampled_from(["left", "right"]))
    m = move(kind, edge, side=side)
    _, f = apply_move(d, m)
    assert check_chain_map(f)
    assert f.bidegree == (0, 0)
    assert Verdict.DIFFERENT not in _round_trip(d, [m])


@settings(max_examples=20, deadline=None)
@given(braid_diagrams(max_len=3), st.data())
def test_random_r2_is_chain_isomorphism(d, data):
    pairs = [p for face in d.faces() for p in _compatible_pairs(face)]
    if not pairs:
        return
    a, b = data.draw(st.sampled_from(pairs))
    m = move("R2Add", a, b, over=data.draw(st.booleans()))
    _, f = apply_move(d, m)
    assert check_chain_map(f)
    assert Verdict.DIFFERENT not in _round_trip(d, [m])
