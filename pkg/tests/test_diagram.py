import json

import pytest
from hypothesis import given, settings

from khcob.diagram import (OrientedDiagram, find_isomorphisms, from_braid, from_pd, is_isomorphism,
                           validate_diagram, writhe)
from khcob.errors import BadCrossing, DiagramError, SignMismatch

from conftest import DIAGRAMS, load
from strategies import braid_diagrams


@pytest.mark.parametrize("name", DIAGRAMS)
def test_fixtures_load_and_round_trip(name):
    d = load(name)
    again = OrientedDiagram.from_json(d.to_json())
    assert again == d


def test_fixture_writhes():
    assert writhe(load("trefoil_right")) == 3
    assert writhe(load("trefoil_left")) == -3
    assert writhe(load("figure_eight")) == 0
    assert writhe(load("hopf")) == 2
    assert writhe(load("8_18")) == 0


def test_sign_from_over_incoming():
    d = load("unknot_kinks")
    assert [c.sign for c in d.crossings] == [1, -1]


def test_rejects_declared_sign_mismatch():
    raw = json.loads(load("unknot_kinks").to_json())
    raw["crossings"][0]["sign"] = -1
    with pytest.raises(SignMismatch):
        validate_diagram(raw)


@pytest.mark.parametrize("mutate", [
    lambda r: r["crossings"][0].update(edges=[1, 2, 3]),
    lambda r: r["crossings"][0].update(over_incoming=3),
    lambda r: r["crossings"][0].update(id=7),
    lambda r: r.update(colour="red"),
])
def test_rejects_malformed_crossings(mutate):
    raw = json.loads(load("trefoil_right").to_json())
    mutate(raw)
    with pytest.raises(DiagramError):
        validate_diagram(raw)


def test_rejects_edge_used_three_times():
    raw = json.loads(load("trefoil_right").to_json())
    raw["crossings"][1]["edges"][0] = raw["crossings"][0]["edges"][0]
    with pytest.raises(DiagramError):
        validate_diagram(raw)


def test_bad_crossing_is_a_diagram_error():
    assert issubclass(BadCrossing, DiagramError)


def test_from_pd_matches_fixture():
    d = from_pd([[2, 4, 3, 1], [4, 6, 5, 3], [6, 2, 1, 5]])
    assert writhe(d) in (3, -3)
    assert d.n == 3


@settings(max_examples=40, deadline=None)
@given(braid_diagrams())
def test_writhe_invariant_under_relabeling(d):
    cmap = {c.id: f"x{k}" for k, c in enumerate(reversed(d.crossings))}
    emap = {e: 100 + e for e in d.edges}
    lmap = {l: f"m{l}" for l in d.free_loops}
    e = d.relabel(cmap, emap, lmap)
    assert writhe(e) == writhe(d)
    assert is_isomorphism(d, e, cmap, emap, lmap)
    assert next(find_isomorphisms(d, e), None) is not None


@settings(max_examples=40, deadline=None)
@given(braid_diagrams())
def test_every_arc_on_one_circle(d):
    for mask in range(1 << min(d.n, 4)):
        labels, r = d.resolve_mask(mask)
        assert len(labels) == len(d.members)
        assert set(labels) == set(range(r))


def test_braid_closure_components():
    assert len(from_braid([1, 1], 2).components()) == 2
    assert len(from_braid([1, 1, 1], 2).components()) == 1
