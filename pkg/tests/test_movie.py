import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khcob.errors import DiagramError, MovieSyntaxError, PatternMismatch
from khcob.movie import FIXTURES, Movie, MovieStep, concatenate, evaluate_movie, load_movie, parse_movie
from khcob.moves import check_chain_map, move

from conftest import load

MOVIES = sorted(p.stem for p in (FIXTURES / "movies").glob("*.movie"))


@pytest.mark.parametrize("name", MOVIES)
def test_bundled_movies_evaluate(name):
    m = load_movie(FIXTURES / "movies" / f"{name}.movie")
    r = evaluate_movie(m)
    assert r.chain_map.bidegree == (0, r.chi)
    assert check_chain_map(r.chain_map)


@pytest.mark.parametrize("name", MOVIES)
def test_script_round_trip(name):
    m = load_movie(FIXTURES / "movies" / f"{name}.movie")
    again = parse_movie(m.to_script())
    assert again.moves == m.moves
    assert again.source == m.source


def test_closed_surface_values():
    def value(name):
        block = evaluate_movie(load_movie(FIXTURES / "movies" / f"{name}.movie")).chain_map.block(0, 0)
        return block[0, 0] if block.shape == (1, 1) else 0
    assert value("sphere") == 0
    assert value("torus") == 2
    assert value("genus2") == 0


def test_euler_characteristic_counts():
    m = load_movie(FIXTURES / "movies" / "torus.movie")
    assert m.euler_characteristic() == 0
    assert load_movie(FIXTURES / "movies" / "sphere.movie").euler_characteristic() == 2


@pytest.mark.parametrize("text,line,column", [
    ("movie v2\n", 1, 1),
    ("movie v1\nmove birth l1\n", 2, 1),
    ("movie v1\ndiagram unknot.json\nmove fold l1\nend\n", 3, 6),
    ("movie v1\ndiagram unknot.json\nmove saddle e1\nend\n", 3, 13),
    ("movie v1\ndiagram unknot.json\nmove r1 add sideways 1 left\nend\n", 3, 13),
    ("movie v1\ndiagram unknot.json\nmove birth l2\n", 4, 1),
    ("movie v1\ndiagram unknot.json\nend\nmove birth l2\n", 4, 1),
    ("movie v1\ndiagram unknot.json\nmove isotopy { c1->c2 \nend\n", 3, 20),
    ("movie v1\ndiagram nowhere.json\nend\n", 2, 9),
])
def test_syntax_errors_carry_position(text, line, column):
    with pytest.raises(MovieSyntaxError) as info:
        parse_movie(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_failing_move_reports_still():
    text = "movie v1\ndiagram unknot.json\nmove birth l9\nmove r1 remove c7\nend\n"
    with pytest.raises(PatternMismatch) as info:
        evaluate_movie(parse_movie(text))
    assert info.value.still == 1


def test_comments_and_blank_lines():
    text = "# header\n\nmovie v1  # version\ndiagram unknot.json\n\nmove birth l9 # new\nend\n"
    assert len(parse_movie(text).steps) == 1


def test_concatenation():
    d = load("unknot")
    lid = d.fresh_loop_id()
    a = parse_movie(f"movie v1\ndiagram unknot.json\nmove birth {lid}\nend\n")
    c = Movie(evaluate_movie(a).target, [MovieStep(move("Death", lid))])
    both = concatenate(a, c)
    assert both.euler_characteristic() == 2
    assert evaluate_movie(both).target == d
    assert evaluate_movie(both).chain_map.bidegree == (0, 2)
    with pytest.raises(DiagramError):
        concatenate(c, c)


def test_empty_movie_is_identity():
    d = load("trefoil_right")
    r = evaluate_movie(Movie(d, []))
    assert r.chain_map.bidegree == (0, 0)
    assert all(hm.is_identity() for hm in r.on_homology().values())


@settings(max_examples=20, deadline=None)
@given(st.lists(st.sampled_from(["birth", "split"]), min_size=1, max_size=4))
def test_bidegree_is_chi(ops):
    lines = ["movie v1", "diagram unknot.json"]
    d = load("unknot")
    loops = list(d.free_loops)
    k = 0
    for op in ops:
        if op == "birth":
            k += 1
            lines.append(f"move birth n{k}")
            loops.append(f"n{k}")
        else:
            lines.append(f"move saddle {loops[0]} {loops[0]}")
            loops = None
            break
    lines.append("end")
    m = parse_movie("\n".join(lines) + "\n")
    r = evaluate_movie(m)
    assert r.chain_map.bidegree == (0, m.euler_characteristic())
