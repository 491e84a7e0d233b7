import pytest

from khcob.errors import NonZeroEuler, NotEndocobordism
from khcob.laurent import LaurentPolynomial
from khcob.lefschetz import lefschetz, lefschetz_polynomial
from khcob.movie import FIXTURES, Movie, load_movie, parse_movie
from khcob.verify import kauffman_oracle

from conftest import load


def test_unknot_identity():
    res = lefschetz(Movie(load("unknot"), []), -1)
    assert res.value(-1) == 1
    assert res.consistent


@pytest.mark.parametrize("name", ["unknot", "trefoil_right", "trefoil_left", "figure_eight", "hopf", "8_18"])
def test_identity_gives_jones(name):
    d = load(name)
    res = lefschetz(Movie(d, []))
    assert res.consistent
    assert res.polynomial == kauffman_oracle(d)


def test_818_values():
    assert lefschetz(Movie(load("8_18"), []), -7).value(-7) == -3
    rot = lefschetz(load_movie(FIXTURES / "movies" / "8_18_rotation.movie"), -7)
    assert rot.consistent
    assert abs(rot.value(-7)) == 1


def test_rotation_polynomial_is_consistent():
    res = lefschetz(load_movie(FIXTURES / "movies" / "8_18_rotation.movie"))
    assert res.consistent
    assert res.chain == res.homology


def test_not_an_endocobordism():
    m = parse_movie("movie v1\ndiagram unknot.json\nmove birth l9\nmove saddle l1 l9\nmove birth l8\nend\n")
    with pytest.raises((NotEndocobordism, NonZeroEuler)):
        lefschetz(m)
    m = parse_movie("movie v1\ndiagram unknot.json\nmove birth l9\nend\n")
    with pytest.raises(NotEndocobordism):
        lefschetz(m)


def test_nonzero_euler_on_open_movie():
    m = parse_movie("movie v1\ndiagram unknot.json\nmove birth l9\nmove death l9\nend\n")
    with pytest.raises(NonZeroEuler):
        lefschetz(m)


@pytest.mark.parametrize("name,expected", [("sphere", {0: 0}), ("torus", {0: 2}), ("genus2", {0: 0})])
def test_closed_surfaces(name, expected):
    res = lefschetz(load_movie(FIXTURES / "movies" / f"{name}.movie"))
    got = {j: v for j, v in res.homology.items() if v or j == 0}
    assert got == expected


def test_polynomial_helper():
    assert lefschetz_polynomial(Movie(load("unknot"), [])) == LaurentPolynomial({-1: 1, 1: 1})
