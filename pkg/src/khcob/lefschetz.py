"""Lefschetz numbers of endo-cobordisms.

For a movie from a diagram to itself the induced chain map has bidegree
(0, chi). When chi = 0 every quantum grading j gives an alternating trace

    L_j = sum_i (-1)^i tr(f on C^{i,j} (x) Q) = sum_i (-1)^i tr(f_* on H^{i,j} (x) Q)

and the two sides agree by the Hopf trace formula. The maps are only defined
up to an overall sign, so the polynomial sum_j L_j q^j is too.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonZeroEuler, NotEndocobordism
from .homology import homology_of_complex
from .laurent import LaurentPolynomial
from .movie import Movie, evaluate_movie
from .moves import ChainMap


@dataclass(frozen=True)
class LefschetzResult:
    chain: dict[int, int]
    homology: dict[int, int]
    chi: int
    closed: bool
    sign_ambiguous: bool = True

    @property
    def consistent(self) -> bool:
        return self.chain == self.homology

    def value(self, j: int) -> int:
        return self.homology.get(j, 0)

    @property
    def polynomial(self) -> LaurentPolynomial:
        return LaurentPolynomial({j: v for j, v in self.homology.items() if v})

    def to_json(self) -> dict:
        return {
            "chi": self.chi,
            "closed": self.closed,
            "sign_ambiguous": self.sign_ambiguous,
            "chain": {str(j): v for j, v in sorted(self.chain.items())},
            "homology": {str(j): v for j, v in sorted(self.homology.items())},
            "polynomial": str(self.polynomial),
        }


def _trace(block) -> int:
    return sum(block[k, k] for k in range(min(block.rows, block.cols)))


def chain_level(f: ChainMap, j: int) -> int:
    cx = f.source_complex
    return sum((-1) ** (i % 2) * _trace(f.block(i, j)) for i in cx.i_range() if cx.rank(i, j))


def homology_level(f: ChainMap, j: int) -> int:
    cx = f.source_complex
    total = 0
    for i in cx.i_range():
        if not cx.rank(i, j):
            continue
        h = homology_of_complex(cx, i, j)
        if not h.free_rank:
            continue
        hm = f.on_homology_at(i, j)
        # torsion generators come after the free ones and do not count over Q
        total += (-1) ** (i % 2) * sum(hm.matrix[k][k] for k in range(h.free_rank))
    return total


def lefschetz(movie: Movie | ChainMap, j: int | None = None) -> LefschetzResult:
    """Lefschetz numbers of an endo-cobordism, for one j or for all of them."""
    if isinstance(movie, Movie):
        result = evaluate_movie(movie)
        f, chi = result.chain_map, result.chi
    else:
        f, chi = movie, movie.dj
    if f.source != f.target:
        raise NotEndocobordism("the movie does not end on the diagram it starts from")
    closed = f.source.n == 0 and not f.source.free_loops
    if chi != 0:
        if not closed:
            raise NonZeroEuler(f"Lefschetz numbers need chi = 0, got chi = {chi}")
        # C(empty) = Z sits in bidegree (0, 0), so a shift by chi kills the map
        zero = {0: 0}
        return LefschetzResult(zero, zero, chi, True)
    cx = f.source_complex
    js = [j] if j is not None else list(cx.j_range())
    chain = {jj: chain_level(f, jj) for jj in js}
    hom = {jj: homology_level(f, jj) for jj in js}
    return LefschetzResult(chain, hom, chi, closed)


def lefschetz_polynomial(movie: Movie | ChainMap) -> LaurentPolynomial:
    return lefschetz(movie).polynomial
