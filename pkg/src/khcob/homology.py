"""Integer homology via Smith normal form, induced maps, and sign comparison."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from . import kernels
from .complex import KhComplex, complex_of
from .diagram import OrientedDiagram
from .errors import GradingMismatch, NotChainMap
from .intmatrix import IntMatrix


@dataclass(frozen=True)
class SmithDecomposition:
    """``M = U @ S @ V`` with U, V unimodular and S diagonal (d1 | d2 | ...)."""

    M: IntMatrix
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[k, k] for k in range(min(self.S.rows, self.S.cols))]

    @property
    def invariant_factors(self) -> list[int]:
        return [x for x in self.diagonal if x]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def check(self) -> bool:
        if self.U @ self.S @ self.V != self.M:
            return False
        if self.U @ self.U_inv != IntMatrix.identity(self.U.rows):
            return False
        if self.V @ self.V_inv != IntMatrix.identity(self.V.rows):
            return False
        if any((r, c) for (r, c), _ in self.S.items() if r != c):
            return False
        d = self.invariant_factors
        if any(x < 0 for x in d) or any(d[k + 1] % d[k] for k in range(len(d) - 1)):
            return False
        # nonzero entries come first
        return all(self.diagonal[k] for k in range(len(d)))


def smith_normal_form(m: IntMatrix) -> SmithDecomposition:
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return SmithDecomposition(m, IntMatrix.identity(rows), m.copy(), IntMatrix.identity(cols),
                                  IntMatrix.identity(rows), IntMatrix.identity(cols))
    s, p, p_inv, q, q_inv = kernels.smith_reduce(m.to_dense())
    dense = IntMatrix.from_dense
    return SmithDecomposition(m, dense(p_inv, rows), dense(s, cols), dense(q_inv, cols), dense(p, rows), dense(q, cols))


# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group presented as a homology group.

    Generators are ordered free first, then torsion; ``orders[k]`` is 0 for a
    free generator. ``representatives[k]`` is a cycle (sparse chain vector).
    """

    free_rank: int
    torsion: tuple[int, ...]
    representatives: tuple[Mapping[int, int], ...] = ()
    # coordinate data: y = (kernel_proj @ z), coords = reduce(change @ y)
    _kernel_proj: IntMatrix | None = field(default=None, repr=False, compare=False)
    _change: IntMatrix | None = field(default=None, repr=False, compare=False)
    _slots: tuple[int, ...] = field(default=(), repr=False, compare=False)
    _boundary: IntMatrix | None = field(default=None, repr=False, compare=False)

    @property
    def orders(self) -> tuple[int, ...]:
        return (0,) * self.free_rank + self.torsion

    @property
    def n_generators(self) -> int:
        return self.free_rank + len(self.torsion)

    def is_zero(self) -> bool:
        return self.n_generators == 0

    def is_cycle(self, z: Mapping[int, int]) -> bool:
        return self._boundary is None or not self._boundary.apply(dict(z))

    def coordinates(self, z: Mapping[int, int]) -> tuple[int, ...]:
        """Coordinates of the class of the cycle ``z``."""
        if not self.is_cycle(z):
            raise NotChainMap("vector is not a cycle")
        if self.n_generators == 0:
            return ()
        y = self._kernel_proj.apply(dict(z))
        y2 = self._change.apply(y)
        out = []
        for k, slot in enumerate(self._slots):
            v = y2.get(slot, 0)
            order = self.orders[k]
            out.append(v % order if order else v)
        return tuple(out)

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def homology_from_differentials(d_in: IntMatrix, d_out: IntMatrix) -> AbelianGroup:
    """Homology at the middle of ``C_prev --d_in--> C --d_out--> C_next``."""
    n = d_out.cols
    if n == 0:
        return AbelianGroup(0, ())
    snf_b = smith_normal_form(d_out)
    r = snf_b.rank
    q = snf_b.V_inv  # columns r.. span the kernel
    q_inv = snf_b.V
    keep = list(range(r, n))
    kernel_proj = q_inv.submatrix(keep, list(range(n)))
    kernel_basis = q.submatrix(list(range(n)), keep)
    a_prime = kernel_proj @ d_in if d_in.cols else IntMatrix.zeros(len(keep), 0)
    k = len(keep)
    if k == 0:
        return AbelianGroup(0, (), (), None, None, (), d_out)
    if a_prime.cols:
        snf_a = smith_normal_form(a_prime)
        diag = snf_a.diagonal
        change, change_inv = snf_a.U_inv, snf_a.U
    else:
        diag = []
        change = change_inv = IntMatrix.identity(k)
    diag = diag + [0] * (k - len(diag))
    free_slots = [t for t in range(k) if diag[t] == 0]
    tors_slots = [t for t in range(k) if diag[t] > 1]
    reps = []
    for t in free_slots + tors_slots:
        col = change_inv.column(t)
        reps.append(kernel_basis.apply(col))
    torsion = tuple(diag[t] for t in tors_slots)
    return AbelianGroup(len(free_slots), torsion, tuple(reps), kernel_proj, change,
                        tuple(free_slots + tors_slots), d_out)


def _homology_cache(c: KhComplex) -> dict:
    cache = c.__dict__.get("_homology")
    if cache is None:
        cache = c.__dict__["_homology"] = {}
    return cache


def homology_of_complex(c: KhComplex, i: int, j: int) -> AbelianGroup:
    cache = _homology_cache(c)
    if (i, j) not in cache:
        cache[(i, j)] = homology_from_differentials(c.differential(i - 1, j), c.differential(i, j))
    return cache[(i, j)]


def homology_group(d: OrientedDiagram | KhComplex, i: int, j: int) -> AbelianGroup:
    c = d if isinstance(d, KhComplex) else complex_of(d)
    return homology_of_complex(c, i, j)


def homology(d: OrientedDiagram | KhComplex, j: int | None = None) -> dict[tuple[int, int], AbelianGroup]:
    """All nonzero groups (optionally restricted to one quantum grading)."""
    c = d if isinstance(d, KhComplex) else complex_of(d)
    out = {}
    for (i, jj) in c.gradings():
        if j is not None and jj != j:
            continue
        h = homology_of_complex(c, i, jj)
        if not h.is_zero():
            out[(i, jj)] = h
    return out


# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class HomMap:
    """Homomorphism between presented groups; ``matrix[t][s]`` is the
    coordinate of the image of source generator s on target generator t."""

    source: AbelianGroup
    target: AbelianGroup
    matrix: tuple[tuple[int, ...], ...]

    def as_intmatrix(self) -> IntMatrix:
        return IntMatrix.from_dense([list(r) for r in self.matrix], self.source.n_generators)

    def free_block(self) -> list[list[int]]:
        fs, ft = self.source.free_rank, self.target.free_rank
        return [list(self.matrix[t][:fs]) for t in range(ft)]

    def compose(self, first: "HomMap") -> "HomMap":
        """``self ∘ first``."""
        rows = []
        for t in range(self.target.n_generators):
            row = []
            for s in range(first.source.n_generators):
                v = sum(self.matrix[t][m] * first.matrix[m][s] for m in range(first.target.n_generators))
                order = self.target.orders[t]
                row.append(v % order if order else v)
            rows.append(tuple(row))
        return HomMap(first.source, self.target, tuple(rows))

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.matrix for v in row)

    def is_identity(self, sign: int = 1) -> bool:
        if self.source.orders != self.target.orders:
            return False
        for t, row in enumerate(self.matrix):
            order = self.target.orders[t]
            for s, v in enumerate(row):
                want = sign if s == t else 0
                if (v - want) % order if order else v != want:
                    return False
        return True


def induced_on_homology(block: IntMatrix, source: AbelianGroup, target: AbelianGroup) -> HomMap:
    rows = [[0] * source.n_generators for _ in range(target.n_generators)]
    for s, z in enumerate(source.representatives):
        image = block.apply(dict(z))
        if not target.is_cycle(image):
            raise NotChainMap(f"image of generator {s} is not a cycle")
        for t, v in enumerate(target.coordinates(image)):
            rows[t][s] = v
    return HomMap(source, target, tuple(tuple(r) for r in rows))


class Verdict(str, Enum):
    SAME = "Same"
    OPPOSITE = "Opposite"
    DIFFERENT = "Different"

    def __str__(self):
        return self.value


def _as_family(f) -> dict:
    return f if isinstance(f, Mapping) else {None: f}


def equal_up_to_sign(f, g) -> Verdict:
    """Compare two homology maps (or families keyed by bigrading) globally.

    Maps that agree with both signs (zero, or living on order-2 parts) are
    reported as Same.
    """
    fam_f, fam_g = _as_family(f), _as_family(g)
    keys = set(fam_f) | set(fam_g)
    plus = minus = True
    for key in keys:
        a, b = fam_f.get(key), fam_g.get(key)
        if a is None or b is None:
            present = a if a is not None else b
            if present.is_zero():
                continue
            raise GradingMismatch(f"map missing at bigrading {key}")
        if a.source.orders != b.source.orders or a.target.orders != b.target.orders:
            raise GradingMismatch(f"incompatible groups at bigrading {key}")
        for t, (ra, rb) in enumerate(zip(a.matrix, b.matrix)):
            order = a.target.orders[t]
            for x, y in zip(ra, rb):
                if order:
                    plus &= (x - y) % order == 0
                    minus &= (x + y) % order == 0
                else:
                    plus &= x == y
                    minus &= x == -y
    if plus:
        return Verdict.SAME
    if minus:
        return Verdict.OPPOSITE
    return Verdict.DIFFERENT


def characteristic_polynomial(rows: list[list[int]]) -> list[int]:
    """Coefficients (highest degree first) of det(xI - A), by Faddeev-LeVerrier."""
    from fractions import Fraction

    n = len(rows)
    a = [[Fraction(v) for v in r] for r in rows]
    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        m = [[sum(a[r][t] * m[t][c] for t in range(n)) + (coeffs[-1] if r == c else 0) for c in range(n)]
             for r in range(n)]
        am = [[sum(a[r][t] * m[t][c] for t in range(n)) for c in range(n)] for r in range(n)]
        coeffs.append(-sum(am[r][r] for r in range(n)) / k)
    return [int(c) for c in coeffs]
