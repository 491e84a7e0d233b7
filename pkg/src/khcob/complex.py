"""The Khovanov chain complex of an oriented diagram.

A generator is an enhanced state ``(mask, signs)``: bit ``p`` of ``mask`` is
set when crossing ``p`` carries a negative marker, bit ``k`` of ``signs``
when circle ``k`` of that resolution carries the sign ``-``. Circles are
numbered by their smallest member (edges first, then free loops).

Bigrading, with sigma = #positive - #negative markers and
tau = #plus circles - #minus circles::

    i = (w - sigma) / 2,        j = -(sigma + 2 tau - 3 w) / 2

so a ``+`` circle lowers j and a ``-`` circle raises it.

The differential changes one positive marker to a negative one; its sign is
(-1) to the number of negative markers placed after it in crossing order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .diagram import OrientedDiagram, resolution_from_mask
from .errors import NonIntegerGrading
from .intmatrix import IntMatrix
from .laurent import LaurentPolynomial

State = tuple[int, int]


def popcount(x: int) -> int:
    return bin(x).count("1")


# Frobenius structure on bits (1 = "-", the unit; 0 = "+", the class X).
def multiply(a: int, b: int):
    """Sign bit of the product, or None for zero."""
    if a == 0 and b == 0:
        return None
    return a & b


def comultiply(a: int) -> list[tuple[int, int]]:
    return [(0, 0)] if a == 0 else [(0, 1), (1, 0)]


@dataclass(frozen=True)
class StateBasis:
    i: int
    j: int
    states: tuple[State, ...]

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    @property
    def index(self) -> dict[State, int]:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {s: k for k, s in enumerate(self.states)}
            object.__setattr__(self, "_index", idx)
        return idx


class KhComplex:
    """Lazily built Khovanov complex; blocks are cached per bigrading."""

    def __init__(self, diagram: OrientedDiagram):
        self.diagram = diagram
        self.n = diagram.n
        self.w = diagram.writhe
        self.n_neg = diagram.n_negative
        self._bases: dict[tuple[int, int], StateBasis] = {}
        self._diffs: dict[tuple[int, int], IntMatrix] = {}

    # resolutions ------------------------------------------------------------
    def circles(self, mask: int) -> tuple[tuple[int, ...], int]:
        return self.diagram.all_resolutions[mask] if self.n <= 12 else self.diagram.resolve_mask(mask)

    def grading(self, state: State) -> tuple[int, int]:
        mask, signs = state
        _, r = self.circles(mask)
        k = popcount(mask)
        sigma = self.n - 2 * k
        tau = r - 2 * popcount(signs)
        if (self.w - sigma) % 2 or (sigma + 2 * tau - 3 * self.w) % 2:
            raise NonIntegerGrading(f"state {state} has non-integral bigrading")
        return (self.w - sigma) // 2, -(sigma + 2 * tau - 3 * self.w) // 2

    def i_range(self) -> range:
        return range(-self.n_neg, self.n - self.n_neg + 1)

    def j_range(self) -> range:
        lo = hi = None
        for mask in range(1 << self.n):
            _, r = self.circles(mask)
            sigma = self.n - 2 * popcount(mask)
            for tau in (r, -r):
                j = -(sigma + 2 * tau - 3 * self.w) // 2
                lo = j if lo is None else min(lo, j)
                hi = j if hi is None else max(hi, j)
        return range(lo, hi + 1, 2)

    def basis(self, i: int, j: int) -> StateBasis:
        key = (i, j)
        if key not in self._bases:
            self._bases[key] = StateBasis(i, j, tuple(self._enumerate(i, j)))
        return self._bases[key]

    def _enumerate(self, i: int, j: int):
        k = i + self.n_neg
        if k < 0 or k > self.n:
            return
        sigma = self.n - 2 * k
        twice_tau = 3 * self.w - sigma - 2 * j
        if twice_tau % 2:
            return
        tau = twice_tau // 2
        for mask in range(1 << self.n):
            if popcount(mask) != k:
                continue
            _, r = self.circles(mask)
            if (r - tau) % 2 or abs(tau) > r:
                continue
            minus = (r - tau) // 2
            for signs in range(1 << r):
                if popcount(signs) == minus:
                    yield (mask, signs)

    def rank(self, i: int, j: int) -> int:
        return len(self.basis(i, j))

    def gradings(self) -> list[tuple[int, int]]:
        out = set()
        for mask in range(1 << self.n):
            _, r = self.circles(mask)
            for signs in range(1 << r):
                out.add(self.grading((mask, signs)))
        return sorted(out)

    # differential -----------------------------------------------------------
    def d_state(self, state: State) -> dict[State, int]:
        """Differential of one generator as {state: coefficient}."""
        mask, signs = state
        labels, r = self.circles(mask)
        idx = self.diagram.member_index
        out: dict[State, int] = {}
        for p, c in enumerate(self.diagram.crossings):
            if (mask >> p) & 1:
                continue
            new_mask = mask | (1 << p)
            eps = -1 if popcount(mask >> (p + 1)) % 2 else 1
            new_labels, new_r = self.circles(new_mask)
            e = [idx[x] for x in c.edges]
            for bits, coeff in _transfer(labels, r, signs, new_labels, new_r, e):
                key = (new_mask, bits)
                out[key] = out.get(key, 0) + eps * coeff
        return {k: v for k, v in out.items() if v}

    def differential(self, i: int, j: int) -> IntMatrix:
        """Matrix of d: C^{i,j} -> C^{i+1,j} in the state bases."""
        key = (i, j)
        if key not in self._diffs:
            src, dst = self.basis(i, j), self.basis(i + 1, j)
            cols = []
            for s in src:
                col = {}
                for t, v in self.d_state(s).items():
                    col[dst.index[t]] = v
                cols.append(col)
            self._diffs[key] = IntMatrix.from_columns(len(dst), cols) if cols else IntMatrix.zeros(len(dst), 0)
        return self._diffs[key]

    def euler_characteristic(self) -> LaurentPolynomial:
        coeffs: dict[int, int] = {}
        for i, j in self.gradings():
            rk = self.rank(i, j)
            coeffs[j] = coeffs.get(j, 0) + (-1) ** (i % 2) * rk
        return LaurentPolynomial(coeffs)

    def describe_state(self, state: State) -> str:
        mask, signs = state
        markers = "".join("-" if (mask >> p) & 1 else "+" for p in range(self.n))
        _, r = self.circles(mask)
        circ = "".join("-" if (signs >> k) & 1 else "+" for k in range(r))
        return f"[{markers}|{circ}]"


def _transfer(labels, r, signs, new_labels, new_r, e):
    """Merge/split of circles at one crossing whose edges have member indices
    ``e``; yields (new sign bits, coefficient)."""
    p, q = labels[e[0]], labels[e[2]]
    # circles untouched by the crossing keep their sign
    base = 0
    for k in range(r):
        if k == p or k == q:
            continue
        rep = labels.index(k)
        if (signs >> k) & 1:
            base |= 1 << new_labels[rep]
    if p != q:
        bit = multiply((signs >> p) & 1, (signs >> q) & 1)
        if bit is None:
            return []
        return [(base | (bit << new_labels[e[0]]), 1)]
    u, v = new_labels[e[0]], new_labels[e[1]]
    return [(base | (a << u) | (b << v), 1) for a, b in comultiply((signs >> p) & 1)]


@lru_cache(maxsize=256)
def complex_of(diagram: OrientedDiagram) -> KhComplex:
    return KhComplex(diagram)


def enumerate_states(diagram: OrientedDiagram, i: int, j: int) -> StateBasis:
    return complex_of(diagram).basis(i, j)


def differential_matrix(diagram: OrientedDiagram, i: int, j: int) -> IntMatrix:
    return complex_of(diagram).differential(i, j)


def graded_euler_characteristic(diagram: OrientedDiagram) -> LaurentPolynomial:
    return complex_of(diagram).euler_characteristic()


def resolution_of(diagram: OrientedDiagram, mask: int):
    return resolution_from_mask(diagram, mask)
