"""Chain maps induced by local moves.

Morse moves act on the circles they touch by the Frobenius operations.
Reidemeister maps come from Gaussian elimination: the states of the larger
diagram split as ``K + B1 + B2`` where the differential restricted to
``B1 -> B2`` is a signed bijection ``phi``; with ``h = phi^-1 p_B2``::

    Psi(c) = p_K(c - d h c)          Phi(k) = k - h d k

and ``K`` is identified with the complex of the smaller diagram, the local
negative markers being moved in front of the others in the wedge ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from . import surgery
from .complex import KhComplex, State, comultiply, complex_of, multiply
from .diagram import OrientedDiagram, find_isomorphisms
from .errors import GradingMismatch, NotAnIsomorphism, PatternMismatch, UnsupportedVariant
from .homology import HomMap, homology_of_complex, induced_on_homology
from .intmatrix import IntMatrix


def permutation_parity(seq) -> int:
    inv = 0
    seq = list(seq)
    for x in range(len(seq)):
        for y in range(x + 1, len(seq)):
            if seq[x] > seq[y]:
                inv += 1
    return -1 if inv % 2 else 1


def _add(acc: dict, key, value):
    v = acc.get(key, 0) + value
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


# ---------------------------------------------------------------------------
class ChainMap:
    """Integer chain map ``C(source) -> C(target)`` of bidegree (0, dj),
    stored as one matrix per source bigrading."""

    def __init__(self, source: OrientedDiagram, target: OrientedDiagram, dj: int,
                 blocks: dict[tuple[int, int], IntMatrix]):
        self.source = source
        self.target = target
        self.dj = dj
        self.blocks = blocks

    @property
    def bidegree(self) -> tuple[int, int]:
        return 0, self.dj

    @property
    def source_complex(self) -> KhComplex:
        return complex_of(self.source)

    @property
    def target_complex(self) -> KhComplex:
        return complex_of(self.target)

    @classmethod
    def from_state_function(cls, source, target, dj: int, fn: Callable[[State], dict]) -> "ChainMap":
        src, tgt = complex_of(source), complex_of(target)
        blocks = {}
        for i, j in src.gradings():
            basis = src.basis(i, j)
            tbasis = tgt.basis(i, j + dj)
            cols = []
            for s in basis:
                col = {}
                for t, v in fn(s).items():
                    k = tbasis.index.get(t)
                    if k is None:
                        raise GradingMismatch(f"image of {s} leaves bigrading {(i, j + dj)}")
                    col[k] = col.get(k, 0) + v
                cols.append({k: v for k, v in col.items() if v})
            blocks[(i, j)] = IntMatrix.from_columns(len(tbasis), cols)
        return cls(source, target, dj, blocks)

    @classmethod
    def identity(cls, d: OrientedDiagram) -> "ChainMap":
        return cls.from_state_function(d, d, 0, lambda s: {s: 1})

    def block(self, i: int, j: int) -> IntMatrix:
        if (i, j) in self.blocks:
            return self.blocks[(i, j)]
        return IntMatrix.zeros(self.target_complex.rank(i, j + self.dj), self.source_complex.rank(i, j))

    def compose(self, first: "ChainMap") -> "ChainMap":
        """``self ∘ first``."""
        if first.target != self.source:
            raise GradingMismatch("composition of chain maps with mismatched diagrams")
        blocks = {k: self.block(k[0], k[1] + first.dj) @ m for k, m in first.blocks.items()}
        return ChainMap(first.source, self.target, first.dj + self.dj, blocks)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        return self.compose(other)

    def scale(self, k: int) -> "ChainMap":
        return ChainMap(self.source, self.target, self.dj, {g: m.scale(k) for g, m in self.blocks.items()})

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        if (self.source, self.target, self.dj) != (other.source, other.target, other.dj):
            return False
        keys = set(self.blocks) | set(other.blocks)
        return all(self.block(*k) == other.block(*k) for k in keys)

    __hash__ = None

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.blocks.values())

    def on_homology_at(self, i: int, j: int) -> HomMap:
        """Induced map on H^{i,j}; ``j`` is the source quantum grading."""
        hs = homology_of_complex(self.source_complex, i, j)
        ht = homology_of_complex(self.target_complex, i, j + self.dj)
        return induced_on_homology(self.block(i, j), hs, ht)

    def on_homology(self) -> dict[tuple[int, int], HomMap]:
        """Induced maps keyed by source bigrading, skipping zero groups."""
        out = {}
        for (i, j) in self.blocks:
            hm = self.on_homology_at(i, j)
            if hm.source.is_zero() and hm.target.is_zero():
                continue
            out[(i, j)] = hm
        return out


@dataclass
class ChainCheck:
    ok: bool
    block: tuple[int, int] | None = None

    def __bool__(self):
        return self.ok


def check_chain_map(f: ChainMap) -> ChainCheck:
    """``d_target f = f d_source`` on every block."""
    src, tgt = f.source_complex, f.target_complex
    grads = set(f.blocks) | {(i - 1, j) for i, j in f.blocks}
    for i, j in sorted(grads):
        left = tgt.differential(i, j + f.dj) @ f.block(i, j)
        right = f.block(i + 1, j) @ src.differential(i, j)
        if left != right:
            return ChainCheck(False, (i, j))
    return ChainCheck(True)


# ---------------------------------------------------------------------------
# Morse maps

def morse_map(source: OrientedDiagram, target: OrientedDiagram, old, new) -> ChainMap:
    """Map of a Morse move that replaces members ``old`` of the source by
    members ``new`` of the target, leaving every crossing alone."""
    src, tgt = complex_of(source), complex_of(target)
    idx_s, idx_t = source.member_index, target.member_index
    n_old, n_new = len(old), len(new)

    def fn(state):
        mask, signs = state
        labels, r = src.circles(mask)
        tl, _ = tgt.circles(mask)
        ts = sorted({labels[idx_s[m]] for m in old})
        tt = sorted({tl[idx_t[m]] for m in new})
        base = 0
        for k in range(r):
            if k in ts:
                continue
            rep = source.members[labels.index(k)]
            if (signs >> k) & 1:
                base |= 1 << tl[idx_t[rep]]
        bits = [(signs >> k) & 1 for k in ts]
        shape = (len(ts), len(tt))
        if shape == (0, 1):
            return {(mask, base | (1 << tt[0])): 1}
        if shape == (1, 0):
            return {(mask, base): 1} if bits[0] == 0 else {}
        if shape == (2, 1):
            bit = multiply(*bits)
            return {} if bit is None else {(mask, base | (bit << tt[0])): 1}
        if shape == (1, 2):
            return {(mask, base | (x << tt[0]) | (y << tt[1])): 1 for x, y in comultiply(bits[0])}
        raise PatternMismatch(f"move touching {old} -> {new} is not a planar Morse move")

    # births and deaths raise j by one, saddles lower it
    dj = 1 if (n_old, n_new) in ((0, 1), (1, 0)) else -1
    return ChainMap.from_state_function(source, target, dj, fn)


# ---------------------------------------------------------------------------
# Gaussian elimination

class Reduction:
    """Local elimination data on the larger diagram of a Reidemeister move."""

    def __init__(self, big: OrientedDiagram, classify: Callable[[State], str]):
        self.big = big
        self.cx = complex_of(big)
        self.classify = classify
        self._inverse: dict[tuple[int, int], dict] = {}

    def h(self, y: State) -> tuple[State, int]:
        i, j = self.cx.grading(y)
        table = self._inverse.get((i - 1, j))
        if table is None:
            table = {}
            for b in self.cx.basis(i - 1, j):
                if self.classify(b) != "B1":
                    continue
                image = [(s, v) for s, v in self.cx.d_state(b).items() if self.classify(s) == "B2"]
                if len(image) != 1 or abs(image[0][1]) != 1 or image[0][0] in table:
                    raise PatternMismatch("local elimination is not a signed bijection")
                table[image[0][0]] = (b, image[0][1])
            self._inverse[(i - 1, j)] = table
        try:
            return table[y]
        except KeyError:
            raise PatternMismatch("local elimination is not surjective") from None

    def psi(self, c: State) -> dict[State, int]:
        cls = self.classify(c)
        if cls == "K":
            return {c: 1}
        if cls == "B1":
            return {}
        b, coeff = self.h(c)
        out: dict = {}
        for s, v in self.cx.d_state(b).items():
            if self.classify(s) == "K":
                _add(out, s, -coeff * v)
        return out

    def phi(self, k: State) -> dict[State, int]:
        out = {k: 1}
        for s, v in self.cx.d_state(k).items():
            if self.classify(s) == "B2":
                b, coeff = self.h(s)
                _add(out, b, -coeff * v)
        return out


@dataclass
class Identification:
    """K (on the big diagram) versus the complex of the small diagram."""

    big: OrientedDiagram
    small: OrientedDiagram
    local: tuple[str, ...]
    member_map: dict
    k_markers: dict  # local crossing id -> marker bit in K
    small_sign: int | None = None  # sign bit of the local circle in K, if any
    def __post_init__(self):
        self._big_pos = [self.big.crossing_index[c.id] for c in self.small.crossings]
        self._local_pos = [self.big.crossing_index[c] for c in self.local]

    def _sign(self, mask_big: int) -> int:
        seq = [p for p in self._local_pos if (mask_big >> p) & 1]
        seq += [p for p in sorted(self._big_pos) if (mask_big >> p) & 1]
        return permutation_parity(seq)

    def to_small(self, k: State) -> tuple[State, int]:
        mask, signs = k
        small_mask = 0
        for q, p in enumerate(self._big_pos):
            if (mask >> p) & 1:
                small_mask |= 1 << q
        bl, r = complex_of(self.big).circles(mask)
        sl, _ = complex_of(self.small).circles(small_mask)
        idx_s = self.small.member_index
        bits = 0
        for m, lab in zip(self.big.members, bl):
            target = self.member_map.get(m)
            if target is None or not (signs >> lab) & 1:
                continue
            bits |= 1 << sl[idx_s[target]]
        return (small_mask, bits), self._sign(mask)

    def to_big(self, s: State) -> tuple[State, int]:
        small_mask, signs = s
        mask = 0
        for q, p in enumerate(self._big_pos):
            if (small_mask >> q) & 1:
                mask |= 1 << p
        for cid, bit in self.k_markers.items():
            if bit:
                mask |= 1 << self.big.crossing_index[cid]
        bl, r = complex_of(self.big).circles(mask)
        sl, _ = complex_of(self.small).circles(small_mask)
        idx_s = self.small.member_index
        bits = 0
        assigned = set()
        for m, lab in zip(self.big.members, bl):
            target = self.member_map.get(m)
            if target is None or lab in assigned:
                continue
            assigned.add(lab)
            if (signs >> sl[idx_s[target]]) & 1:
                bits |= 1 << lab
        for lab in range(r):
            if lab not in assigned and self.small_sign:
                bits |= 1 << lab
        return (mask, bits), self._sign(mask)


def _marker_pairs(bit: int):
    return ((0, 1), (2, 3)) if bit == 0 else ((0, 3), (1, 2))


def r1_setup(big: OrientedDiagram, cid: str, kink: int):
    c = big.crossing(cid)
    p = big.crossing_index[cid]
    q = [k for k in range(4) if c.edges[k] == kink]
    circ = 0 if tuple(sorted(q)) in _marker_pairs(0) else 1
    kidx = big.member_index[kink]
    cx = complex_of(big)

    def classify(state):
        mask, signs = state
        if (mask >> p) & 1 == circ:
            labels, _ = cx.circles(mask)
            s = (signs >> labels[kidx]) & 1
            if circ == 0:
                return "B1" if s == 1 else "K"
            return "B2" if s == 0 else "K"
        return "B2" if circ == 0 else "B1"

    return classify, {cid: circ}, (0 if circ == 0 else 1)


def r2_setup(big: OrientedDiagram, a: str, b: str, bigon):
    pa, pb = big.crossing_index[a], big.crossing_index[b]
    ia, ib = big.member_index[bigon[0]], big.member_index[bigon[1]]
    cx = complex_of(big)

    def joins(cid, bit):
        c = big.crossing(cid)
        pos = {c.edges.index(bigon[0]), c.edges.index(bigon[1])}
        return tuple(sorted(pos)) in _marker_pairs(bit)

    z_config = next(cfg for cfg in ((0, 1), (1, 0)) if joins(a, cfg[0]) and joins(b, cfg[1]))
    f_config = (1 - z_config[0], 1 - z_config[1])

    def classify(state):
        mask, signs = state
        cfg = ((mask >> pa) & 1, (mask >> pb) & 1)
        if cfg == (0, 0):
            return "B1"
        if cfg == (1, 1):
            return "B2"
        if cfg == f_config:
            return "K"
        labels, _ = cx.circles(mask)
        return "B1" if (signs >> labels[ia]) & 1 else "B2"

    return classify, {a: f_config[0], b: f_config[1]}, None


def reidemeister_map(small: OrientedDiagram, big: OrientedDiagram, rw: surgery.Rewrite, kind: str,
                     adding: bool) -> ChainMap:
    if kind == "R1":
        classify, k_markers, small_sign = r1_setup(big, rw.local[0], rw.info["kink"])
    else:
        classify, k_markers, small_sign = r2_setup(big, rw.local[0], rw.local[1], rw.info["bigon"])
    red = Reduction(big, classify)
    member_map = dict(rw.member_map)
    # in the surviving configuration a bigon edge runs along the other
    # strand's arc, so bigon edges never identify circles
    for m in rw.info.get("bigon", ()):
        member_map[m] = None
    ident = Identification(big, small, rw.local, member_map, k_markers, small_sign)
    if adding:
        def fn(s):
            k, sign = ident.to_big(s)
            return {t: sign * v for t, v in red.phi(k).items()}
        return ChainMap.from_state_function(small, big, 0, fn)

    def fn(c):
        out: dict = {}
        for k, v in red.psi(c).items():
            s, sign = ident.to_small(k)
            _add(out, s, sign * v)
        return out
    return ChainMap.from_state_function(big, small, 0, fn)


# ---------------------------------------------------------------------------
def isotopy_map(d: OrientedDiagram, crossing_map: dict, edge_map: dict, loop_map: dict | None = None,
                target: OrientedDiagram | None = None) -> ChainMap:
    rw = surgery.isotopy(d, crossing_map, edge_map, loop_map)
    new = rw.diagram
    if target is not None and new != target:
        raise NotAnIsomorphism("relabeling does not produce the requested diagram")
    return _relabel_to(d, new, rw.info["cmap"], rw.info["emap"], rw.info["lmap"])


def align(d: OrientedDiagram, target: OrientedDiagram, keep=()) -> ChainMap:
    """Isotopy map onto an isomorphic diagram, preferring isomorphisms that fix
    the labels listed in ``keep`` (default: every shared label)."""
    best = None
    for cmap, emap, lmap in find_isomorphisms(d, target):
        if not keep:
            score = sum(1 for k, v in cmap.items() if k == v) + sum(1 for k, v in emap.items() if k == v)
        else:
            score = sum(1 for k in keep if cmap.get(k, emap.get(k, lmap.get(k))) == k)
        if best is None or score > best[0]:
            best = (score, cmap, emap, lmap)
    if best is None:
        raise NotAnIsomorphism("diagrams are not isomorphic")
    _, cmap, emap, lmap = best
    new = d.relabel(cmap, emap, lmap)
    if new != target:
        # same crossing set but a different list order: reorder to the target
        by_id = {c.id: c for c in new.crossings}
        new = OrientedDiagram(tuple(by_id[c.id] for c in target.crossings), target.free_loops)
        if new != target:
            raise NotAnIsomorphism("isomorphism does not reproduce the target diagram")
    return _relabel_to(d, target, cmap, emap, lmap)


def _relabel_to(d, target, cmap, emap, lmap) -> ChainMap:
    src, tgt = complex_of(d), complex_of(target)
    pos = [target.crossing_index[cmap[c.id]] for c in d.crossings]
    member_image = {**emap, **lmap}
    idx_t = target.member_index

    def fn(state):
        mask, signs = state
        negs = [pos[p] for p in range(d.n) if (mask >> p) & 1]
        new_mask = sum(1 << q for q in negs)
        labels, r = src.circles(mask)
        tl, _ = tgt.circles(new_mask)
        bits = 0
        for k in range(r):
            if (signs >> k) & 1:
                rep = d.members[labels.index(k)]
                bits |= 1 << tl[idx_t[member_image[rep]]]
        return {(new_mask, bits): permutation_parity(negs)}

    return ChainMap.from_state_function(d, target, 0, fn)


# ---------------------------------------------------------------------------
# Reidemeister 3

def r3_setup(d: OrientedDiagram, tri: surgery.Triangle):
    """Elimination around the crossing of the middle and bottom strands.

    With that crossing smoothed so the middle and bottom triangle edges join
    (marker ``m*``), the top strand crosses the resulting arc twice as in a
    second Reidemeister move; that part is eliminated like Reidemeister 2.
    Returns (classify, surviving configuration checker).
    """
    a, b, c = tri.x[frozenset("TM")], tri.x[frozenset("TB")], tri.x[frozenset("MB")]
    pa, pb, pc = (d.crossing_index[x] for x in (a, b, c))
    tT, tM, tB = tri.t["T"], tri.t["M"], tri.t["B"]
    cc = d.crossing(c)
    m_star = 0 if tuple(sorted((cc.edges.index(tM), cc.edges.index(tB)))) in _marker_pairs(0) else 1

    def joins(cid, e1, e2, bit):
        x = d.crossing(cid)
        return tuple(sorted((x.edges.index(e1), x.edges.index(e2)))) in _marker_pairs(bit)

    z_config = next(cfg for cfg in ((0, 0), (0, 1), (1, 0), (1, 1))
                    if joins(a, tT, tM, cfg[0]) and joins(b, tT, tB, cfg[1]))
    if z_config not in ((0, 1), (1, 0)):
        raise PatternMismatch("R3 triangle does not reduce to a second-move pattern")
    f_config = (1 - z_config[0], 1 - z_config[1])
    it = d.member_index[tT]
    cx = complex_of(d)

    def classify(state):
        mask, signs = state
        if (mask >> pc) & 1 != m_star:
            return "K"
        cfg = ((mask >> pa) & 1, (mask >> pb) & 1)
        if cfg == (0, 0):
            return "B1"
        if cfg == (1, 1):
            return "B2"
        if cfg == f_config:
            return "K"
        labels, _ = cx.circles(mask)
        return "B1" if (signs >> labels[it]) & 1 else "B2"

    classify.m_star = m_star
    return classify


def _triangle_transfer(d: OrientedDiagram, new: OrientedDiagram, tri_old, tri_new, m_star: int):
    """State matching between the surviving parts of the two sides.

    The surviving flat configuration corresponds to itself. Away from ``m*``
    the top strand's two crossings trade places: their markers are swapped,
    and the wedge of negative crossings is relabeled accordingly.
    """
    cd, cn = complex_of(d), complex_of(new)
    old_t = set(tri_old.t.values())
    new_t = list(tri_new.t.values())
    idx_n = new.member_index
    pa = d.crossing_index[tri_old.x[frozenset("TM")]]
    pb = d.crossing_index[tri_old.x[frozenset("TB")]]
    pc = d.crossing_index[tri_old.x[frozenset("MB")]]

    def fn(state):
        mask, signs = state
        sign = 1
        if (mask >> pc) & 1 != m_star:
            image = {pa: pb, pb: pa}
            negs = [image.get(p, p) for p in range(d.n) if (mask >> p) & 1]
            sign = permutation_parity(negs)
            new_mask = sum(1 << p for p in negs)
        else:
            new_mask = mask
        labels, r = cd.circles(mask)
        nl, nr = cn.circles(new_mask)
        if nr != r:
            raise PatternMismatch("R3 sides do not match circle by circle")
        bits = 0
        for k in range(r):
            if not (signs >> k) & 1:
                continue
            outer = [m for m, lab in zip(d.members, labels) if lab == k and m not in old_t]
            targets = {nl[idx_n[m]] for m in (outer or new_t)}
            if len(targets) != 1:
                raise PatternMismatch("R3 sides do not match circle by circle")
            bits |= 1 << targets.pop()
        return (new_mask, bits), sign

    return fn


def popcount_bits(x: int) -> int:
    return bin(x).count("1")


def r3_native_map(d: OrientedDiagram, ids) -> tuple[OrientedDiagram, ChainMap]:
    rw = surgery.r3(d, ids)
    new = rw.diagram
    tri_old = rw.info["triangle"]
    tri_new = surgery.find_triangle(new, ids)
    cls_old = r3_setup(d, tri_old)
    red_old = Reduction(d, cls_old)
    red_new = Reduction(new, r3_setup(new, tri_new))
    transfer = _triangle_transfer(d, new, tri_old, tri_new, cls_old.m_star)

    def fn(state):
        out: dict = {}
        for k, v in red_old.psi(state).items():
            k2, sign = transfer(k)
            for t, w in red_new.phi(k2).items():
                _add(out, t, sign * v * w)
        return out

    return new, ChainMap.from_state_function(d, new, 0, fn)


def r3bar_map(d: OrientedDiagram, ids) -> tuple[OrientedDiagram, ChainMap]:
    """The mirror third move as a fixed composition: the middle strand is
    pushed over the bottom one inside the wedge between the upper and middle
    strands (the face across the upper strand's triangle edge), the native
    third move is applied to the new triangle, and the bigon left at the old
    middle/bottom crossing is removed."""
    tri = surgery.find_triangle(d, ids)
    if tri.chirality == 1:
        raise PatternMismatch(f"crossings {tuple(ids)} form a native R3 triangle; use r3")
    direct = surgery.r3(d, ids).diagram
    x_tm, x_tb, x_mb = (tri.x[frozenset(p)] for p in ("TM", "TB", "MB"))
    finger = (surgery.outer_edge(d, tri, "M", "T"), surgery.outer_edge(d, tri, "B", "T"))
    rw1 = surgery.r2_add(d, finger[0], True, finger[1])
    d1 = rw1.diagram
    trio = next((t for t in _triangles_with(d1, set(rw1.local))
                 if {x_tm, x_tb} <= set(t) and surgery.find_triangle(d1, t).chirality == 1), None)
    if trio is None:
        raise UnsupportedVariant(f"no native triangle after the finger move at {tuple(ids)}")
    d2b, f2 = r3_native_map(d1, trio)
    pair = next((p for p in _bigons(d2b) if x_mb in p and set(p) & set(rw1.local)), None)
    if pair is None:
        raise UnsupportedVariant(f"no bigon to remove after the finger move at {tuple(ids)}")
    rw3 = surgery.r2_remove(d2b, *pair)
    keep = {c.id: c.id for c in d.crossings if c.id not in set(ids)}
    iso = next(find_isomorphisms(rw3.diagram, direct, keep), None)
    if iso is None:
        raise UnsupportedVariant(f"the finger-move composition does not realise R3 at {tuple(ids)}")
    f1 = reidemeister_map(d, d1, rw1, "R2", True)
    f3 = reidemeister_map(rw3.diagram, d2b, rw3, "R2", False)
    f4 = _relabel_to(rw3.diagram, direct, *iso)
    return direct, f4 @ f3 @ f2 @ f1


def _triangles_with(d: OrientedDiagram, must: set[str]):
    from itertools import combinations

    ids = [c.id for c in d.crossings]
    for trio in combinations(ids, 3):
        if not must & set(trio):
            continue
        try:
            surgery.find_triangle(d, trio)
        except PatternMismatch:
            continue
        yield trio


def _bigons(d: OrientedDiagram):
    from itertools import combinations

    for a, b in combinations([c.id for c in d.crossings], 2):
        if surgery.bigon_edges(d, a, b) is not None:
            yield a, b


# ---------------------------------------------------------------------------
# move records and dispatch

class MoveKind(str, Enum):
    BIRTH = "Birth"
    DEATH = "Death"
    SADDLE = "Saddle"
    R1_ADD_POS = "R1AddPos"
    R1_ADD_NEG = "R1AddNeg"
    R1_REMOVE = "R1Remove"
    R2_ADD = "R2Add"
    R2_REMOVE = "R2Remove"
    R3 = "R3"
    R3_BAR = "R3Bar"
    ISOTOPY = "Isotopy"

    def __str__(self):
        return self.value


R3_VARIANTS = ("native",)


@dataclass(frozen=True)
class LocalMove:
    """One local move; ``site`` holds the identifiers it acts on and
    ``options`` its version flags (side, over/under, R3 variant)."""

    kind: MoveKind
    site: tuple = ()
    options: tuple = ()

    @property
    def opts(self) -> dict:
        return dict(self.options)

    def __str__(self):
        extra = " ".join(f"{k}={v}" for k, v in self.options)
        return f"{self.kind} {' '.join(map(str, self.site))} {extra}".strip()


def move(kind, *site, **options) -> LocalMove:
    return LocalMove(MoveKind(kind), tuple(site), tuple(sorted(options.items())))


def apply_move(d: OrientedDiagram, m: LocalMove) -> tuple[OrientedDiagram, ChainMap]:
    """Rewrite ``d`` by one move and return the new diagram with the induced map."""
    k, site, opts = m.kind, m.site, m.opts
    if k is MoveKind.BIRTH:
        rw = surgery.birth(d, site[0])
        return rw.diagram, morse_map(d, rw.diagram, (), (site[0],))
    if k is MoveKind.DEATH:
        rw = surgery.death(d, site[0])
        return rw.diagram, morse_map(d, rw.diagram, (site[0],), ())
    if k is MoveKind.SADDLE:
        rw = surgery.saddle(d, site[0], site[1])
        return rw.diagram, morse_map(d, rw.diagram, rw.info["old"], rw.info["new"])
    if k in (MoveKind.R1_ADD_POS, MoveKind.R1_ADD_NEG):
        sign = 1 if k is MoveKind.R1_ADD_POS else -1
        rw = surgery.r1_add(d, site[0], sign, opts.get("side", "left"))
        return rw.diagram, reidemeister_map(d, rw.diagram, rw, "R1", True)
    if k is MoveKind.R1_REMOVE:
        rw = surgery.r1_remove(d, site[0])
        return rw.diagram, reidemeister_map(rw.diagram, d, rw, "R1", False)
    if k is MoveKind.R2_ADD:
        rw = surgery.r2_add(d, site[0], opts.get("over", True), site[1])
        return rw.diagram, reidemeister_map(d, rw.diagram, rw, "R2", True)
    if k is MoveKind.R2_REMOVE:
        rw = surgery.r2_remove(d, site[0], site[1], opts.get("via"))
        return rw.diagram, reidemeister_map(rw.diagram, d, rw, "R2", False)
    if k is MoveKind.R3:
        variant = opts.get("variant", "native")
        if variant not in R3_VARIANTS:
            raise UnsupportedVariant(f"R3 variant {variant!r} is not supported")
        tri = surgery.find_triangle(d, site)
        if tri.chirality != 1:
            raise PatternMismatch(f"crossings {tuple(site)} form a mirror R3 triangle; use r3bar")
        return r3_native_map(d, site)
    if k is MoveKind.R3_BAR:
        return r3bar_map(d, site)
    if k is MoveKind.ISOTOPY:
        ids = dict(opts.get("crossings", ()))
        loops = {a: b for a, b in ids.items() if a in d.free_loops}
        loops.update(dict(opts.get("loops", ())))
        ids = {a: b for a, b in ids.items() if a not in loops}
        rw = surgery.isotopy(d, ids, dict(opts.get("edges", ())), loops)
        return rw.diagram, _relabel_to(d, rw.diagram, rw.info["cmap"], rw.info["emap"], rw.info["lmap"])
    raise UnsupportedVariant(f"unknown move kind {k}")


def catalog() -> list[str]:
    """Supported kinds and versions, one line each."""
    return [
        "Birth <loop>",
        "Death <loop>",
        "Saddle <edge|loop> <edge|loop>",
        "R1AddPos <edge|loop> side=left|right",
        "R1AddNeg <edge|loop> side=left|right",
        "R1Remove <crossing>",
        "R2Add <edge> over|under <edge>",
        "R2Remove <crossing> <crossing> [via=<edge>]",
        "R3 <c> <c> <c> variant=" + "|".join(R3_VARIANTS),
        "R3Bar <c> <c> <c>  (finger move in the upper/middle wedge, R3, bigon removal)",
        "Isotopy {crossing map ; edge map}",
    ]


def move_target(d: OrientedDiagram, m: LocalMove) -> OrientedDiagram:
    """The diagram after ``m`` without building the chain map."""
    k, site, opts = m.kind, m.site, m.opts
    if k is MoveKind.BIRTH:
        return surgery.birth(d, site[0]).diagram
    if k is MoveKind.DEATH:
        return surgery.death(d, site[0]).diagram
    if k is MoveKind.SADDLE:
        return surgery.saddle(d, site[0], site[1]).diagram
    if k in (MoveKind.R1_ADD_POS, MoveKind.R1_ADD_NEG):
        sign = 1 if k is MoveKind.R1_ADD_POS else -1
        return surgery.r1_add(d, site[0], sign, opts.get("side", "left")).diagram
    if k is MoveKind.R1_REMOVE:
        return surgery.r1_remove(d, site[0]).diagram
    if k is MoveKind.R2_ADD:
        return surgery.r2_add(d, site[0], opts.get("over", True), site[1]).diagram
    if k is MoveKind.R2_REMOVE:
        return surgery.r2_remove(d, site[0], site[1], opts.get("via")).diagram
    if k in (MoveKind.R3, MoveKind.R3_BAR):
        tri = surgery.find_triangle(d, site)
        if (tri.chirality == 1) != (k is MoveKind.R3):
            raise PatternMismatch(f"crossings {tuple(site)} have the other R3 chirality")
        return surgery.r3(d, site).diagram
    return apply_move(d, m)[0]
