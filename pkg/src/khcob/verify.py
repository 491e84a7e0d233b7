"""Independent checks: a Kauffman-bracket oracle and the movie-move harness.

The oracle reads the raw PD data and never touches the resolution code of the
chain complex, so agreement with the graded Euler characteristic is a real
cross-check.

The harness plays both sides of a movie move on a small closed diagram,
in either time direction, and compares the induced maps on homology up to
an overall sign.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from . import surgery
from .diagram import OrientedDiagram, find_isomorphisms
from .errors import KhError, NotAnIsomorphism, PatternMismatch, UnsupportedVariant
from .homology import Verdict, equal_up_to_sign
from .laurent import LaurentPolynomial
from .moves import ChainMap, LocalMove, MoveKind, _relabel_to, apply_move, move


# ---------------------------------------------------------------------------
# Kauffman bracket oracle

def _components(n_items: int, pairs) -> int:
    parent = list(range(n_items))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = n_items
    for a, b in pairs:
        ra, rb = root(a), root(b)
        if ra != rb:
            parent[ra] = rb
            count -= 1
    return count


def kauffman_bracket(data: dict) -> dict[int, int]:
    """<D> as {power of A: coefficient}, normalised so a lone circle is
    -A^2 - A^-2 (the empty diagram is 1)."""
    crossings = data.get("crossings", [])
    loops = len(data.get("free_loops", []))
    edges = sorted({e for c in crossings for e in c["edges"]})
    index = {e: k for k, e in enumerate(edges)}
    delta = {2: -1, -2: -1}
    total: dict[int, int] = {}
    for choice in product((0, 1), repeat=len(crossings)):
        pairs = []
        a_count = 0
        for c, bit in zip(crossings, choice):
            i, j, k, l = (index[e] for e in c["edges"])
            if bit == 0:  # A-smoothing joins i-j and k-l
                pairs += [(i, j), (k, l)]
                a_count += 1
            else:
                pairs += [(i, l), (j, k)]
        circles = _components(len(edges), pairs) + loops
        term = {a_count - (len(crossings) - a_count): 1}
        for _ in range(circles):
            term = _mul(term, delta)
        for p, v in term.items():
            total[p] = total.get(p, 0) + v
    # the empty diagram evaluates to 1, one circle to delta
    if crossings or loops:
        total = _div_delta(total)
    return {p: v for p, v in total.items() if v}


def _mul(f, g):
    out: dict[int, int] = {}
    for a, x in f.items():
        for b, y in g.items():
            out[a + b] = out.get(a + b, 0) + x * y
    return out


def _div_delta(f):
    """Divide by -A^2 - A^-2 (exact for every bracket with at least one circle)."""
    f = {p: v for p, v in f.items() if v}
    out: dict[int, int] = {}
    while f:
        top = max(f)
        c = -f[top]  # leading term of delta is -A^2
        out[top - 2] = c
        for p, v in {2: -1, -2: -1}.items():
            k = top - 2 + p
            f[k] = f.get(k, 0) - c * v
            if f[k] == 0:
                del f[k]
    return out


def kauffman_oracle(d: OrientedDiagram | dict) -> LaurentPolynomial:
    """Unnormalised Jones polynomial in the variable q, computed from the
    Kauffman bracket: (q + q^-1) at the unknot, and with A^2 -> -q^-1."""
    data = d.to_dict() if isinstance(d, OrientedDiagram) else d
    crossings = data.get("crossings", [])
    if not crossings and not data.get("free_loops"):
        return LaurentPolynomial({0: 1})
    writhe = sum(1 if c["over_incoming"] == 4 else -1 for c in crossings)
    bracket = _mul(kauffman_bracket(data), {2: -1, -2: -1})
    # f = (-A^3)^(-w) <D>
    f = {p - 3 * writhe: v * (-1) ** (writhe % 2) for p, v in bracket.items()}
    out = {}
    for p, v in f.items():
        if p % 2:
            raise KhError("odd power of A in the bracket of a link diagram")
        m = p // 2
        out[-m] = out.get(-m, 0) + v * (-1) ** (m % 2)
    return LaurentPolynomial(out)


# ---------------------------------------------------------------------------
# running and reversing move sequences

@dataclass
class Run:
    start: OrientedDiagram
    end: OrientedDiagram
    chain_map: ChainMap
    moves: list[LocalMove] = field(default_factory=list)
    stills: list[OrientedDiagram] = field(default_factory=list)


def run_moves(d: OrientedDiagram, moves) -> Run:
    f = ChainMap.identity(d)
    stills = [d]
    cur = d
    for k, m in enumerate(moves):
        try:
            cur, g = apply_move(cur, m)
        except PatternMismatch as exc:
            if exc.still is None:
                exc.still = k
            raise
        f = g @ f
        stills.append(cur)
    return Run(d, cur, f, list(moves), stills)


def _fixed(a: OrientedDiagram, b: OrientedDiagram, local=()) -> dict:
    shared = {c.id for c in a.crossings} & {c.id for c in b.crossings}
    return {c: c for c in shared - set(local)}


def match(a: OrientedDiagram, b: OrientedDiagram, local=()):
    """An isomorphism a -> b fixing the crossings they share (outside
    ``local``), preferring one that keeps edge and loop labels."""
    best = None
    for cmap, emap, lmap in find_isomorphisms(a, b, _fixed(a, b, local)):
        score = sum(k == v for k, v in emap.items()) + sum(k == v for k, v in lmap.items())
        if best is None or score > best[0]:
            best = (score, cmap, emap, lmap)
    if best is None:
        raise NotAnIsomorphism("the two diagrams are not isomorphic")
    return best[1:]


def isomorphism_map(a: OrientedDiagram, b: OrientedDiagram, local=()) -> ChainMap:
    return _relabel_to(a, b, *match(a, b, local))


def _inverse_candidates(before: OrientedDiagram, m: LocalMove, after: OrientedDiagram):
    k, site = m.kind, m.site
    if k is MoveKind.BIRTH:
        yield move("Death", site[0])
    elif k is MoveKind.DEATH:
        yield move("Birth", site[0])
    elif k is MoveKind.SADDLE:
        new = [x for x in after.members if x not in before.member_index]
        for a in new:
            for b in new:
                yield move("Saddle", a, b)
    elif k in (MoveKind.R1_ADD_POS, MoveKind.R1_ADD_NEG):
        created = [c.id for c in after.crossings if c.id not in before.crossing_index]
        yield move("R1Remove", created[0])
    elif k is MoveKind.R1_REMOVE:
        c = before.crossing(site[0])
        kind = "R1AddPos" if c.sign == 1 else "R1AddNeg"
        for x in after.members:
            for side in ("left", "right"):
                yield move(kind, x, side=side)
    elif k is MoveKind.R2_ADD:
        # remove exactly the bigon the move created
        rw = surgery.r2_add(before, site[0], m.opts.get("over", True), site[1])
        yield move("R2Remove", *rw.local, via=rw.info["bigon"][0])
    elif k is MoveKind.R2_REMOVE:
        for a in after.members:
            for b in after.members:
                if a != b:
                    for over in (True, False):
                        yield move("R2Add", a, b, over=over)
    elif k in (MoveKind.R3, MoveKind.R3_BAR):
        yield m
    elif k is MoveKind.ISOTOPY:
        o = m.opts
        yield move("Isotopy", crossings=tuple((b, a) for a, b in o.get("crossings", ())),
                   edges=tuple((b, a) for a, b in o.get("edges", ())),
                   loops=tuple((b, a) for a, b in o.get("loops", ())))


def inverse_step(before: OrientedDiagram, m: LocalMove, after: OrientedDiagram):
    """A move undoing ``m`` on ``after``, with the map back onto ``before``."""
    local = set(m.site) if m.kind in (MoveKind.R1_REMOVE, MoveKind.R2_REMOVE) else set()
    for cand in _inverse_candidates(before, m, after):
        try:
            back, f = apply_move(after, cand)
            iso = match(back, before, local)
        except KhError:
            continue
        return cand, _relabel_to(back, before, *iso) @ f
    raise UnsupportedVariant(f"no inverse found for {m}")


def reverse_run(r: Run) -> Run:
    """Play a run backwards in time, ending exactly on its start diagram."""
    f = ChainMap.identity(r.end)
    moves = []
    for k in range(len(r.moves) - 1, -1, -1):
        before, after = r.stills[k], r.stills[k + 1]
        cand, g = inverse_step(before, r.moves[k], after)
        moves.append(cand)
        f = g @ f
    return Run(r.end, r.start, f, moves, list(reversed(r.stills)))


def _new_ids(d: OrientedDiagram, *others) -> set:
    old = set(d.crossing_index)
    return {c.id for o in others for c in o.crossings} - old


def compare_sides(d: OrientedDiagram, left, right, direction: str = "down"):
    """Verdict of the right side's map against the left side's, plus both
    homology maps (keyed by bigrading)."""
    lr, rr = run_moves(d, left), run_moves(d, right)
    local = _new_ids(d, lr.end, rr.end)
    to_left = isomorphism_map(rr.end, lr.end, local)
    if direction == "down":
        f, g = lr.chain_map, to_left @ rr.chain_map
    elif direction == "up":
        back_l, back_r = reverse_run(lr), reverse_run(rr)
        f = back_l.chain_map
        g = back_r.chain_map @ isomorphism_map(lr.end, rr.end, local)
    else:
        raise ValueError(f"direction must be up or down, got {direction!r}")
    hf, hg = f.on_homology(), g.on_homology()
    return equal_up_to_sign(hf, hg), hf, hg


# ---------------------------------------------------------------------------
# the movie-move catalog

SAME, OPPOSITE = Verdict.SAME, Verdict.OPPOSITE

# expected verdicts (downward, upward) per move and version
TABLE: dict[tuple[int, str], tuple[Verdict, Verdict]] = {}
for _n in (1, 2, 3, 4, 5):
    for _v in {1: ("pos-left", "pos-right", "neg-left", "neg-right"), 2: ("over", "under"),
               3: ("native",), 4: ("mirror",), 5: ("over", "under")}[_n]:
        TABLE[(_n, _v)] = (SAME, SAME)
for _v in ("front", "behind"):
    TABLE[(6, f"pos-{_v}")] = (OPPOSITE, OPPOSITE)
    TABLE[(6, f"neg-{_v}")] = (SAME, SAME)
TABLE[(7, "tetrahedron")] = (SAME, SAME)
TABLE[(8, "over")] = TABLE[(8, "under")] = (SAME, OPPOSITE)
TABLE[(9, "birth")] = TABLE[(9, "death")] = (SAME, SAME)
TABLE[(10, "front")] = TABLE[(10, "behind")] = (OPPOSITE, SAME)
TABLE[(11, "displayed")] = (OPPOSITE, SAME)
TABLE[(11, "mirror")] = (SAME, SAME)
TABLE[(12, "displayed")] = (OPPOSITE, SAME)
TABLE[(12, "mirror")] = (SAME, OPPOSITE)
TABLE[(13, "displayed")] = (SAME, SAME)
TABLE[(13, "mirror")] = (OPPOSITE, OPPOSITE)
TABLE[(14, "displayed")] = (OPPOSITE, OPPOSITE)
TABLE[(14, "mirror")] = (SAME, SAME)
TABLE[(15, "left")] = TABLE[(15, "right")] = (OPPOSITE, OPPOSITE)

MOVE7_ENV = "KH_ENABLE_MOVE7"


def variants(n: int) -> list[str]:
    return [v for (k, v) in TABLE if k == n]


@dataclass(frozen=True)
class MovieMoveCase:
    """Both sides of one movie move, closed up on a fixture diagram.

    ``prelude`` rewrites the fixture into the still both sides start from.
    """

    number: int
    variant: str
    diagram: str
    prelude: tuple = ()
    left: tuple = ()
    right: tuple = ()

    def start(self) -> OrientedDiagram:
        d = load_fixture(self.diagram)
        return run_moves(d, self.prelude).end if self.prelude else d


def load_fixture(name: str) -> OrientedDiagram:
    from .movie import FIXTURES
    return OrientedDiagram.load(FIXTURES / f"{name}.json")


def _created(before: OrientedDiagram, after: OrientedDiagram) -> list[str]:
    return [c.id for c in after.crossings if c.id not in before.crossing_index]


def _target(d, m):
    return apply_move(d, m)[0] if m.kind in (MoveKind.R3, MoveKind.R3_BAR) else _move_target(d, m)


def _move_target(d, m):
    from .moves import move_target
    return move_target(d, m)


def _compatible_pairs(face):
    return [(a, b) for a, fa in face for b, fb in face if a != b and fa == fb]


def _pos(variant: str) -> str:
    return "R1AddPos" if variant.startswith("pos") or variant == "displayed" else "R1AddNeg"


def _case_r1(variant):
    d = load_fixture("trefoil_right")
    sign, side = variant.split("-")
    m = move("R1AddPos" if sign == "pos" else "R1AddNeg", 1, side=side)
    c = _created(d, _move_target(d, m))[0]
    return MovieMoveCase(1, variant, "trefoil_right", (), (), (m, move("R1Remove", c)))


def _r2_there_and_back(d, a, b, over):
    rw = surgery.r2_add(d, a, over, b)
    return (move("R2Add", a, b, over=over), move("R2Remove", *rw.local, via=rw.info["bigon"][0]))


def _case_r2(variant):
    d = load_fixture("trefoil_right")
    a, b = next(p for f in d.faces() for p in [(x, y) for x, _ in f for y, _ in f if x != y])
    return MovieMoveCase(2, variant, "trefoil_right", (), (), _r2_there_and_back(d, a, b, variant == "over"))


def _case_r3(n, variant):
    d = load_fixture("triangles")
    want = 1 if n == 3 else -1
    for tri in _triangles(d):
        if surgery.find_triangle(d, tri).chirality == want:
            kind = "R3" if want == 1 else "R3Bar"
            return MovieMoveCase(n, variant, "triangles", (), (), (move(kind, *tri), move(kind, *tri)))
    raise UnsupportedVariant(f"no triangle of chirality {want} in the fixture")


def _triangles(d):
    from itertools import combinations
    for tri in combinations([c.id for c in d.crossings], 3):
        try:
            surgery.find_triangle(d, tri)
        except KhError:
            continue
        yield tri


def _case_circle_r2(variant):
    # a strand pushed across a separate circle and back
    d = load_fixture("trefoil_right")
    lid = d.fresh_loop_id()
    start = _move_target(d, move("Birth", lid))
    return MovieMoveCase(5, variant, "trefoil_right", (move("Birth", lid),), (),
                         _r2_there_and_back(start, 1, lid, variant == "over"))


def _strands(c):
    ip = c.over_incoming - 1
    return (c.edges[0], c.edges[2]), (c.edges[ip], c.edges[(ip + 2) % 4])


def _case_kink_through_strand(variant):
    """A kink on the horizontal strand H at a crossing c travels through the
    vertical strand V: R1 before c, R2 with V, R3 through c, R2 removal;
    against a single R1 after c."""
    from itertools import combinations
    name = "trefoil_right"
    d = load_fixture(name)
    c = d.crossings[0]
    sign, place = variant.split("-")
    kind = "R1AddPos" if sign == "pos" else "R1AddNeg"
    h_under = place == "behind"
    (ui, uo), (oi, oo) = _strands(c)
    (hi, ho), (vi, vo) = ((ui, uo), (oi, oo)) if h_under else ((oi, oo), (ui, uo))
    right = (move(kind, ho, side="left"),)
    target = _move_target(d, right[0])
    for side in ("left", "right"):
        m1 = move(kind, hi, side=side)
        d1 = _move_target(d, m1)
        a = _created(d, d1)[0]
        k = surgery.kink_edge(d1, a)
        for v in (vi, vo):
            for first in (True, False):
                args = (k, v) if first else (v, k)
                m2 = move("R2Add", *args, over=(not h_under) if first else h_under)
                try:
                    d2 = _move_target(d1, m2)
                except KhError:
                    continue
                for tri in combinations([x.id for x in d2.crossings], 3):
                    if a not in tri or c.id not in tri:
                        continue
                    try:
                        t = surgery.find_triangle(d2, tri)
                    except KhError:
                        continue
                    m3 = move("R3" if t.chirality == 1 else "R3Bar", *tri)
                    d3 = surgery.r3(d2, tri).diagram
                    for pair in combinations([x.id for x in d3.crossings], 2):
                        if a in pair or not surgery.bigon_edges(d3, *pair):
                            continue
                        m4 = move("R2Remove", *pair)
                        d4 = _move_target(d3, m4)
                        try:
                            match(d4, target, _new_ids(d, d4, target))
                        except KhError:
                            continue
                        return MovieMoveCase(6, variant, name, (), (m1, m2, m3, m4), right)
    raise UnsupportedVariant(f"move 6 {variant}: no realisation on {name}")


def _tetrahedron():
    """Two orders of the four triple points around a quadruple point: the
    closed half twist on four strands, rewritten by R3 moves until the two
    searches meet on the reversed word."""
    name = "half_twist4"
    d = load_fixture(name)
    paths = []
    frontier = [(d, ())]
    for _ in range(4):
        nxt = []
        for cur, path in frontier:
            for tri in _triangles(cur):
                t = surgery.find_triangle(cur, tri)
                m = move("R3" if t.chirality == 1 else "R3Bar", *tri)
                if path and path[-1] == m:
                    continue
                nxt.append((surgery.r3(cur, tri).diagram, path + (m,)))
        frontier = nxt
    for k, (e1, p1) in enumerate(frontier):
        for e2, p2 in frontier[k + 1:]:
            if set(p1) & set(p2):
                continue
            try:
                match(e1, e2)
            except KhError:
                continue
            paths.append((p1, p2))
    if not paths:
        raise UnsupportedVariant("move 7: no pair of disjoint R3 paths found")
    p1, p2 = paths[0]
    return MovieMoveCase(7, "tetrahedron", name, (), p1, p2)


def _case_circle_through_strand(variant):
    """A newborn circle pushed through a strand (R2 in, R2 out on the far
    side) against a birth on the far side."""
    name = "trefoil_right"
    d = load_fixture(name)
    lid = d.fresh_loop_id()
    b = move("Birth", lid)
    d1 = _move_target(d, b)
    rw = surgery.r2_add(d1, 1, variant == "over", lid)
    far = next(e for e in rw.diagram.members
               if e not in d1.member_index and e not in rw.info["bigon"]
               and surgery.bigon_edges(rw.diagram, *rw.local, via=e))
    left = (b, move("R2Add", 1, lid, over=variant == "over"), move("R2Remove", *rw.local, via=far))
    return MovieMoveCase(8, variant, name, (), left, (b,))


def _case_cancel(variant):
    name = "trefoil_right"
    d = load_fixture(name)
    if variant == "birth":
        lid = d.fresh_loop_id()
        return MovieMoveCase(9, variant, name, (), (), (move("Birth", lid), move("Saddle", lid, 1)))
    lid = surgery.saddle(d, 1, 1).info["new"][1]
    return MovieMoveCase(9, variant, name, (), (), (move("Saddle", 1, 1), move("Death", lid)))


def _case_saddle_past_strand(variant):
    """Strand Q runs over (front) or under (behind) two arcs A and B; the
    saddle joining A and B happens on either side of Q, after which Q is
    pulled off the resulting cup by an R2 move."""
    name = "trefoil_right"
    d = load_fixture(name)
    over = variant == "front"
    faces = d.faces()
    for f1 in faces:
        for f2 in faces:
            if f1 is f2:
                continue
            for a, _ in f1:
                fa2 = [fw for e, fw in f2 if e == a]
                if not fa2:
                    continue
                for q, _ in f1:
                    for b, fb in f2:
                        if q == a or b in (a, q) or fb != fa2[0]:
                            continue
                        case = _saddle_past_strand(d, name, variant, q, a, b, over)
                        if case is not None:
                            return case
    raise UnsupportedVariant(f"move 10 {variant}: no realisation on {name}")


def _saddle_past_strand(d, name, variant, q, a, b, over):
    try:
        rw1 = surgery.r2_add(d, q, over, a)
        tip = rw1.info["bigon"][0]
        rw2 = surgery.r2_add(rw1.diagram, tip, over, b)
    except KhError:
        return None
    d0 = rw2.diagram
    x1, y1 = rw1.local[0], rw2.local[0]
    ends = {d0.crossing_index[x1], d0.crossing_index[y1]}
    arm = [e for e in d0.members if isinstance(e, int) and {s[0] for s in d0.slots[e]} == ends]
    sides = []
    for face in d0.faces():
        if not set(arm) & {e for e, _ in face}:
            continue
        for s, t in _compatible_pairs(face):
            if s < t and s not in arm and t not in arm:
                try:
                    d2 = _move_target(d0, move("Saddle", s, t))
                    via = next(e for e in arm if e in d2.member_index)
                    r = move("R2Remove", x1, y1, via=via)
                    _move_target(d2, r)
                except (KhError, StopIteration):
                    continue
                sides.append((move("Saddle", s, t), r))
    if len(sides) < 2:
        return None
    prelude = (move("R2Add", q, a, over=over), move("R2Add", tip, b, over=over))
    return MovieMoveCase(10, variant, name, prelude, sides[0], sides[1])


def _case_kinked_circle(variant):
    """A newborn circle acquires a kink on one side or the other."""
    name = "trefoil_right"
    d = load_fixture(name)
    lid = d.fresh_loop_id()
    kind = _pos(variant)
    b = move("Birth", lid)
    return MovieMoveCase(11, variant, name, (), (b, move(kind, lid, side="left")),
                         (b, move(kind, lid, side="right")))


def _case_saddle_at_crossing(variant):
    """A saddle in either of the two compatible corners of a crossing turns it
    into a kink, which is then removed."""
    name = "trefoil_right" if variant == "displayed" else "trefoil_left"
    d = load_fixture(name)
    c = d.crossings[0]
    corners = []
    es = sorted(set(c.edges))
    for a in es:
        for b in es:
            if a < b:
                try:
                    d2 = _move_target(d, move("Saddle", a, b))
                except KhError:
                    continue
                if surgery.kink_edge(d2, c.id) is not None:
                    corners.append((a, b))
    if len(corners) < 2:
        raise UnsupportedVariant(f"move 12 {variant}: crossing {c.id} has no two saddle corners")
    (l1, l2), (r1, r2) = corners[:2]
    return MovieMoveCase(12, variant, name, (),
                         (move("Saddle", l1, l2), move("R1Remove", c.id)),
                         (move("Saddle", r1, r2), move("R1Remove", c.id)))


def _case_saddle_in_bigon(variant):
    """Two strands pushed across each other (R2) and joined by a saddle inside
    the bigon, whose corners are then kinks; against the plain saddle."""
    name = "trefoil_right"
    d = load_fixture(name)
    over = variant == "displayed"
    p, r = _compatible_pairs(d.faces()[0])[0]
    rw = surgery.r2_add(d, p, over, r)
    x, y = rw.local
    left = (move("R2Add", p, r, over=over), move("Saddle", *rw.info["bigon"]),
            move("R1Remove", x), move("R1Remove", y))
    return MovieMoveCase(13, variant, name, (), left, (move("Saddle", p, r),))


def _case_circle_beside_strand(variant):
    """A circle born on either side of a strand and pushed onto it by R2."""
    name = "trefoil_right"
    d = load_fixture(name)
    lid = d.fresh_loop_id()
    over = variant == "displayed"
    b = move("Birth", lid)
    return MovieMoveCase(14, variant, name, (), (b, move("R2Add", lid, 1, over=over)),
                         (b, move("R2Add", 1, lid, over=not over)))


def _case_kink_past_saddle(variant):
    """A positive kink on one incoming strand of a saddle, made before the
    saddle or after it on the merged arc."""
    name = "trefoil_right"
    d = load_fixture(name)
    p, r = _compatible_pairs(d.faces()[0])[0]
    tgt = p if variant == "left" else r
    m1 = move("R1AddPos", tgt, side="left")
    d1 = _move_target(d, m1)
    sad = move("Saddle", p, r)
    ds = _move_target(d, sad)
    end_l = _move_target(d1, sad)
    for f in ds.members:
        if f in d.member_index:
            continue
        m2 = move("R1AddPos", f, side="left")
        end_r = _move_target(ds, m2)
        try:
            match(end_r, end_l, _new_ids(d, end_l, end_r))
        except KhError:
            continue
        return MovieMoveCase(15, variant, name, (), (m1, sad), (sad, m2))
    raise UnsupportedVariant(f"move 15 {variant}: no realisation on {name}")


def build_case(n: int, variant: str | None = None) -> MovieMoveCase:
    """The closed-up realisation of movie move ``n`` in the given version."""
    vs = variants(n)
    if not vs:
        raise UnsupportedVariant(f"there is no movie move {n}")
    variant = variant or vs[0]
    if variant not in vs:
        raise UnsupportedVariant(f"move {n} has versions {', '.join(vs)}, not {variant!r}")
    if n == 1:
        return _case_r1(variant)
    if n == 2:
        return _case_r2(variant)
    if n in (3, 4):
        return _case_r3(n, variant)
    if n == 5:
        return _case_circle_r2(variant)
    if n == 6:
        return _case_kink_through_strand(variant)
    if n == 7:
        return _tetrahedron()
    builders: dict[int, Callable[[str], MovieMoveCase]] = {
        8: _case_circle_through_strand, 9: _case_cancel, 10: _case_saddle_past_strand,
        11: _case_kinked_circle, 12: _case_saddle_at_crossing, 13: _case_saddle_in_bigon,
        14: _case_circle_beside_strand, 15: _case_kink_past_saddle,
    }
    return builders[n](variant)


@dataclass(frozen=True)
class MoveCheckReport:
    number: int
    variant: str
    direction: str
    verdict: Verdict
    expected: Verdict
    diagram: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict is self.expected

    def to_json(self) -> dict:
        return {"move": self.number, "variant": self.variant, "direction": self.direction,
                "verdict": str(self.verdict), "expected": str(self.expected),
                "pass": self.passed, "diagram": self.diagram}


def move7_enabled(flag: bool | None = None) -> bool:
    if flag is not None:
        return flag
    return os.environ.get(MOVE7_ENV, "").strip().lower() in ("1", "true", "yes", "on")


def verify_movie_move(n: int, variant: str | None = None, direction: str = "down",
                      enable_move7: bool | None = None) -> MoveCheckReport:
    """Play both sides of movie move ``n`` and compare them on homology."""
    if direction not in ("down", "up"):
        raise ValueError(f"direction must be up or down, got {direction!r}")
    if n == 7 and not move7_enabled(enable_move7):
        raise UnsupportedVariant(f"move 7 is disabled; set {MOVE7_ENV}=1 to run it")
    case = build_case(n, variant)
    verdict, _, _ = compare_sides(case.start(), list(case.left), list(case.right), direction)
    expected = TABLE[(n, case.variant)][0 if direction == "down" else 1]
    return MoveCheckReport(n, case.variant, direction, verdict, expected, case.diagram)


# ---------------------------------------------------------------------------
# the whole suite

FIXTURE_DIAGRAMS = ("empty", "unknot", "unlink2", "unlink3", "hopf", "hopf_negative", "trefoil_right",
                    "trefoil_left", "figure_eight", "unknot_kinks", "triangles", "8_18")
GROUPS = ("complex", "oracle", "maps", "inverses", "morse", "table")


def kh_threads() -> int:
    """Worker count: KH_THREADS if set, else the CPU count."""
    raw = os.environ.get("KH_THREADS", "").strip()
    cpus = os.cpu_count() or 1
    if not raw:
        return cpus
    try:
        return max(1, min(int(raw), cpus))
    except ValueError:
        raise KhError(f"KH_THREADS must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class Check:
    name: str
    group: str
    args: tuple = ()


@dataclass(frozen=True)
class CheckResult:
    name: str
    group: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "group": self.group, "pass": self.passed, **self.detail}


def _local_moves(d: OrientedDiagram):
    """One instance of each move kind on the right trefoil, for map checks."""
    lid = d.fresh_loop_id()
    born = _move_target(d, move("Birth", lid))
    kinked = _move_target(d, move("R1AddPos", 1, side="left"))
    p, r = _compatible_pairs(d.faces()[0])[0]
    rw = surgery.r2_add(d, p, True, r)
    tri_d = load_fixture("triangles")
    native = next(t for t in _triangles(tri_d) if surgery.find_triangle(tri_d, t).chirality == 1)
    mirror = next(t for t in _triangles(tri_d) if surgery.find_triangle(tri_d, t).chirality == -1)
    return [
        ("birth", d, move("Birth", lid)),
        ("death", born, move("Death", lid)),
        ("saddle", d, move("Saddle", p, r)),
        ("r1-add-pos", d, move("R1AddPos", 1, side="left")),
        ("r1-add-neg", d, move("R1AddNeg", 1, side="right")),
        ("r1-remove", kinked, move("R1Remove", _created(d, kinked)[0])),
        ("r2-add", d, move("R2Add", p, r, over=True)),
        ("r2-remove", rw.diagram, move("R2Remove", *rw.local, via=rw.info["bigon"][0])),
        ("r3", tri_d, move("R3", *native)),
        ("r3bar", tri_d, move("R3Bar", *mirror)),
    ]


def _corrupt(f: ChainMap) -> ChainMap:
    """Flip the sign of one nonzero matrix entry (fault injection).

    The entry is taken in a row whose target generator has a nonzero
    differential, so the fault is visible to the chain-map check.
    """
    blocks = dict(f.blocks)
    tgt = f.target_complex
    for key in sorted(blocks):
        m = blocks[key]
        d_out = tgt.differential(key[0], key[1] + f.dj)
        for (r, c), v in m.items():
            if not d_out.column(r):
                continue
            m = m.copy()
            m[r, c] = -v
            blocks[key] = m
            return ChainMap(f.source, f.target, f.dj, blocks)
    return f


def _check_complex(name):
    from .complex import complex_of
    cx = complex_of(load_fixture(name))
    bad = [(i, j) for i, j in cx.gradings()
           if not (cx.differential(i + 1, j) @ cx.differential(i, j)).is_zero()]
    return not bad, {"diagram": name, "failing": [list(g) for g in bad]}


def _check_oracle(name):
    from .complex import graded_euler_characteristic
    d = load_fixture(name)
    a, b = kauffman_oracle(d), graded_euler_characteristic(d)
    return a == b, {"diagram": name, "oracle": str(a), "euler": str(b)}


def _check_map(label, corrupt=False):
    from .moves import check_chain_map
    d = load_fixture("trefoil_right")
    for name, start, m in _local_moves(d):
        if name == label:
            _, f = apply_move(start, m)
            if corrupt:
                f = _corrupt(f)
            res = check_chain_map(f)
            return res.ok, {"move": str(m), "bidegree": list(f.bidegree),
                            "failing_block": list(res.block) if res.block else None}
    raise KhError(f"unknown local move {label!r}")


def _check_inverse(label):
    d = load_fixture("trefoil_right")
    moves_ = {n: (s, m) for n, s, m in _local_moves(d)}
    start, m = moves_[label]
    run = run_moves(start, [m])
    back = reverse_run(run)
    ident = ChainMap.identity(start).on_homology()
    there = ChainMap.identity(run.end).on_homology()
    v1 = equal_up_to_sign((back.chain_map @ run.chain_map).on_homology(), ident)
    v2 = equal_up_to_sign((run.chain_map @ back.chain_map).on_homology(), there)
    ok = v1 is not Verdict.DIFFERENT and v2 is not Verdict.DIFFERENT
    return ok, {"move": str(m), "psi_phi": str(v1), "phi_psi": str(v2)}


def _check_closed(name, expected):
    from .movie import evaluate_movie, load_movie, FIXTURES
    r = evaluate_movie(load_movie(FIXTURES / "movies" / f"{name}.movie"))
    block = r.chain_map.block(0, 0)
    value = block[0, 0] if block.shape == (1, 1) else 0
    return value == expected, {"movie": name, "value": value, "expected": expected, "chi": r.chi}


def _created_loops(d: OrientedDiagram, moves) -> dict:
    """Loops created by each move of a crossingless run, keyed by the move."""
    out = {}
    cur = d
    for m in moves:
        nxt = _move_target(cur, m)
        out[m] = [x for x in nxt.free_loops if x not in cur.free_loops]
        cur = nxt
    return out


def _check_commute():
    d = load_fixture("unlink3")
    a, b, c = d.free_loops
    pairs = [
        ([move("Saddle", a, a)], [move("Saddle", b, b)]),
        ([move("Saddle", a, b)], [move("Birth", "l9")]),
        ([move("Birth", "l9")], [move("Death", c)]),
    ]
    bad = []
    for p, q in pairs:
        f = run_moves(d, p + q)
        g = run_moves(d, q + p)
        # match loops by the move that created them
        lf, lg = _created_loops(d, p + q), _created_loops(d, q + p)
        lmap = {x: x for x in g.end.free_loops}
        for m in lg:
            lmap.update(zip(lg[m], lf[m]))
        h = _relabel_to(g.end, f.end, {}, {}, lmap)
        if (h @ g.chain_map) != f.chain_map:
            bad.append([str(x) for x in p + q])
    return not bad, {"failing": bad}


def _check_table(n, variant, direction, enable_move7):
    r = verify_movie_move(n, variant, direction, enable_move7)
    return r.passed, r.to_json()


def _run_check(check: Check, corrupt: str | None, enable_move7: bool) -> CheckResult:
    try:
        if check.group == "complex":
            ok, detail = _check_complex(*check.args)
        elif check.group == "oracle":
            ok, detail = _check_oracle(*check.args)
        elif check.group == "maps":
            ok, detail = _check_map(check.args[0], corrupt == check.args[0])
        elif check.group == "inverses":
            ok, detail = _check_inverse(*check.args)
        elif check.group == "morse":
            ok, detail = _check_commute() if check.args == ("commute",) else _check_closed(*check.args)
        else:
            ok, detail = _check_table(*check.args, enable_move7)
    except KhError as exc:
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return CheckResult(check.name, check.group, ok, detail)


def plan(config: dict | None = None) -> list[Check]:
    """The checks selected by ``config``: keys ``groups``, ``moves``,
    ``directions``, ``include_move7``."""
    config = config or {}
    groups = config.get("groups") or GROUPS
    for g in groups:
        if g not in GROUPS:
            raise KhError(f"unknown check group {g!r}")
    checks = []
    if "complex" in groups:
        checks += [Check(f"d2=0 {n}", "complex", (n,)) for n in FIXTURE_DIAGRAMS]
    if "oracle" in groups:
        checks += [Check(f"oracle {n}", "oracle", (n,)) for n in FIXTURE_DIAGRAMS]
    if "maps" in groups or "inverses" in groups:
        labels = [n for n, _, _ in _local_moves(load_fixture("trefoil_right"))]
        if "maps" in groups:
            checks += [Check(f"chain map {x}", "maps", (x,)) for x in labels]
        if "inverses" in groups:
            checks += [Check(f"inverse {x}", "inverses", (x,)) for x in labels if x.startswith(("r1", "r2"))]
    if "morse" in groups:
        checks += [Check("closed sphere", "morse", ("sphere", 0)),
                   Check("closed torus", "morse", ("torus", 2)),
                   Check("distant Morse moves commute", "morse", ("commute",))]
    if "table" in groups:
        include7 = move7_enabled(config.get("include_move7"))
        numbers = config.get("moves") or [n for n in range(1, 16) if n != 7 or include7]
        directions = config.get("directions") or ("down", "up")
        for n in numbers:
            if n == 7 and not include7:
                raise UnsupportedVariant(f"move 7 is disabled; set {MOVE7_ENV}=1 to run it")
            for v in config.get("variants") or variants(n):
                for dr in directions:
                    checks.append(Check(f"move {n} {v} {dr}", "table", (n, v, dr)))
    return checks


def verify_all(config: dict | None = None) -> dict:
    """Run the selected checks (in parallel up to KH_THREADS workers) and
    return a JSON-ready summary."""
    config = config or {}
    checks = plan(config)
    corrupt = config.get("corrupt")
    include7 = move7_enabled(config.get("include_move7"))
    workers = min(kh_threads(), max(1, len(checks)))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_check, checks, [corrupt] * len(checks), [include7] * len(checks)))
    else:
        results = [_run_check(c, corrupt, include7) for c in checks]
    failed = [r.name for r in results if not r.passed]
    return {
        "passed": not failed,
        "total": len(results),
        "failures": failed,
        "checks": [r.to_json() for r in results],
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
