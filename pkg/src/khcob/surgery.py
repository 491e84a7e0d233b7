"""Combinatorial rewrites of PD diagrams for local moves.

Every rewrite returns the new diagram together with the bookkeeping the chain
maps need (which crossings are local, which labels survived). Fresh labels are
always max+1 of what is in use, so replaying a movie is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Crossing, OrientedDiagram, check_diagram
from .errors import OrientationClash, PatternMismatch

Member = object  # an int edge or a str loop id


def _crossing_from_rays(cid: str, rays, under) -> Crossing:
    """``rays``: ccw list of (label, strand, incoming). ``under`` names the
    strand passing underneath."""
    start = next(k for k, (_, s, inc) in enumerate(rays) if s == under and inc)
    rot = rays[start:] + rays[:start]
    if rot[2][1] != under or rot[2][2]:
        raise PatternMismatch(f"crossing {cid}: rays do not form a transverse crossing")
    over_in = next(k for k, (_, s, inc) in enumerate(rot) if s != under and inc)
    return Crossing(cid, tuple(r[0] for r in rot), over_in + 1)


@dataclass
class Rewrite:
    diagram: OrientedDiagram
    # crossings created (for additions) or removed (for removals), in role order
    local: tuple[str, ...] = ()
    # member of the larger diagram -> member of the smaller (Reidemeister)
    member_map: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# removal by straightening strands through crossings

def straighten(d: OrientedDiagram, remove: set[str]) -> tuple[OrientedDiagram, dict]:
    """Delete crossings, joining each strand straight through them.

    A merged edge keeps the label of its first piece; a component that only
    ran through deleted crossings becomes a fresh free loop.
    Returns the diagram and the member map (old member -> new member).
    """
    removed = {d.crossing_index[c] for c in remove}
    member_map: dict = {x: x for x in d.free_loops}
    head_label: dict[tuple[int, int], int] = {}
    for e in d.edges:
        tail, _ = d.slots[e]
        if tail[0] in removed:
            continue
        path = [e]
        ci, pos = d.slots[e][1]
        while ci in removed:
            nxt = d.crossings[ci].edges[(pos + 2) % 4]
            path.append(nxt)
            ci, pos = d.slots[nxt][1]
        for piece in path:
            member_map[piece] = e
        head_label[(ci, pos)] = e
    loops = list(d.free_loops)
    for e in d.edges:
        if e in member_map:
            continue
        lid = d.fresh_loop_id(loops)
        loops.append(lid)
        x = e
        while x not in member_map:
            member_map[x] = lid
            ci, pos = d.slots[x][1]
            x = d.crossings[ci].edges[(pos + 2) % 4]
    crossings = []
    for ci, c in enumerate(d.crossings):
        if ci in removed:
            continue
        edges = tuple(head_label.get((ci, p), c.edges[p]) for p in range(4))
        crossings.append(Crossing(c.id, edges, c.over_incoming))
    return check_diagram(OrientedDiagram(tuple(crossings), tuple(loops))), member_map


def _replace(crossings: list[list], slot, label):
    crossings[slot[0]][1][slot[1]] = label


def _mutable(d: OrientedDiagram) -> list[list]:
    return [[c.id, list(c.edges), c.over_incoming] for c in d.crossings]


def _freeze(rows, loops) -> OrientedDiagram:
    return check_diagram(OrientedDiagram(tuple(Crossing(i, tuple(e), o) for i, e, o in rows), tuple(loops)))


# ---------------------------------------------------------------------------
# Morse moves

def birth(d: OrientedDiagram, loop: str) -> Rewrite:
    if loop in d.free_loops or loop in d.crossing_index:
        raise PatternMismatch(f"identifier {loop!r} already in use")
    return Rewrite(OrientedDiagram(d.crossings, d.free_loops + (loop,)), info={"loop": loop})


def death(d: OrientedDiagram, loop: str) -> Rewrite:
    if loop not in d.free_loops:
        raise PatternMismatch(f"death needs a free loop, {loop!r} is not one")
    return Rewrite(OrientedDiagram(d.crossings, tuple(x for x in d.free_loops if x != loop)), info={"loop": loop})


def _find_face_with(d: OrientedDiagram, e1: int, e2: int):
    for face in d.faces():
        f1 = [fw for e, fw in face if e == e1]
        f2 = [fw for e, fw in face if e == e2]
        if f1 and f2:
            yield face, f1, f2


def saddle(d: OrientedDiagram, a, b) -> Rewrite:
    """Oriented band between two strands; ``a``/``b`` are edges or loop ids.

    Returns info['pieces_a'/'pieces_b']: the members replacing each side, so
    the chain map can locate the touched circles.
    """
    for x in (a, b):
        if x not in d.member_index:
            raise PatternMismatch(f"no edge or loop {x!r}")
    loops = list(d.free_loops)
    rows = _mutable(d)
    a_loop, b_loop = isinstance(a, str), isinstance(b, str)
    if a_loop and b_loop:
        if a == b:
            l1 = d.fresh_loop_id(loops)
            l2 = d.fresh_loop_id(loops + [l1])
            loops = [x for x in loops if x != a] + [l1, l2]
            return Rewrite(_freeze(rows, loops), info={"old": (a,), "new": (l1, l2)})
        lid = d.fresh_loop_id(loops)
        loops = [x for x in loops if x not in (a, b)] + [lid]
        return Rewrite(_freeze(rows, loops), info={"old": (a, b), "new": (lid,)})
    if a_loop or b_loop:
        loop, e = (a, b) if a_loop else (b, a)
        f = d.fresh_edge()
        tail, head = d.slots[e]
        _replace(rows, tail, f)
        _replace(rows, head, f)
        loops = [x for x in loops if x != loop]
        return Rewrite(_freeze(rows, loops), info={"old": (e, loop), "new": (f,)})
    if a == b:
        f = d.fresh_edge()
        lid = d.fresh_loop_id(loops)
        tail, head = d.slots[a]
        _replace(rows, tail, f)
        _replace(rows, head, f)
        return Rewrite(_freeze(rows, loops + [lid]), info={"old": (a,), "new": (f, lid)})
    ok = False
    clash = False
    for _, f1, f2 in _find_face_with(d, a, b):
        if any(x == y for x in f1 for y in f2):
            ok = True
            break
        clash = True
    if not ok:
        if clash:
            raise OrientationClash(f"edges {a} and {b} share a face but are oriented incompatibly")
        raise PatternMismatch(f"edges {a} and {b} do not share a face")
    f1 = d.fresh_edge()
    f2 = f1 + 1
    (ta, ha), (tb, hb) = d.slots[a], d.slots[b]
    # tail of a now runs into the head of b, and vice versa
    _replace(rows, ta, f1)
    _replace(rows, hb, f1)
    _replace(rows, tb, f2)
    _replace(rows, ha, f2)
    return Rewrite(_freeze(rows, loops), info={"old": (a, b), "new": (f1, f2)})


# ---------------------------------------------------------------------------
# Reidemeister 1

def r1_add(d: OrientedDiagram, target, sign: int, side: str) -> Rewrite:
    """Add a kink with crossing sign ``sign`` on an edge or loop; the small
    loop lies to the ``left`` or ``right`` of the strand."""
    if side not in ("left", "right"):
        raise PatternMismatch(f"kink side must be left or right, got {side!r}")
    if target not in d.member_index:
        raise PatternMismatch(f"no edge or loop {target!r}")
    cid = d.fresh_crossing_id()
    rows = _mutable(d)
    loops = list(d.free_loops)
    if isinstance(target, str):
        e_in = e_out = d.fresh_edge()
        kink = e_in + 1
        loops.remove(target)
    else:
        e_in = target
        e_out = d.fresh_edge()
        kink = e_out + 1
        _, head = d.slots[target]
        _replace(rows, head, e_out)
    # strand passes as e_in -> kink (first pass), kink -> e_out (second pass)
    if side == "left":
        rays = [(e_in, 1, True), (e_out, 2, False), (kink, 1, False), (kink, 2, True)]
    else:
        rays = [(e_in, 1, True), (kink, 2, True), (kink, 1, False), (e_out, 2, False)]
    for under in (1, 2):
        c = _crossing_from_rays(cid, rays, under)
        if c.sign == sign:
            break
    rows.append([c.id, list(c.edges), c.over_incoming])
    new = _freeze(rows, loops)
    member_map = {m: m for m in d.members}
    member_map.update({e_out: e_in if not isinstance(target, str) else target, kink: None})
    if isinstance(target, str):
        member_map[e_in] = target
    return Rewrite(new, local=(cid,), member_map=member_map, info={"kink": kink})


def kink_edge(d: OrientedDiagram, cid: str):
    """The loop edge of a removable kink at ``cid`` or None."""
    c = d.crossing(cid)
    faces = {f[0][0] for f in d.faces() if len(f) == 1}
    for p in range(4):
        e = c.edges[p]
        if c.edges[(p + 1) % 4] == e and e in faces:
            return e
    return None


def r1_remove(d: OrientedDiagram, cid: str) -> Rewrite:
    if cid not in d.crossing_index:
        raise PatternMismatch(f"no crossing {cid!r}")
    kink = kink_edge(d, cid)
    if kink is None:
        raise PatternMismatch(f"crossing {cid} is not a removable kink")
    new, member_map = straighten(d, {cid})
    member_map = dict(member_map)
    member_map[kink] = None
    return Rewrite(new, local=(cid,), member_map=member_map, info={"kink": kink})


# ---------------------------------------------------------------------------
# Reidemeister 2

def _walk_direction(d: OrientedDiagram, e1, e2):
    """Common face of two edges and the direction each is walked along it."""
    for _, f1, f2 in _find_face_with(d, e1, e2):
        return f1[0], f2[0]
    raise PatternMismatch(f"edges {e1} and {e2} do not share a face")


def r2_add(d: OrientedDiagram, e1, over: bool, e2) -> Rewrite:
    """Push strand ``e1`` across strand ``e2`` (over or under it)."""
    for x in (e1, e2):
        if x not in d.member_index:
            raise PatternMismatch(f"no edge or loop {x!r}")
    if e1 == e2:
        raise PatternMismatch("a strand cannot be pushed across itself")
    if isinstance(e1, int) and isinstance(e2, int):
        w1, w2 = _walk_direction(d, e1, e2)
    else:
        w1 = w2 = True
    rows = _mutable(d)
    loops = list(d.free_loops)
    a_id = d.fresh_crossing_id()
    b_id = d.fresh_crossing_id([a_id])
    nxt = [d.fresh_edge()]

    def fresh():
        nxt[0] += 1
        return nxt[0] - 1

    member_map = {m: m for m in d.members}

    def pieces(e, walked_forward):
        """Labels of the walk-ordered pieces (s, m, t) and their directions."""
        if isinstance(e, str):
            loops.remove(e)
            st, m = fresh(), fresh()
            member_map[st] = member_map[m] = e
            return (st, m, st), True
        tail, head = d.slots[e]
        first, m, last = e, fresh(), fresh()
        member_map[m] = member_map[last] = e
        # the original label stays on the piece at the tail end
        _replace(rows, head, last)
        # with the walk reversed, the tail piece is the last one walked
        s, t = (first, last) if walked_forward else (last, first)
        return (s, m, t), walked_forward

    (s1, m1, t1), fw1 = pieces(e1, w1)
    (s2, m2, t2), fw2 = pieces(e2, w2)
    # walk-direction geometry: strand 1 meets a then b, strand 2 meets b then a
    # a: ccw [s1, m2, m1, t2]   b: ccw [t1, s2, m1, m2]
    ray_a = [(s1, 1, fw1), (m2, 2, fw2), (m1, 1, not fw1), (t2, 2, not fw2)]
    ray_b = [(t1, 1, not fw1), (s2, 2, fw2), (m1, 1, fw1), (m2, 2, not fw2)]
    under = 2 if over else 1
    ca = _crossing_from_rays(a_id, ray_a, under)
    cb = _crossing_from_rays(b_id, ray_b, under)
    rows.append([ca.id, list(ca.edges), ca.over_incoming])
    rows.append([cb.id, list(cb.edges), cb.over_incoming])
    new = _freeze(rows, loops)
    return Rewrite(new, local=(a_id, b_id), member_map=member_map, info={"bigon": (m1, m2)})


def bigon_edges(d: OrientedDiagram, c1: str, c2: str, via=None):
    """The two edges of a removable bigon between ``c1`` and ``c2``; ``via``
    picks the bigon containing that edge when there are two."""
    i1, i2 = d.crossing_index[c1], d.crossing_index[c2]
    for face in d.faces():
        if len(face) != 2:
            continue
        es = [e for e, _ in face]
        if via is not None and via not in es:
            continue
        ends = [{d.slots[e][0][0], d.slots[e][1][0]} for e in es]
        if all(x == {i1, i2} for x in ends):
            # one strand over at both crossings
            x1, x2 = d.crossings[i1], d.crossings[i2]
            over1 = {x1.edges[1], x1.edges[3]}
            over2 = {x2.edges[1], x2.edges[3]}
            for e in es:
                if (e in over1) == (e in over2):
                    return tuple(es)
    return None


def r2_remove(d: OrientedDiagram, c1: str, c2: str, via=None) -> Rewrite:
    for c in (c1, c2):
        if c not in d.crossing_index:
            raise PatternMismatch(f"no crossing {c!r}")
    bigon = bigon_edges(d, c1, c2, via) if c1 != c2 else None
    if bigon is None:
        raise PatternMismatch(f"crossings {c1}, {c2} do not bound a removable bigon")
    new, member_map = straighten(d, {c1, c2})
    return Rewrite(new, local=(c1, c2), member_map=member_map, info={"bigon": bigon})


# ---------------------------------------------------------------------------
# Reidemeister 3

@dataclass(frozen=True)
class Triangle:
    """Roles in a triangle face: strands T (over at both of its crossings),
    M and B (under at both); crossings X_TM, X_TB, X_MB; triangle edges."""

    x: dict  # frozenset({'T','M'}) -> crossing id, etc.
    t: dict  # strand -> triangle edge
    chirality: int  # +1 if T, M, B appear counterclockwise around the face


def _strand_edges(c: Crossing):
    return (c.edges[0], c.edges[2]), (c.edges[1], c.edges[3])


def find_triangle(d: OrientedDiagram, ids) -> Triangle:
    ids = list(ids)
    if len(set(ids)) != 3 or any(c not in d.crossing_index for c in ids):
        raise PatternMismatch(f"R3 needs three distinct crossings, got {ids}")
    idx = {d.crossing_index[c] for c in ids}
    for face in d.faces():
        if len(face) != 3:
            continue
        es = [e for e, _ in face]
        if {d.slots[e][0][0] for e in es} | {d.slots[e][1][0] for e in es} != idx:
            continue
        if any(d.slots[e][0][0] == d.slots[e][1][0] for e in es):
            continue
        # for each triangle edge decide over/under at its two ends
        heights = {}
        for e in es:
            hs = []
            for ci, pos in d.slots[e]:
                hs.append(pos % 2 == 1)
            heights[e] = hs
        top = [e for e in es if all(heights[e])]
        bottom = [e for e in es if not any(heights[e])]
        middle = [e for e in es if e not in top and e not in bottom]
        if len(top) != 1 or len(bottom) != 1 or len(middle) != 1:
            raise PatternMismatch(f"crossings {ids} do not form an R3 configuration (strand heights)")
        t = {"T": top[0], "M": middle[0], "B": bottom[0]}
        ends = {s: {d.slots[e][0][0], d.slots[e][1][0]} for s, e in t.items()}
        x = {}
        for pair in (("T", "M"), ("T", "B"), ("M", "B")):
            third = ({"T", "M", "B"} - set(pair)).pop()
            ci = (idx - ends[third]).pop()
            x[frozenset(pair)] = d.crossings[ci].id
        order = [next(s for s, e in t.items() if e == fe) for fe, _ in face]
        k = order.index("T")
        chir = 1 if order[(k + 1) % 3] == "M" else -1
        return Triangle(x, t, chir)
    raise PatternMismatch(f"crossings {ids} do not bound a triangular face")


def outer_edge(d: OrientedDiagram, tri: Triangle, s: str, u: str):
    """Edge of strand ``s`` leaving the triangle at the crossing with ``u``."""
    c = d.crossing(tri.x[frozenset((s, u))])
    te = tri.t[s]
    for p in range(4):
        if c.edges[p] == te and c.edges[(p + 2) % 4] != te:
            return c.edges[(p + 2) % 4]
    raise PatternMismatch(f"strand {s} does not pass crossing {c.id}")


def r3(d: OrientedDiagram, ids) -> Rewrite:
    """Slide one strand across the crossing of the other two.

    Along every strand the order of its two triangle crossings reverses; the
    crossing of strands i and j keeps its identifier, list position, heights
    and ray directions, while its triangle rays now carry the outer edges of
    the far crossings and its outer rays carry fresh triangle edges.
    """
    tri = find_triangle(d, ids)
    strands = ("T", "M", "B")
    t_new = {}
    base = d.fresh_edge()
    for k, s in enumerate(strands):
        t_new[s] = base + k
    # outer edge of strand s at crossing X_{s,u}
    outer = {}
    for s in strands:
        for u in strands:
            if u == s:
                continue
            c = d.crossing(tri.x[frozenset((s, u))])
            te = tri.t[s]
            # strand s occupies the positions opposite each other carrying te
            for p in range(4):
                if c.edges[p] == te and c.edges[(p + 2) % 4] != te:
                    outer[(s, u)] = (p + 2) % 4
                    break
    rows = _mutable(d)
    for s in strands:
        for u in strands:
            if u == s:
                continue
            ci = d.crossing_index[tri.x[frozenset((s, u))]]
            c = d.crossings[ci]
            p_out = outer[(s, u)]
            p_tri = (p_out + 2) % 4
            # the far crossing of strand s is X_{s,v}, v the third strand
            v = ({"T", "M", "B"} - {s, u}).pop()
            far = d.crossing(tri.x[frozenset((s, v))])
            rows[ci][1][p_tri] = far.edges[outer[(s, v)]]
            rows[ci][1][p_out] = t_new[s]
    new = _freeze(rows, d.free_loops)
    member_map = {m: m for m in d.members if m not in set(tri.t.values())}
    return Rewrite(new, local=(tri.x[frozenset("TM")], tri.x[frozenset("TB")], tri.x[frozenset("MB")]),
                   member_map=member_map, info={"triangle": tri, "new_t": t_new})


# ---------------------------------------------------------------------------
def isotopy(d: OrientedDiagram, crossing_map: dict, edge_map: dict, loop_map: dict | None = None) -> Rewrite:
    from .diagram import is_isomorphism

    loop_map = dict(loop_map or {})
    cmap = {c.id: crossing_map.get(c.id, c.id) for c in d.crossings}
    emap = {e: edge_map.get(e, e) for e in d.edges}
    lmap = {x: loop_map.get(x, x) for x in d.free_loops}
    if len(set(cmap.values())) != len(cmap) or len(set(emap.values())) != len(emap) or \
            len(set(lmap.values())) != len(lmap):
        from .errors import NotAnIsomorphism
        raise NotAnIsomorphism("relabeling is not injective")
    new = d.relabel(cmap, emap, lmap)
    check_diagram(new)
    return Rewrite(new, info={"cmap": cmap, "emap": emap, "lmap": lmap})
