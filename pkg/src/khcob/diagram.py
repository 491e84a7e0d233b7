"""Oriented link diagrams in a planar-diagram (PD) encoding.

Each crossing lists its four edges counterclockwise, starting from the
incoming under-strand. Positions 1 and 3 (1-based) therefore carry the under
strand; ``over_incoming`` says which of positions 2/4 carries the incoming
over-strand, and fixes the crossing sign: 4 -> +1, 2 -> -1.

A positive marker is the smoothing that joins positions (1,2) and (3,4);
a negative marker joins (1,4) and (2,3).

Free loops are crossingless circles; they live in their own identifier
namespace and behave as single-member circles in every resolution.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping

from . import kernels
from .errors import BadCrossing, DiagramError, DuplicateEdgeUse, SignMismatch

_CROSSING_FIELDS = {"id", "edges", "over_incoming", "sign"}
_DIAGRAM_FIELDS = {"crossings", "free_loops"}


class InconsistentOrientation(DiagramError):
    pass


@dataclass(frozen=True)
class Crossing:
    id: str
    edges: tuple[int, int, int, int]
    over_incoming: int

    @property
    def sign(self) -> int:
        return 1 if self.over_incoming == 4 else -1

    def incoming_positions(self) -> tuple[int, int]:
        return 0, self.over_incoming - 1

    def outgoing_positions(self) -> tuple[int, int]:
        return 2, (self.over_incoming + 1) % 4

    def over_positions(self) -> tuple[int, int]:
        return 1, 3

    def to_dict(self) -> dict:
        return {"id": self.id, "edges": list(self.edges), "over_incoming": self.over_incoming, "sign": self.sign}


Member = "int | str"  # an edge (int) or a free loop (str)


@dataclass(frozen=True)
class Resolution:
    circles: tuple[frozenset, ...]
    labels: Mapping
    incidence: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    @property
    def r(self) -> int:
        return len(self.circles)

    def circle_of(self, member) -> int:
        return self.labels[member]


@dataclass(frozen=True)
class OrientedDiagram:
    crossings: tuple[Crossing, ...] = ()
    free_loops: tuple[str, ...] = ()

    # ---- construction ---------------------------------------------------
    @classmethod
    def from_dict(cls, raw: Mapping) -> "OrientedDiagram":
        return validate_diagram(raw)

    @classmethod
    def from_json(cls, text: str) -> "OrientedDiagram":
        return validate_diagram(json.loads(text))

    @classmethod
    def load(cls, path) -> "OrientedDiagram":
        with open(path) as fh:
            return cls.from_json(fh.read())

    def to_dict(self) -> dict:
        return {"crossings": [c.to_dict() for c in self.crossings], "free_loops": list(self.free_loops)}

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    # ---- basic derived data ------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.crossings)

    @cached_property
    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings)

    @cached_property
    def n_negative(self) -> int:
        return sum(1 for c in self.crossings if c.sign < 0)

    @cached_property
    def crossing_index(self) -> dict[str, int]:
        return {c.id: k for k, c in enumerate(self.crossings)}

    @cached_property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted({e for c in self.crossings for e in c.edges}))

    @cached_property
    def members(self) -> tuple:
        """Edges (sorted) followed by free loops (in declaration order)."""
        return self.edges + tuple(self.free_loops)

    @cached_property
    def member_index(self) -> dict:
        return {m: k for k, m in enumerate(self.members)}

    @cached_property
    def smoothing_pairs(self) -> tuple[tuple, tuple]:
        """Member-index pairs joined by positive and by negative markers."""
        idx = self.member_index
        a_pairs, b_pairs = [], []
        for c in self.crossings:
            e = [idx[x] for x in c.edges]
            a_pairs.append(((e[0], e[1]), (e[2], e[3])))
            b_pairs.append(((e[0], e[3]), (e[1], e[2])))
        return tuple(a_pairs), tuple(b_pairs)

    @cached_property
    def slots(self) -> dict[int, tuple[tuple[int, int], tuple[int, int]]]:
        """edge -> (tail slot, head slot); a slot is (crossing index, position)."""
        tails: dict[int, tuple[int, int]] = {}
        heads: dict[int, tuple[int, int]] = {}
        for ci, c in enumerate(self.crossings):
            for pos in c.outgoing_positions():
                tails[c.edges[pos]] = (ci, pos)
            for pos in c.incoming_positions():
                heads[c.edges[pos]] = (ci, pos)
        return {e: (tails[e], heads[e]) for e in self.edges}

    def other_slot(self, slot: tuple[int, int]) -> tuple[int, int]:
        ci, pos = slot
        e = self.crossings[ci].edges[pos]
        tail, head = self.slots[e]
        return head if slot == tail else tail

    # ---- naming -----------------------------------------------------------
    def fresh_edge(self, used=()) -> int:
        return max([0, *self.edges, *used]) + 1

    def fresh_crossing_id(self, used=()) -> str:
        return "c" + str(_max_suffix([c.id for c in self.crossings] + list(used)) + 1)

    def fresh_loop_id(self, used=()) -> str:
        return "l" + str(_max_suffix(list(self.free_loops) + list(used)) + 1)

    def crossing(self, cid: str) -> Crossing:
        try:
            return self.crossings[self.crossing_index[cid]]
        except KeyError:
            raise KeyError(f"no crossing {cid!r}") from None

    # ---- topology ---------------------------------------------------------
    def resolve_mask(self, mask: int) -> tuple[tuple[int, ...], int]:
        a_pairs, b_pairs = self.smoothing_pairs
        return kernels.resolve_mask(len(self.members), a_pairs, b_pairs, mask)

    @cached_property
    def all_resolutions(self) -> list[tuple[tuple[int, ...], int]]:
        a_pairs, b_pairs = self.smoothing_pairs
        return kernels.all_resolutions(len(self.members), a_pairs, b_pairs)

    def faces(self) -> list[tuple[tuple[int, bool], ...]]:
        """Faces of the projection (free loops ignored).

        Each face is the cyclic sequence of ``(edge, forward)`` met while
        walking its boundary with the face on the left; ``forward`` tells
        whether the walk agrees with the edge orientation.
        """
        seen = set()
        faces = []
        for ci, c in enumerate(self.crossings):
            for pos in range(4):
                start = (ci, pos)
                if start in seen:
                    continue
                face = []
                slot = start
                while slot not in seen:
                    seen.add(slot)
                    e = self.crossings[slot[0]].edges[slot[1]]
                    tail, _ = self.slots[e]
                    face.append((e, slot == tail))
                    cj, pj = self.other_slot(slot)
                    slot = (cj, (pj - 1) % 4)
                faces.append(tuple(face))
        return faces

    def components(self) -> list[tuple]:
        """Link components as edge cycles in orientation order; free loops as 1-tuples."""
        comps = []
        seen = set()
        for e0 in self.edges:
            if e0 in seen:
                continue
            comp = []
            e = e0
            while e not in seen:
                seen.add(e)
                comp.append(e)
                ci, pos = self.slots[e][1]
                e = self.crossings[ci].edges[(pos + 2) % 4]
            comps.append(tuple(comp))
        comps.extend((loop,) for loop in self.free_loops)
        return comps

    def relabel(self, crossing_map: Mapping[str, str], edge_map: Mapping[int, int],
                loop_map: Mapping[str, str] | None = None) -> "OrientedDiagram":
        """Apply a bijective relabeling. Crossing order follows the preimages,
        except that a relabeling onto the same id set keeps the source order."""
        loop_map = loop_map or {}
        new = [Crossing(crossing_map.get(c.id, c.id), tuple(edge_map.get(e, e) for e in c.edges), c.over_incoming)
               for c in self.crossings]
        old_pos = self.crossing_index
        if {c.id for c in new} == set(old_pos):
            new.sort(key=lambda c: old_pos[c.id])
        loops = [loop_map.get(x, x) for x in self.free_loops]
        if set(loops) == set(self.free_loops):
            loops = list(self.free_loops)
        return OrientedDiagram(tuple(new), tuple(loops))

    def __str__(self):
        return self.to_json()


def _max_suffix(ids) -> int:
    best = 0
    for x in ids:
        m = re.search(r"(\d+)$", str(x))
        if m:
            best = max(best, int(m.group(1)))
    return best


# ---------------------------------------------------------------------------
def validate_diagram(raw) -> OrientedDiagram:
    """Parse and check a raw diagram description (the JSON object form)."""
    if isinstance(raw, OrientedDiagram):
        raw = raw.to_dict()
    if not isinstance(raw, Mapping):
        raise DiagramError("diagram must be a JSON object")
    unknown = set(raw) - _DIAGRAM_FIELDS
    if unknown:
        raise DiagramError(f"unknown diagram fields: {sorted(unknown)}")
    crossings = []
    for rc in raw.get("crossings", []):
        if not isinstance(rc, Mapping):
            raise BadCrossing("crossing must be an object")
        unknown = set(rc) - _CROSSING_FIELDS
        if unknown:
            raise BadCrossing(f"unknown crossing fields: {sorted(unknown)}")
        cid = rc.get("id")
        if not isinstance(cid, str):
            raise BadCrossing(f"crossing id must be a string, got {cid!r}")
        edges = rc.get("edges")
        if not isinstance(edges, (list, tuple)) or len(edges) != 4:
            raise BadCrossing(f"crossing {cid} must list exactly 4 edges")
        if not all(isinstance(e, int) and not isinstance(e, bool) for e in edges):
            raise BadCrossing(f"crossing {cid}: edge identifiers must be integers")
        over = rc.get("over_incoming")
        if over not in (2, 4):
            raise BadCrossing(f"crossing {cid}: over_incoming must be 2 or 4")
        c = Crossing(cid, tuple(edges), over)
        if "sign" in rc and rc["sign"] != c.sign:
            raise SignMismatch(f"crossing {cid}: declared sign {rc['sign']} but over_incoming={over} gives {c.sign}")
        crossings.append(c)
    loops = raw.get("free_loops", [])
    if not all(isinstance(x, str) for x in loops):
        raise DiagramError("free loop identifiers must be strings")
    return check_diagram(OrientedDiagram(tuple(crossings), tuple(loops)))


def check_diagram(d: OrientedDiagram) -> OrientedDiagram:
    ids = [c.id for c in d.crossings]
    if len(set(ids)) != len(ids):
        raise DiagramError("duplicate crossing identifiers")
    if len(set(d.free_loops)) != len(d.free_loops):
        raise DiagramError("duplicate free loop identifiers")
    if set(ids) & set(d.free_loops):
        raise DiagramError("crossing and loop identifiers overlap")
    count: dict[int, int] = {}
    incoming: dict[int, int] = {}
    for c in d.crossings:
        for e in c.edges:
            count[e] = count.get(e, 0) + 1
        for pos in c.incoming_positions():
            incoming[c.edges[pos]] = incoming.get(c.edges[pos], 0) + 1
    for e, k in sorted(count.items()):
        if k != 2:
            raise DuplicateEdgeUse(f"edge {e} occurs {k} times (expected 2)")
        if incoming.get(e, 0) != 1:
            raise InconsistentOrientation(f"edge {e} must enter exactly one crossing and leave exactly one")
    return d


def writhe(d: OrientedDiagram) -> int:
    return d.writhe


def _marker_mask(d: OrientedDiagram, markers: Mapping) -> int:
    mask = 0
    for cid, m in markers.items():
        if m in ("-", -1):
            mask |= 1 << d.crossing_index[cid]
        elif m not in ("+", 1):
            raise ValueError(f"marker must be '+' or '-', got {m!r}")
    missing = set(d.crossing_index) - set(markers)
    if missing:
        raise ValueError(f"markers missing for crossings {sorted(missing)}")
    return mask


def resolution_from_mask(d: OrientedDiagram, mask: int) -> Resolution:
    labels, r = d.resolve_mask(mask)
    members = d.members
    circles = [set() for _ in range(r)]
    for m, lab in zip(members, labels):
        circles[lab].add(m)
    label_map = dict(zip(members, labels))
    incidence = {c.id: tuple(sorted({label_map[e] for e in c.edges})) for c in d.crossings}
    return Resolution(tuple(frozenset(s) for s in circles), label_map, incidence)


def resolve(d: OrientedDiagram, markers: Mapping) -> Resolution:
    """Circles of the resolution of ``d`` under a total marker map."""
    return resolution_from_mask(d, _marker_mask(d, markers))


# ---------------------------------------------------------------------------
def find_isomorphisms(d1: OrientedDiagram, d2: OrientedDiagram, fixed_crossings: Mapping[str, str] | None = None,
                      ) -> Iterator[tuple[dict, dict, dict]]:
    """All PD isomorphisms ``d1 -> d2`` as (crossing, edge, loop) maps.

    ``fixed_crossings`` pins some crossing images. Free loops are matched in
    every possible way only when their number is small; otherwise in order.
    """
    from itertools import permutations

    fixed_crossings = dict(fixed_crossings or {})
    if d1.n != d2.n or len(d1.free_loops) != len(d2.free_loops) or len(d1.edges) != len(d2.edges):
        return
    pieces = _connected_pieces(d1)

    def extend(k, cmap, emap):
        if k == len(pieces):
            yield dict(cmap), dict(emap)
            return
        root = pieces[k][0]
        candidates = [fixed_crossings[root]] if root in fixed_crossings else [c.id for c in d2.crossings]
        for target in candidates:
            if target in cmap.values():
                continue
            trial_c, trial_e = dict(cmap), dict(emap)
            if _propagate(d1, d2, root, target, trial_c, trial_e, fixed_crossings):
                yield from extend(k + 1, trial_c, trial_e)

    loops1, loops2 = list(d1.free_loops), list(d2.free_loops)
    if len(loops1) <= 6:
        loop_maps = [dict(zip(loops1, p)) for p in permutations(loops2)]
        same = [m for m in loop_maps if all(m[x] == x for x in loops1 if x in loops2)]
        loop_maps = same + [m for m in loop_maps if m not in same]
    else:
        loop_maps = [dict(zip(loops1, loops2))]
    for cmap, emap in extend(0, {}, {}):
        for lmap in loop_maps:
            yield cmap, emap, lmap


def _connected_pieces(d: OrientedDiagram) -> list[list[str]]:
    adj: dict[str, set[str]] = {c.id: set() for c in d.crossings}
    for e, (tail, head) in d.slots.items():
        a, b = d.crossings[tail[0]].id, d.crossings[head[0]].id
        adj[a].add(b)
        adj[b].add(a)
    seen, pieces = set(), []
    for c in d.crossings:
        if c.id in seen:
            continue
        stack, piece = [c.id], []
        seen.add(c.id)
        while stack:
            x = stack.pop()
            piece.append(x)
            for y in sorted(adj[x]):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        pieces.append(piece)
    return pieces


def _propagate(d1, d2, root, target, cmap, emap, fixed) -> bool:
    stack = [(root, target)]
    while stack:
        a, b = stack.pop()
        if a in cmap:
            if cmap[a] != b:
                return False
            continue
        if b in cmap.values() or (a in fixed and fixed[a] != b):
            return False
        ca, cb = d1.crossing(a), d2.crossing(b)
        if ca.over_incoming != cb.over_incoming:
            return False
        cmap[a] = b
        for pos in range(4):
            ea, eb = ca.edges[pos], cb.edges[pos]
            if ea in emap:
                if emap[ea] != eb:
                    return False
                continue
            if eb in emap.values():
                return False
            emap[ea] = eb
            for slot_a, slot_b in zip(d1.slots[ea], d2.slots[eb]):
                stack.append((d1.crossings[slot_a[0]].id, d2.crossings[slot_b[0]].id))
    return True


def is_isomorphism(d1: OrientedDiagram, d2: OrientedDiagram, cmap, emap, lmap=None) -> bool:
    lmap = lmap or {}
    try:
        image = d1.relabel(cmap, emap, lmap)
    except Exception:
        return False
    if {c.id for c in image.crossings} != {c.id for c in d2.crossings}:
        return False
    by_id = {c.id: c for c in d2.crossings}
    if any(by_id[c.id] != c for c in image.crossings):
        return False
    return sorted(image.free_loops) == sorted(d2.free_loops) and len(set(emap.values())) == len(emap)


def from_pd(code, free_loops=(), ids=None) -> OrientedDiagram:
    """Build a diagram from bare PD quadruples, inferring over-strand direction.

    Each under-strand fixes the direction of its two edges; over-strands are
    then oriented by propagating "each edge enters exactly once".
    """
    code = [tuple(x) for x in code]
    ids = list(ids) if ids is not None else [f"c{k + 1}" for k in range(len(code))]
    enters: dict[int, tuple[int, int]] = {}
    leaves: dict[int, tuple[int, int]] = {}
    over: list[int | None] = [None] * len(code)
    for ci, q in enumerate(code):
        enters.setdefault(q[0], (ci, 0))
        leaves.setdefault(q[2], (ci, 2))
    changed = True
    while changed:
        changed = False
        for ci, q in enumerate(code):
            if over[ci] is not None:
                continue
            for pos_in, pos_out in ((1, 3), (3, 1)):
                e_in, e_out = q[pos_in], q[pos_out]
                if (e_in in leaves and leaves[e_in] != (ci, pos_in)) or (
                        e_out in enters and enters[e_out] != (ci, pos_out)):
                    over[ci] = pos_in + 1
                    enters.setdefault(e_in, (ci, pos_in))
                    leaves.setdefault(e_out, (ci, pos_out))
                    changed = True
                    break
        if not changed:
            for ci in range(len(code)):
                if over[ci] is None:  # an over-only component: pick a direction
                    over[ci] = 4
                    enters.setdefault(code[ci][3], (ci, 3))
                    leaves.setdefault(code[ci][1], (ci, 1))
                    changed = True
                    break
    crossings = tuple(Crossing(cid, q, o) for cid, q, o in zip(ids, code, over))
    return check_diagram(OrientedDiagram(crossings, tuple(free_loops)))


def from_braid(word, strands: int) -> OrientedDiagram:
    """Closure of a braid word. Letter ``k`` (1-based) is a positive crossing
    between positions k and k+1, ``-k`` a negative one; strands run upward."""
    bottom = list(range(1, strands + 1))
    current = list(bottom)
    nxt = strands + 1
    quads = []
    for letter in word:
        k = abs(letter) - 1
        a, b = current[k], current[k + 1]
        c, d = nxt, nxt + 1
        nxt += 2
        # ccw from the bottom-left: a (SW), b (SE), d (NE), c (NW); a runs to d
        quads.append((b, d, c, a) if letter > 0 else (a, b, d, c))
        current[k], current[k + 1] = c, d
    rename = dict(zip(current, bottom))
    touched = {e for q in quads for e in q}
    loops = [f"l{p + 1}" for p in range(strands) if bottom[p] not in touched]
    quads = [tuple(rename.get(e, e) for e in q) for q in quads]
    used = sorted({e for q in quads for e in q})
    compact = {e: k + 1 for k, e in enumerate(used)}
    quads = [tuple(compact[e] for e in q) for q in quads]
    return from_pd(quads, free_loops=loops)
