"""Movie scripts: a diagram followed by a sequence of local moves.

Grammar (one statement per line, ``#`` starts a comment)::

    movie v1
    diagram <path>
    move birth <loop> | death <loop> | saddle <e> <e>
    move r1 add pos|neg <edge> left|right | r1 remove <c>
    move r2 add <edge> over|under <edge> | r2 remove <c> <c> [via <edge>]
    move r3 <c> <c> <c> [variant] | r3bar <c> <c> <c>
    move isotopy { cX->cY, ... ; eA->eB, ... }
    end

Diagram paths are resolved against the script's directory, then against the
bundled fixtures.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .diagram import OrientedDiagram
from .errors import DiagramError, KhError, MovieSyntaxError, PatternMismatch
from .moves import ChainMap, LocalMove, MoveKind, apply_move, move

FIXTURES = Path(__file__).parent / "fixtures"

_TOKEN = re.compile(r"->|[{};,]|(?:(?!->)[^\s{};,])+")


@dataclass(frozen=True)
class MovieStep:
    move: LocalMove
    line: int = 0


@dataclass
class Movie:
    source: OrientedDiagram
    steps: list[MovieStep] = field(default_factory=list)
    diagram_path: str | None = None

    @property
    def moves(self) -> list[LocalMove]:
        return [s.move for s in self.steps]

    def euler_characteristic(self) -> int:
        births = sum(1 for m in self.moves if m.kind in (MoveKind.BIRTH, MoveKind.DEATH))
        saddles = sum(1 for m in self.moves if m.kind is MoveKind.SADDLE)
        return births - saddles

    def then(self, other: "Movie") -> "Movie":
        """Play ``self`` and then ``other``."""
        end = evaluate_movie(self).target
        if end != other.source:
            raise DiagramError("the second movie does not start where the first one ends")
        return Movie(self.source, self.steps + other.steps, self.diagram_path)

    def to_script(self) -> str:
        lines = ["movie v1", f"diagram {self.diagram_path or '<inline>'}"]
        lines += [f"move {format_move(m)}" for m in self.moves]
        lines.append("end")
        return "\n".join(lines) + "\n"


def concatenate(*movies: Movie) -> Movie:
    out = movies[0]
    for m in movies[1:]:
        out = out.then(m)
    return out


@dataclass
class MovieResult:
    movie: Movie
    stills: list[OrientedDiagram]
    maps: list[ChainMap]

    @property
    def source(self) -> OrientedDiagram:
        return self.stills[0]

    @property
    def target(self) -> OrientedDiagram:
        return self.stills[-1]

    @property
    def chi(self) -> int:
        return self.movie.euler_characteristic()

    @property
    def chain_map(self) -> ChainMap:
        cached = self.__dict__.get("_composite")
        if cached is None:
            cached = ChainMap.identity(self.source)
            for f in self.maps:
                cached = f @ cached
            self.__dict__["_composite"] = cached
        return cached

    def on_homology(self):
        return self.chain_map.on_homology()


def evaluate_movie(movie: Movie) -> MovieResult:
    """Apply every move in turn; a failing move reports the still it acted on."""
    cached = movie.__dict__.get("_result")
    if cached is not None:
        return cached
    stills = [movie.source]
    maps = []
    for k, step in enumerate(movie.steps):
        try:
            new, f = apply_move(stills[-1], step.move)
        except PatternMismatch as exc:
            if exc.still is None:
                exc.still = k
            raise
        stills.append(new)
        maps.append(f)
    result = MovieResult(movie, stills, maps)
    movie.__dict__["_result"] = result
    return result


# ---------------------------------------------------------------------------
# parsing

def _member(tok: str, line: int, col: int):
    if re.fullmatch(r"-?\d+", tok):
        return int(tok)
    if re.fullmatch(r"[A-Za-z_][\w.]*", tok):
        return tok
    raise MovieSyntaxError(f"bad identifier {tok!r}", line, col)


def _edge(tok: str, line: int, col: int) -> int:
    m = re.fullmatch(r"e?(-?\d+)", tok)
    if not m:
        raise MovieSyntaxError(f"expected an edge number, got {tok!r}", line, col)
    return int(m.group(1))


def _ident(tok: str, line: int, col: int) -> str:
    if not re.fullmatch(r"[A-Za-z_][\w.]*", tok):
        raise MovieSyntaxError(f"expected an identifier, got {tok!r}", line, col)
    return tok


def _tokens(text: str):
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(text)]


def _parse_isotopy(toks, line):
    if not toks or toks[0][0] != "{":
        col = toks[0][1] if toks else 1
        raise MovieSyntaxError("isotopy needs a { ... } block", line, col)
    if toks[-1][0] != "}":
        raise MovieSyntaxError("unterminated isotopy block", line, toks[-1][1])
    body = toks[1:-1]
    sections: list[list] = [[]]
    for tok in body:
        if tok[0] == ";":
            sections.append([])
        else:
            sections[-1].append(tok)
    if len(sections) > 2:
        raise MovieSyntaxError("isotopy takes at most two sections", line, body[0][1])
    ids, edges = {}, {}
    for sec_no, sec in enumerate(sections):
        k = 0
        while k < len(sec):
            if sec[k][0] == ",":
                k += 1
                continue
            if k + 2 >= len(sec) or sec[k + 1][0] != "->":
                raise MovieSyntaxError("expected a mapping a->b", line, sec[k][1])
            (a, ca), (b, cb) = sec[k], sec[k + 2]
            if sec_no == 0:
                ids[_ident(a, line, ca)] = _ident(b, line, cb)
            else:
                edges[_edge(a, line, ca)] = _edge(b, line, cb)
            k += 3
    return ids, edges


def parse_move(toks, line: int) -> LocalMove:
    """Parse the tokens after ``move``."""
    if not toks:
        raise MovieSyntaxError("missing move kind", line, 1)
    kind, col = toks[0]
    words = [t for t, _ in toks[1:]]
    cols = [c for _, c in toks[1:]]

    def need(n):
        if len(words) != n:
            at = cols[n] if len(words) > n else (cols[-1] if cols else col)
            raise MovieSyntaxError(f"{kind} takes {n} arguments, got {len(words)}", line, at)

    if kind == "birth":
        need(1)
        return move("Birth", _ident(words[0], line, cols[0]))
    if kind == "death":
        need(1)
        return move("Death", _ident(words[0], line, cols[0]))
    if kind == "saddle":
        need(2)
        return move("Saddle", _member(words[0], line, cols[0]), _member(words[1], line, cols[1]))
    if kind in ("r1", "r2"):
        if not words or words[0] not in ("add", "remove"):
            raise MovieSyntaxError(f"{kind} expects add or remove", line, cols[0] if cols else col)
        words, cols = words[1:], cols[1:]
        if kind == "r1" and toks[1][0] == "add":
            need(3)
            if words[0] not in ("pos", "neg"):
                raise MovieSyntaxError("kink sign must be pos or neg", line, cols[0])
            if words[2] not in ("left", "right"):
                raise MovieSyntaxError("kink side must be left or right", line, cols[2])
            kname = "R1AddPos" if words[0] == "pos" else "R1AddNeg"
            return move(kname, _member(words[1], line, cols[1]), side=words[2])
        if kind == "r1":
            need(1)
            return move("R1Remove", _ident(words[0], line, cols[0]))
        if toks[1][0] == "add":
            need(3)
            if words[1] not in ("over", "under"):
                raise MovieSyntaxError("expected over or under", line, cols[1])
            return move("R2Add", _member(words[0], line, cols[0]), _member(words[2], line, cols[2]),
                        over=words[1] == "over")
        if len(words) == 4 and words[2] == "via":
            return move("R2Remove", _ident(words[0], line, cols[0]), _ident(words[1], line, cols[1]),
                        via=_edge(words[3], line, cols[3]))
        need(2)
        return move("R2Remove", _ident(words[0], line, cols[0]), _ident(words[1], line, cols[1]))
    if kind == "r3":
        if len(words) not in (3, 4):
            raise MovieSyntaxError("r3 takes three crossings and an optional variant", line,
                                   cols[-1] if cols else col)
        ids = [_ident(w, line, c) for w, c in zip(words[:3], cols[:3])]
        if len(words) == 4:
            return move("R3", *ids, variant=words[3])
        return move("R3", *ids)
    if kind == "r3bar":
        need(3)
        return move("R3Bar", *[_ident(w, line, c) for w, c in zip(words, cols)])
    if kind == "isotopy":
        ids, edges = _parse_isotopy(toks[1:], line)
        return move("Isotopy", crossings=tuple(sorted(ids.items())), edges=tuple(sorted(edges.items())))
    raise MovieSyntaxError(f"unknown move kind {kind!r}", line, col)


def format_move(m: LocalMove) -> str:
    k, s, o = m.kind, m.site, m.opts
    if k is MoveKind.BIRTH:
        return f"birth {s[0]}"
    if k is MoveKind.DEATH:
        return f"death {s[0]}"
    if k is MoveKind.SADDLE:
        return f"saddle {s[0]} {s[1]}"
    if k in (MoveKind.R1_ADD_POS, MoveKind.R1_ADD_NEG):
        sign = "pos" if k is MoveKind.R1_ADD_POS else "neg"
        return f"r1 add {sign} {s[0]} {o.get('side', 'left')}"
    if k is MoveKind.R1_REMOVE:
        return f"r1 remove {s[0]}"
    if k is MoveKind.R2_ADD:
        return f"r2 add {s[0]} {'over' if o.get('over', True) else 'under'} {s[1]}"
    if k is MoveKind.R2_REMOVE:
        via = f" via e{o['via']}" if "via" in o else ""
        return f"r2 remove {s[0]} {s[1]}{via}"
    if k is MoveKind.R3:
        extra = f" {o['variant']}" if "variant" in o else ""
        return f"r3 {' '.join(s)}{extra}"
    if k is MoveKind.R3_BAR:
        return f"r3bar {' '.join(s)}"
    ids = ", ".join(f"{a}->{b}" for a, b in o.get("crossings", ()))
    edges = ", ".join(f"e{a}->e{b}" for a, b in o.get("edges", ()))
    return f"isotopy {{ {ids} ; {edges} }}"


def resolve_diagram_path(name: str, base: Path | None) -> Path:
    candidates = []
    if base is not None:
        candidates.append(base / name)
    candidates += [Path(name), FIXTURES / name, FIXTURES / f"{name}.json"]
    for c in candidates:
        if c.is_file():
            return c
    raise DiagramError(f"diagram file {name!r} not found")


def parse_movie(text: str, base_dir=None) -> Movie:
    base = Path(base_dir) if base_dir is not None else None
    state = "header"
    source = None
    path = None
    steps = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        head, col = toks[0]
        if state == "done":
            raise MovieSyntaxError("text after end", line_no, col)
        if state == "header":
            if [t for t, _ in toks] != ["movie", "v1"]:
                raise MovieSyntaxError("scripts must start with 'movie v1'", line_no, col)
            state = "diagram"
        elif state == "diagram":
            if head != "diagram" or len(toks) != 2:
                raise MovieSyntaxError("expected 'diagram <path>'", line_no, col)
            path = toks[1][0]
            try:
                source = OrientedDiagram.load(resolve_diagram_path(path, base))
            except KhError as exc:
                raise MovieSyntaxError(str(exc), line_no, toks[1][1]) from exc
            state = "moves"
        elif head == "end":
            if len(toks) != 1:
                raise MovieSyntaxError("'end' takes no arguments", line_no, toks[1][1])
            state = "done"
        elif head == "move":
            steps.append(MovieStep(parse_move(toks[1:], line_no), line_no))
        else:
            raise MovieSyntaxError(f"expected 'move' or 'end', got {head!r}", line_no, col)
    if state != "done":
        last = len(text.splitlines()) + 1
        raise MovieSyntaxError("missing 'end'" if state == "moves" else "incomplete header", last, 1)
    return Movie(source, steps, path)


def load_movie(path) -> Movie:
    path = Path(path)
    if not path.is_file() and (FIXTURES / "movies" / path.name).is_file():
        path = FIXTURES / "movies" / path.name
    with open(path) as fh:
        return parse_movie(fh.read(), base_dir=path.parent)
