"""Command-line entry point ``kh``.

Exit codes: 0 success, 1 domain error (bad diagram, move mismatch, failed
check), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .complex import complex_of, graded_euler_characteristic
from .diagram import OrientedDiagram
from .errors import KhError
from .homology import homology_of_complex
from .movie import FIXTURES

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


def _load_diagram(path: str) -> OrientedDiagram:
    p = Path(path)
    if not p.is_file():
        for cand in (FIXTURES / p.name, FIXTURES / f"{p.name}.json", FIXTURES / f"{p.stem}.json"):
            if cand.is_file():
                p = cand
                break
    return OrientedDiagram.load(p)


def _groups(d: OrientedDiagram, j=None):
    cx = complex_of(d)
    out = []
    for i, jj in sorted(cx.gradings(), key=lambda g: (g[1], g[0])):
        if j is None or jj == j:
            out.append((i, jj, homology_of_complex(cx, i, jj)))
    return out


def cmd_homology(args) -> int:
    d = _load_diagram(args.diagram)
    rows = _groups(d, args.j)
    if args.json:
        payload = [{"i": i, "j": j, **h.to_json()} for i, j, h in rows]
        print(json.dumps(payload, indent=2))
    else:
        for i, j, h in rows:
            print(f"H^{{{i},{j}}}={h}")
    return EXIT_OK


def cmd_complex(args) -> int:
    d = _load_diagram(args.diagram)
    cx = complex_of(d)
    basis = cx.basis(args.i, args.j)
    dm = cx.differential(args.i, args.j)
    if args.json:
        print(json.dumps({
            "i": args.i, "j": args.j, "rank": len(basis),
            "basis": [cx.describe_state(s) for s in basis],
            "differential": dm.to_dense(),
        }, indent=2))
        return EXIT_OK
    print(f"C^{{{args.i},{args.j}}} rank {len(basis)}")
    for k, s in enumerate(basis):
        print(f"  [{k}] {cx.describe_state(s)}")
    print(f"d: C^{{{args.i},{args.j}}} -> C^{{{args.i + 1},{args.j}}}")
    for row in dm.to_dense():
        print("  " + " ".join(f"{v:3d}" for v in row))
    return EXIT_OK


def cmd_euler(args) -> int:
    print(graded_euler_characteristic(_load_diagram(args.diagram)))
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .verify import kauffman_oracle
    d = _load_diagram(args.diagram)
    v = kauffman_oracle(d)
    print(v)
    if args.check:
        chi = graded_euler_characteristic(d)
        if chi != v:
            print(f"mismatch: euler characteristic is {chi}", file=sys.stderr)
            return EXIT_DOMAIN
        print("agrees with the graded euler characteristic")
    return EXIT_OK


def _hom_lines(maps):
    for (i, j), hm in sorted(maps.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        rows = "; ".join(" ".join(str(v) for v in r) for r in hm.matrix) or "-"
        yield f"H^{{{i},{j}}}: {hm.source} -> {hm.target} : [{rows}]"


def cmd_movie(args) -> int:
    from .homology import equal_up_to_sign
    from .movie import evaluate_movie, load_movie
    m = load_movie(args.script)
    r = evaluate_movie(m)
    f = r.chain_map
    closed = not r.source.crossings and not r.source.free_loops and not r.target.crossings \
        and not r.target.free_loops
    if closed:
        block = f.block(0, 0)
        k = block[0, 0] if block.shape == (1, 1) else 0
        print(f"map Z -> Z : *{k}, chi = {r.chi}")
    else:
        print(f"movie: {len(m.steps)} moves, {r.source.n} -> {r.target.n} crossings, "
              f"bidegree (0,{f.dj}), chi = {r.chi}")
    if args.homology:
        for line in _hom_lines(f.on_homology()):
            print(line)
    if args.up_to_sign_compare:
        other = evaluate_movie(load_movie(args.up_to_sign_compare))
        if other.source != r.source or other.target != r.target:
            raise KhError("the two movies do not share source and target diagrams")
        print(f"compare: {equal_up_to_sign(f.on_homology(), other.chain_map.on_homology())}")
    return EXIT_OK


def cmd_lefschetz(args) -> int:
    from .lefschetz import lefschetz
    from .movie import load_movie
    res = lefschetz(load_movie(args.script), args.j)
    if args.json:
        print(json.dumps(res.to_json(), indent=2))
        return EXIT_OK
    if args.j is not None:
        print(f"L_{args.j} = {res.value(args.j)} (up to sign)")
    else:
        print(f"L(q) = {res.polynomial} (up to sign)")
    if not res.consistent:
        print("warning: chain-level and homology-level traces disagree", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import report_json, verify_all
    if args.all:
        config = {"include_move7": args.enable_move7 or None}
    else:
        config = {"groups": ["table"], "include_move7": args.enable_move7 or None}
        if args.move is not None:
            config["moves"] = [args.move]
        if args.variant:
            config["variants"] = [args.variant]
    if args.direction:
        config["directions"] = [args.direction]
    report = verify_all(config)
    print(report_json(report))
    return EXIT_OK if report["passed"] else EXIT_DOMAIN


def cmd_moves(args) -> int:
    from .moves import catalog
    from .verify import TABLE
    if not args.list:
        print("use: kh moves --list", file=sys.stderr)
        return EXIT_USAGE
    print("local moves:")
    for line in catalog():
        print(f"  {line}")
    print("movie moves (number: versions):")
    seen: dict[int, list[str]] = {}
    for n, v in TABLE:
        seen.setdefault(n, []).append(v)
    for n in sorted(seen):
        gate = " [gated]" if n == 7 else ""
        print(f"  {n}: {', '.join(seen[n])}{gate}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kh", description="Khovanov homology and link-cobordism maps")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("homology", help="homology groups of a diagram")
    s.add_argument("diagram")
    s.add_argument("--j", type=int)
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=cmd_homology)

    s = sub.add_parser("complex", help="one chain group and its differential")
    s.add_argument("diagram")
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=cmd_complex)

    s = sub.add_parser("euler", help="graded Euler characteristic")
    s.add_argument("diagram")
    s.set_defaults(fn=cmd_euler)

    s = sub.add_parser("oracle", help="Jones polynomial from the Kauffman bracket")
    s.add_argument("diagram")
    s.add_argument("--check", action="store_true", help="compare with the Euler characteristic")
    s.set_defaults(fn=cmd_oracle)

    s = sub.add_parser("movie", help="evaluate a movie script")
    s.add_argument("script")
    s.add_argument("--homology", action="store_true")
    s.add_argument("--up-to-sign-compare", metavar="SCRIPT")
    s.set_defaults(fn=cmd_movie)

    s = sub.add_parser("lefschetz", help="Lefschetz numbers of an endo-movie")
    s.add_argument("script")
    s.add_argument("--j", type=int)
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=cmd_lefschetz)

    s = sub.add_parser("verify", help="movie-move harness and self checks (JSON report)")
    s.add_argument("--move", type=int, choices=range(1, 16), metavar="N")
    s.add_argument("--variant")
    s.add_argument("--direction", choices=("up", "down"))
    s.add_argument("--all", action="store_true")
    s.add_argument("--enable-move7", action="store_true")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("moves", help="supported local moves")
    s.add_argument("--list", action="store_true")
    s.set_defaults(fn=cmd_moves)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.fn(args)
    except KhError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
