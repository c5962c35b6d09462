"""Command-line interface: ``nlgames <subcommand> ...``.

Exit status is 0 on success, 1 when a computation or verification fails and
2 for usage errors.  JSON output is key-sorted, so a fixed ``--seed`` gives
byte-identical results.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import bounds, classical, generators, quantum, tsirelson, verification, xor_solver
from .config import Tolerances, override_tolerances
from .errors import NonlocalGameError, NotXorGame
from .game import dumps_game, read_game


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _flat_csv(doc) -> str:
    """One header row and one value row holding the scalar top-level fields."""
    keys = [k for k in sorted(doc) if not isinstance(doc[k], (dict, list, tuple))]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    w.writerow([doc[k] for k in keys])
    return buf.getvalue()


def _emit(args, doc=None, text=None):
    if text is None:
        doc = _jsonable(doc)
        if args.format == "csv":
            text = _flat_csv(doc)
        else:
            text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_json(path):
    from .game import ParseError

    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None


# -- subcommands ------------------------------------------------------------

GAMES = {
    "chsh": lambda a: (generators.chsh(), quantum.builtin_chsh()),
    "odd-cycle": lambda a: (generators.odd_cycle(a.n), quantum.builtin_odd_cycle(a.n)),
    "magic-square": lambda a: (generators.magic_square(), quantum.builtin_magic_square()),
    "kochen-specker": lambda a: _ks_game(a),
    "magic-formula": lambda a: (generators.three_sat(generators.magic_square_formula()),
                                quantum.builtin_threesat_magic()),
    "cycle-coloring": lambda a: (generators.graph_coloring(generators.Graph.cycle(a.n), a.colors), None),
    "hamming-coloring": lambda a: (generators.graph_coloring(generators.hamming_graph(a.n), a.colors), None),
}


def _ks_game(a):
    ks = generators.load_ks_set(a.vectors) if a.vectors else generators.shipped_ks_set()
    return generators.kochen_specker(ks), quantum.builtin_ks(ks)


def cmd_generate(args):
    game, strategy = GAMES[args.game](args)
    if args.strategy:
        if strategy is None:
            raise NonlocalGameError(f"no built-in quantum strategy for {args.game}")
        quantum.save_strategy(strategy, args.strategy)
    _emit(args, text=dumps_game(game) + "\n")


def cmd_classical(args):
    g = read_game(args.game)
    _emit(args, classical.classical_value(g, cap=args.cap).to_dict())


def _xor(g):
    if g.xor_form is None:
        raise NotXorGame("the game's predicate does not depend on a XOR b alone")
    return g.xor_form


def cmd_quantum(args):
    x = _xor(read_game(args.game))
    _emit(args, xor_solver.quantum_value_xor(x, restarts=args.restarts, seed=args.seed).to_dict())


def cmd_simulate(args):
    g = read_game(args.game)
    q = quantum.load_strategy(args.strategy_file)
    _emit(args, quantum.simulate(g, q).to_dict())


def _load_vectors(path):
    """Vector file, or any output document that carries one under "vectors"."""
    doc = _read_json(path)
    if isinstance(doc, dict) and "u" not in doc and isinstance(doc.get("vectors"), dict):
        doc = doc["vectors"]
    return xor_solver.VectorStrategy.from_dict(doc)


def _vectors_for(args, x):
    if args.vectors:
        return _load_vectors(args.vectors)
    return xor_solver.quantum_value_xor(x, restarts=args.restarts, seed=args.seed).vectors


def cmd_round(args):
    x = _xor(read_game(args.game))
    vs = _vectors_for(args, x)
    sample = bounds.sample_rounding(x, vs, seed=args.seed, samples=args.samples)
    _emit(args, {
        "expectation": bounds.rounding_expectation(x, vs),
        "empiricalMean": sample.mean, "standardError": sample.std_error, "samples": sample.samples,
        "bestValue": float(sample.value), "bestValueExact": sample.value if isinstance(sample.value, Fraction) else None,
        "strategy": {"a": list(sample.strategy.a), "b": list(sample.strategy.b)},
    })


def cmd_reduce(args):
    vs = _load_vectors(args.vectors_file)
    res = tsirelson.jl_reduce(vs, args.epsilon, seed=args.seed, allow_identity=not args.force_projection)
    _emit(args, {"vectors": res.vectors.to_dict(), "report": res.report()})


def cmd_lift(args):
    vs = _load_vectors(args.vectors_file)
    _emit(args, quantum.strategy_to_dict(tsirelson.vectors_to_strategy(vs)))


def cmd_check_bounds(args):
    rows = []
    for path in args.games:
        rows.append((path, bounds.check_bounds(read_game(path), restarts=args.restarts,
                                               seed=args.seed, cap=args.cap)))
    if args.format == "csv":
        _emit(args, text=bounds.report_csv(rows))
    elif len(rows) == 1:
        _emit(args, rows[0][1].to_dict())
    else:
        _emit(args, [dict(r.to_dict(), game=name) for name, r in rows])
    return 0 if all(r.passed for _, r in rows) else 1


def cmd_verify(args):
    results = verification.run_all()
    if args.format == "json":
        _emit(args, [{"number": r.number, "claim": r.claim, "passed": r.passed,
                      "seconds": round(r.seconds, 3), "details": r.details} for r in results])
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("number", "claim", "status"))
        for r in results:
            w.writerow((r.number, r.claim, "PASS" if r.passed else "FAIL"))
        _emit(args, text=buf.getvalue())
    else:
        lines = [r.line() for r in results]
        if args.verbose:
            lines = [ln + "".join(f"\n      {d}" for d in r.details) for ln, r in zip(lines, results)]
        _emit(args, text="\n".join(lines) + "\n")
    return 0 if all(r.passed for r in results) else 1


# -- parser -----------------------------------------------------------------

def _tolerance(text):
    name, _, value = text.partition("=")
    if name not in Tolerances.__dataclass_fields__ or not value:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE with NAME in {sorted(Tolerances.__dataclass_fields__)}")
    return name, float(value)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed for all random streams")
    common.add_argument("--restarts", type=int, default=32, help="ascent restarts for the XOR solver")
    common.add_argument("--epsilon", type=float, default=0.05, help="distortion for dimension reduction")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cap", type=int, default=classical.DEFAULT_CAP, help="classical enumeration cap")
    common.add_argument("--out", help="write output here instead of standard output")
    common.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="NAME=VALUE",
                        help="override a numerical tolerance")

    p = argparse.ArgumentParser(prog="nlgames", description="Nonlocal games toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write a standard game as JSON")
    g.add_argument("game", choices=sorted(GAMES))
    g.add_argument("--n", type=int, default=3, help="cycle length or Hamming dimension")
    g.add_argument("--colors", type=int, default=2)
    g.add_argument("--vectors", help="Kochen-Specker vector file (default: the shipped set)")
    g.add_argument("--strategy", help="also write the built-in quantum strategy to this file")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("classical-value", parents=[common], help="exact classical value")
    c.add_argument("game")
    c.set_defaults(func=cmd_classical)

    q = sub.add_parser("quantum-value", parents=[common], help="quantum value of an XOR game")
    q.add_argument("game")
    q.set_defaults(func=cmd_quantum)

    s = sub.add_parser("simulate", parents=[common], help="win probability of a quantum strategy")
    s.add_argument("game")
    s.add_argument("strategy_file")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("round", parents=[common], help="hyperplane rounding of XOR-game vectors")
    r.add_argument("game")
    r.add_argument("--vectors", help="vector file (default: solve the game first)")
    r.add_argument("--samples", type=int, default=1000)
    r.set_defaults(func=cmd_round)

    d = sub.add_parser("reduce", parents=[common], help="random projection of a vector strategy")
    d.add_argument("vectors_file")
    d.add_argument("--force-projection", action="store_true",
                   help="project even when the vectors already fit in the target dimension")
    d.set_defaults(func=cmd_reduce)

    lf = sub.add_parser("lift", parents=[common], help="turn vectors into a quantum strategy file")
    lf.add_argument("vectors_file")
    lf.set_defaults(func=cmd_lift)

    b = sub.add_parser("check-bounds", parents=[common], help="bound report for XOR games")
    b.add_argument("games", nargs="+")
    b.set_defaults(func=cmd_check_bounds)

    v = sub.add_parser("verify-paper", parents=[common], help="run every headline check")
    v.add_argument("--verbose", action="store_true")
    v.set_defaults(func=cmd_verify)
    v.set_defaults(format="table")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format == "table" and args.command != "verify-paper":
        args.format = "json"
    try:
        with override_tolerances(**dict(args.tol)):
            code = args.func(args)
    except (NonlocalGameError, OSError, ValueError) as exc:
        print(f"nlgames {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return code or 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
