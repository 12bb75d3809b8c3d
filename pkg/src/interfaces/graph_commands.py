import json
import logging
import sys
from dataclasses import asdict

from src.assignment import (MatchingCert, compute_assignment, extract_certificate,
                            verify_assignment)
from src.benchmarks import format_table, random_sweep, tightness_table, timing_slope
from src.game import (PLAYER_ONE, PLAYER_TWO, check_play_invariant, designated_player,
                      minimax_strategy, minimax_value, play_match, random_strategy,
                      resign_strategy, stdin_strategy, strategy_from_assignment)
from src.graph_data import (load_arena, parse_assignment, parse_weighted, read_input,
                            render_assignment, render_certificate, render_trace)
from src.hungarian import max_weight_matching
from src.lib.errors import InputError, InvariantViolation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1

STRATEGY_NAMES = ("assign", "random", "minimax", "stdin", "resign")


def emit_json(payload) -> None:
    print(json.dumps(payload, indent=2))


def _label_or_none(arena, v):
    return None if v is None else arena.label(v)


def _assign(arena, args=None):
    a, stats = compute_assignment(
        arena,
        tie_break=getattr(args, "tie_break", "lowest"),
        seed=getattr(args, "seed", None),
        trace=getattr(args, "trace", False),
        debug_invariants=getattr(args, "check_invariants", False),
    )
    verdict = verify_assignment(arena, a)
    if not verdict.ok:
        raise InvariantViolation("computed assignment fails verification: "
                                 + "; ".join(verdict.lines(arena.label)))
    return a, stats


def run_assign(args) -> int:
    arena = load_arena(read_input(args.file))
    a, stats = _assign(arena, args)
    if args.json:
        payload = {
            "sigma": {arena.label(v): _label_or_none(arena, u) for v, u in enumerate(a.sigma)},
            "R": [arena.label(v) for v in sorted(a.reachable)],
            "stats": {"iterations": stats.iterations, "introductions": stats.introductions,
                      "deletions": stats.deletions, "bound": stats.bound},
        }
        if stats.trace is not None:
            payload["trace"] = [
                {"step": s.step, "kind": s.kind, "x": arena.label(s.x), "y": _label_or_none(arena, s.y)}
                for s in stats.trace
            ]
        emit_json(payload)
        return EXIT_OK
    sys.stdout.write(render_assignment(arena, a, stats))
    if stats.trace is not None:
        sys.stdout.write(render_trace(arena, stats.trace))
    return EXIT_OK


def run_certificate(args) -> int:
    arena = load_arena(read_input(args.file))
    if arena.original is None:
        raise InputError("certificate needs a bipartite ('p bip') input")
    a, _ = _assign(arena)
    cert = extract_certificate(arena, a)
    g = arena.original
    verdict = cert.violations(g)
    if not verdict.ok:
        raise InvariantViolation("; ".join(verdict.lines(g.label)))
    if args.json:
        if isinstance(cert, MatchingCert):
            emit_json({"kind": "matching",
                       "edges": [[g.label(u), g.label(v)] for u, v in sorted(cert.edges)]})
        else:
            emit_json({"kind": "violator",
                       "S": [g.label(v) for v in sorted(cert.subset)],
                       "N(S)": [g.label(v) for v in sorted(cert.witness_neighborhood)]})
        return EXIT_OK
    sys.stdout.write(render_certificate(g, cert))
    return EXIT_OK


def run_verify_assign(args) -> int:
    arena = load_arena(read_input(args.graph))
    a, _ = parse_assignment(read_input(args.assignment), arena)
    verdict = verify_assignment(arena, a)
    if args.json:
        emit_json({"ok": verdict.ok, "violations": [] if verdict.ok else verdict.lines(arena.label)})
    else:
        print("\n".join(verdict.lines(arena.label)))
    return EXIT_OK if verdict.ok else EXIT_FAILED


def _strategy(name: str, player: int, a, arena, seed):
    if name == "assign":
        winner = designated_player(arena, a)
        if player != winner:
            raise InputError(f"the assignment makes player {winner} win; it has no strategy for player {player}")
        return strategy_from_assignment(a)
    if name == "random":
        return random_strategy(None if seed is None else seed + player)
    if name == "minimax":
        return minimax_strategy()
    if name == "stdin":
        return stdin_strategy(sys.stdin, prompt=sys.stderr)
    return resign_strategy()


def run_play(args) -> int:
    arena = load_arena(read_input(args.file))
    a, _ = _assign(arena)
    p1 = _strategy(args.p1, PLAYER_ONE, a, arena, args.seed)
    p2 = _strategy(args.p2, PLAYER_TWO, a, arena, args.seed)
    result = play_match(p1, p2, arena)

    status = EXIT_OK
    violations = []
    if args.check_invariants:
        winner = designated_player(arena, a)
        if (args.p1, args.p2)[winner - 1] != "assign":
            logger.warning("--check-invariants needs the assignment strategy for player %d", winner)
        else:
            verdict = check_play_invariant(arena, a, result.transcript)
            violations = [] if verdict.ok else verdict.lines(arena.label)
            if violations:
                status = EXIT_FAILED

    transcript = [arena.label(v) for v in result.transcript]
    if args.json:
        emit_json({"transcript": transcript, "winner": result.winner,
                   "forfeit": result.forfeit, "violations": violations})
        return status
    print("transcript: " + " ".join(transcript))
    print(f"winner: {result.winner}")
    if result.forfeit:
        print(f"forfeit: {result.forfeit}")
    for line in violations:
        print(line)
    return status


def run_solve(args) -> int:
    arena = load_arena(read_input(args.file))
    value = minimax_value(arena)
    a, _ = _assign(arena)
    if value != designated_player(arena, a):
        raise InvariantViolation(f"minimax winner {value} differs from the assignment's player "
                                 f"{designated_player(arena, a)}")
    if args.json:
        emit_json({"winner": value})
    else:
        print(f"winner: {value}")
    return EXIT_OK


def run_bench_tightness(args) -> int:
    df = tightness_table(args.n_max, timing=args.timing, jobs=args.jobs)
    if args.json:
        emit_json(json.loads(df.to_json(orient="records")))
    else:
        print(format_table(df))
        if args.timing and len(df) > 1:
            print(f"slope {timing_slope(df):.3f}")
    return EXIT_OK if (df["iterations"] <= df["bound"]).all() else EXIT_FAILED


def run_maxweight(args) -> int:
    g = parse_weighted(read_input(args.file))
    result = max_weight_matching(g)
    pairs = sorted(result.pairs)
    if args.json:
        emit_json({"weight": result.total_weight,
                   "matching": [[u + 1, v + 1] for u, v in pairs],
                   "y1": list(result.duals.y1), "y2": list(result.duals.y2),
                   "updates": result.updates})
        return EXIT_OK
    print(f"weight {result.total_weight}")
    for u, v in pairs:
        print(f"e {u + 1} {v + 1}")
    print("y1 " + " ".join(map(str, result.duals.y1)))
    print("y2 " + " ".join(map(str, result.duals.y2)))
    print(f"updates {result.updates}")
    return EXIT_OK


def run_sweep(args) -> int:
    summary = random_sweep(args.count, seed=args.seed, jobs=args.jobs)
    if args.json:
        emit_json(asdict(summary))
    else:
        print(summary.line())
    return EXIT_FAILED if summary.disagreements else EXIT_OK
