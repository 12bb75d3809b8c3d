import logging
import sys

from src.graph_data import parse_hypergraph, read_input, render_hyper_assignment
from src.hypergame import hyper_minimax
from src.hypergraph import (METHOD_SEARCH, ConstructionResult, augment_hypergraph, construct_assignment,
                            covers, find_independent_transversal, is_balanced_bruteforce,
                            max_matching_bruteforce, nu_tau_partial_check, search_assignment_bruteforce)
from src.interfaces.graph_commands import EXIT_FAILED, EXIT_OK, emit_json
from src.lib.errors import InputError

logger = logging.getLogger(__name__)


def _load(path: str):
    h, u_set = parse_hypergraph(read_input(path))
    if u_set is None:
        u_set = find_independent_transversal(h)
        if u_set is None:
            raise InputError("the hypergraph has no independent transversal")
        logger.info("using independent transversal U = {%s}", ", ".join(h.label(u) for u in sorted(u_set)))
    return h, augment_hypergraph(h, u_set)


def run_hyp_balanced(args) -> int:
    h, _ = parse_hypergraph(read_input(args.file))
    verdict = is_balanced_bruteforce(h)
    witness = None if verdict.witness is None else [h.label(x) for x in verdict.witness]
    partial = nu_tau_partial_check(h) if args.partial and not verdict.balanced else None
    if args.json:
        payload = {"balanced": verdict.balanced, "witness": witness}
        if partial is not None:
            payload["partial"] = {
                "found": partial.found, "nu": partial.nu, "tau": partial.tau,
                "edges": None if partial.kept_edges is None else [h.label(e) for e in partial.kept_edges],
            }
        emit_json(payload)
        return EXIT_OK
    if verdict.balanced:
        print("balanced")
        return EXIT_OK
    print("not balanced")
    print("witness: " + " ".join(witness))
    if partial is not None:
        if partial.found:
            print(f"partial: nu={partial.nu} tau={partial.tau} edges: "
                  + " ".join(h.label(e) for e in partial.kept_edges))
        else:
            print("partial: none")
    return EXIT_OK


def run_hyp_assign(args) -> int:
    h, arena = _load(args.file)
    if args.search:
        result = ConstructionResult(search_assignment_bruteforce(arena), METHOD_SEARCH)
    else:
        result = construct_assignment(arena)
    u_labels = [h.label(u) for u in sorted(arena.u_set)]
    a = result.assignment
    if args.json:
        payload = {"U": u_labels, "method": result.method, "found": a is not None}
        if a is not None:
            payload["sigma"] = {arena.label(v): None if e is None else arena.label(e)
                                for v, e in enumerate(a.sigma)}
            payload["R"] = [arena.label(v) for v in sorted(a.reachable)]
        emit_json(payload)
        return EXIT_OK if a is not None else EXIT_FAILED
    print("U: " + " ".join(u_labels))
    print(f"method {result.method}")
    if a is None:
        print("no assignment found")
        return EXIT_FAILED
    sys.stdout.write(render_hyper_assignment(arena.label, a))
    print("verify ok")
    return EXIT_OK


def run_hyp_solve(args) -> int:
    h, arena = _load(args.file)
    value = hyper_minimax(arena)
    covered = covers(h, max_matching_bruteforce(h), arena.u_set)
    balanced = is_balanced_bruteforce(h).balanced
    if args.json:
        emit_json({"winner": value, "matching_covers_U": covered, "balanced": balanced})
        return EXIT_OK
    print(f"winner: {value}")
    print(f"matching covers U: {'yes' if covered else 'no'}")
    print(f"balanced: {'yes' if balanced else 'no'}")
    return EXIT_OK
