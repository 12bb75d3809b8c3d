import sys
import argparse
import logging

from src.assignment import TIE_BREAK_LOWEST, TIE_BREAK_RANDOM
from src.interfaces.graph_commands import (
  STRATEGY_NAMES,
  run_assign,
  run_bench_tightness,
  run_certificate,
  run_maxweight,
  run_play,
  run_solve,
  run_sweep,
  run_verify_assign,
)
from src.interfaces.hypergraph_commands import run_hyp_assign, run_hyp_balanced, run_hyp_solve
from src.lib.errors import InputError, InvariantViolation

logger = logging.getLogger("hallgame")

EXIT_INPUT = 2
EXIT_INVARIANT = 3


def build_parser():
  parser = argparse.ArgumentParser(
    prog="hallgame",
    description="Hall's theorem through a path game: assignments, certificates, games and hypergraphs",
  )
  parser.add_argument("-v", "--verbose", action="count", default=0, help="More logging on stderr (-vv for debug)")
  parser.add_argument("--json", action="store_true", help="Structured output instead of the line format")
  sub = parser.add_subparsers(dest="command", required=True)

  p = sub.add_parser("assign", help="Compute an assignment for (G', v0)")
  p.add_argument("file", help="Bipartite or general graph file, - for stdin")
  p.add_argument("--tie-break", choices=[TIE_BREAK_LOWEST, TIE_BREAK_RANDOM], default=TIE_BREAK_LOWEST)
  p.add_argument("--seed", type=int, default=None, help="Seed for the random tie-break")
  p.add_argument("--trace", action="store_true", help="Also print every introduction and deletion")
  p.add_argument("--check-invariants", action="store_true", help="Check the step invariants after every iteration")
  p.set_defaults(handler=run_assign)

  p = sub.add_parser("certificate", help="Matching covering V1 or a Hall violator")
  p.add_argument("file")
  p.set_defaults(handler=run_certificate)

  p = sub.add_parser("verify-assign", help="Check an assignment file against C1-C3")
  p.add_argument("graph")
  p.add_argument("assignment")
  p.set_defaults(handler=run_verify_assign)

  p = sub.add_parser("play", help="Play the path game between two strategies")
  p.add_argument("file")
  p.add_argument("--p1", choices=STRATEGY_NAMES, default="assign")
  p.add_argument("--p2", choices=STRATEGY_NAMES, default="random")
  p.add_argument("--seed", type=int, default=None)
  p.add_argument("--check-invariants", action="store_true", help="Validate the assignment strategy along the play")
  p.set_defaults(handler=run_play)

  p = sub.add_parser("solve", help="Exact game value by exhaustive search")
  p.add_argument("file")
  p.set_defaults(handler=run_solve)

  p = sub.add_parser("bench-tightness", help="Iteration counts on the worst-case family")
  p.add_argument("--n-max", type=int, required=True)
  p.add_argument("--timing", action="store_true", help="Add wall time and the log-log slope")
  p.add_argument("--jobs", type=int, default=None, help="Worker processes (default: up to 4)")
  p.set_defaults(handler=run_bench_tightness)

  p = sub.add_parser("maxweight", help="Maximum-weight perfect matching with duals")
  p.add_argument("file")
  p.set_defaults(handler=run_maxweight)

  p = sub.add_parser("sweep", help="Cross-check random instances against the matching oracle")
  p.add_argument("--count", type=int, default=100)
  p.add_argument("--seed", type=int, default=None)
  p.add_argument("--jobs", type=int, default=None)
  p.set_defaults(handler=run_sweep)

  hyp = sub.add_parser("hyp", help="Balanced hypergraph tools")
  hyp_sub = hyp.add_subparsers(dest="hyp_command", required=True)
  p = hyp_sub.add_parser("balanced", help="Balancedness with a witness strong cycle")
  p.add_argument("file")
  p.add_argument("--partial", action="store_true", help="Also look for a partial hypergraph with nu != tau")
  p.set_defaults(handler=run_hyp_balanced)
  p = hyp_sub.add_parser("assign", help="Assignment for (H', v0) with verification")
  p.add_argument("file")
  p.add_argument("--search", action="store_true", help="Use the exhaustive search only")
  p.set_defaults(handler=run_hyp_assign)
  p = hyp_sub.add_parser("solve", help="Game value on (H', v0) and the matching cross-check")
  p.add_argument("file")
  p.set_defaults(handler=run_hyp_solve)

  return parser


def configure_logging(verbosity: int) -> None:
  level = logging.WARNING
  if verbosity == 1:
    level = logging.INFO
  elif verbosity >= 2:
    level = logging.DEBUG
  logging.basicConfig(
    level=level,
    stream=sys.stderr,
    format="%(levelname)s %(name)s: %(message)s",
    force=True,
  )


def run(argv=None) -> int:
  parser = build_parser()
  try:
    args = parser.parse_args(argv)
  except SystemExit as exc:
    return exc.code if isinstance(exc.code, int) else EXIT_INPUT

  configure_logging(args.verbose)
  try:
    return args.handler(args)
  except InvariantViolation as exc:
    logger.error("internal invariant violated: %s", exc)
    return EXIT_INVARIANT
  except InputError as exc:
    logger.error("%s", exc)
    return EXIT_INPUT


if __name__ == "__main__":
  sys.exit(run())
