import os
from dataclasses import dataclass

from src.lib.errors import InputError

GAME_MAX_VERTICES_ENV = "HALLGAME_GAME_MAX_VERTICES"
HALL_MAX_SIDE_ENV = "HALLGAME_HALL_MAX_SIDE"
HYPER_MAX_NODES_ENV = "HALLGAME_HYPER_MAX_NODES"
HYPER_GAME_MAX_NODES_ENV = "HALLGAME_HYPER_GAME_MAX_NODES"
SEARCH_MAX_ENV = "HALLGAME_SEARCH_MAX"


@dataclass(frozen=True)
class Bounds:
    """Size limits for the exhaustive (exponential) searches."""
    game_max_vertices: int = 14
    hall_max_side: int = 20
    hyper_max_nodes: int = 16
    hyper_game_max_nodes: int = 18
    search_max: int = 10


def _read_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{name} must be an integer, got {raw!r}") from None
    if value < 0:
        raise InputError(f"{name} must be nonnegative, got {value}")
    return value


def load_bounds() -> Bounds:
    # read at call time so tests and the CLI can change the environment
    defaults = Bounds()
    return Bounds(
        game_max_vertices=_read_int(GAME_MAX_VERTICES_ENV, defaults.game_max_vertices),
        hall_max_side=_read_int(HALL_MAX_SIDE_ENV, defaults.hall_max_side),
        hyper_max_nodes=_read_int(HYPER_MAX_NODES_ENV, defaults.hyper_max_nodes),
        hyper_game_max_nodes=_read_int(HYPER_GAME_MAX_NODES_ENV, defaults.hyper_game_max_nodes),
        search_max=_read_int(SEARCH_MAX_ENV, defaults.search_max),
    )
