"""Exact solvers for small two-player games with Monte Carlo move ordering.

The package couples three classical solvers (alpha-beta with a
transposition table, iterative deepening null-window alpha-beta, and a
two-level proof number search) with move ordering learned online by a
GRAVE MCTS whose playout policy adapts during the search.
"""

from .core import FIRST, SECOND, Game, GameConfig, MoveCounter, opponent
from .games import new_game

__version__ = "0.1.0"

__all__ = [
    "FIRST", "SECOND", "Game", "GameConfig", "MoveCounter", "opponent",
    "new_game", "__version__",
]
