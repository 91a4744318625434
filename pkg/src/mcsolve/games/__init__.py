"""Game factory: build an initial position from a GameConfig."""

from __future__ import annotations

from ..core import Game, GameConfig, MoveCounter
from .goban import Atarigo, Go, GobanGame, Nogo, make_goban
from .pawns import (
    Breakthrough,
    Knightthrough,
    MisereBreakthrough,
    MisereKnightthrough,
    PawnGame,
    make_pawn,
)
from .domino import Domineering, MisereDomineering, make_domino

__all__ = [
    "Atarigo", "Nogo", "Go", "GobanGame",
    "Breakthrough", "MisereBreakthrough", "Knightthrough", "MisereKnightthrough",
    "PawnGame", "Domineering", "MisereDomineering",
    "new_game",
]

_GOBAN = {"atarigo", "nogo", "go"}
_PAWNS = {"breakthrough", "misere-breakthrough", "knightthrough", "misere-knightthrough"}


def new_game(config: GameConfig, counter: MoveCounter | None = None) -> Game:
    """Initial position for the configured game, sharing ``counter``."""
    if config.game in _GOBAN:
        return make_goban(config, counter)
    if config.game in _PAWNS:
        return make_pawn(config, counter)
    return make_domino(config, counter)
