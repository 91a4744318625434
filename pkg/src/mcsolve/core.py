"""Core contracts shared by every game engine.

A game state is a mutable object that also supports pure successor
generation.  Solvers that need speed use the in-place play/undo pair;
everything else (oracle, tests, MCTS tree expansion) uses ``play`` which
returns an independent copy.  Values are always from the point of view of
the player to move: +1 a proven win, -1 a proven loss, 0 unknown (either a
non-terminal evaluation leaf or a Go game cut off by the move limit).
"""

from __future__ import annotations

from dataclasses import dataclass

FIRST = 1
SECOND = 2

WIN = 1
LOSS = -1
UNKNOWN = 0

GAME_IDS = (
    "atarigo",
    "nogo",
    "go",
    "breakthrough",
    "misere-breakthrough",
    "knightthrough",
    "misere-knightthrough",
    "domineering",
    "misere-domineering",
)


def opponent(player: int) -> int:
    return 3 - player


def point_name(point: int, width: int) -> str:
    """Board point as column letter plus 1-based row, e.g. 5 -> "c2"."""
    x, y = point % width, point // width
    return f"{chr(ord('a') + x)}{y + 1}"


@dataclass(frozen=True)
class GameConfig:
    """Everything needed to build an initial position."""

    game: str
    width: int
    height: int
    komi: float | None = None
    move_limit: int | None = None
    misere: bool = False

    def __post_init__(self):
        if self.game not in GAME_IDS:
            raise ValueError(f"unknown game {self.game!r}")
        if self.width < 1 or self.height < 1:
            raise ValueError("board dimensions must be at least 1x1")
        # One 64-bit word per bitset; thin boards (10x2 and friends in the
        # published winners grid) are fine, 9x9 and up are out of scope.
        if self.width * self.height > 64:
            raise ValueError("boards above 64 cells are not supported")
        if self.game == "go":
            if self.komi is None:
                raise ValueError("go needs a komi")
            # Integer komi could make jigo reachable and break the win/loss
            # dichotomy, so only half-integer values are accepted.
            if float(2 * self.komi) != int(2 * self.komi) or int(2 * self.komi) % 2 == 0:
                raise ValueError("komi must be a half integer")
        elif self.komi is not None:
            raise ValueError(f"{self.game} does not take a komi")
        if self.move_limit is not None and self.game != "go":
            raise ValueError("only go takes a move limit")
        # The flag is implied by the game id; normalize rather than nag.
        object.__setattr__(self, "misere", self.game.startswith("misere-"))


class MoveCounter:
    """Shared mutable cell counting every move played on derived states.

    All copies of a position share one counter, so the number of moves a
    search played is the counter delta across the search.
    """

    __slots__ = ("n",)

    def __init__(self):
        self.n = 0


class Game:
    """Base class for the rule engines.

    Subclasses fill in the board representation and the move semantics.
    Moves are small ints whose meaning is game specific (board point,
    packed from/to square pair, packed domino anchor).  Move generation
    order is deterministic and is the tie-break ordinal everywhere.
    """

    game_id = "?"
    misere = False

    width: int
    height: int
    to_move: int
    hash: int
    counter: MoveCounter

    # -- informational ------------------------------------------------

    @property
    def code_space(self) -> int:
        """Exclusive upper bound on move codes for this board size."""
        raise NotImplementedError

    def length_bound(self) -> int:
        """Upper bound on the number of moves left in any continuation."""
        raise NotImplementedError

    def move_code(self, move: int) -> int:
        """Code identifying the move for policy learning and AMAF.

        Codes intentionally blur states: the same code can appear in many
        positions (for board games it encodes the point plus its immediate
        neighbourhood), which is what lets playout statistics transfer.
        """
        raise NotImplementedError

    def describe_move(self, move: int) -> str:
        """Human-readable move label (for listings and logs only)."""
        return str(move)

    # -- rules ---------------------------------------------------------

    def legal_moves(self) -> list[int]:
        raise NotImplementedError

    def pseudo_moves(self) -> list[int]:
        """Cheap superset of ``legal_moves`` in the same deterministic order.

        Games with expensive legality (the goban family) return all
        candidate points here and reject the illegal ones in ``try_play``,
        so a solver that cuts early never pays for full legality checks.
        """
        return self.legal_moves()

    def has_move(self) -> bool:
        return bool(self.legal_moves())

    def is_terminal(self) -> bool:
        raise NotImplementedError

    def evaluate(self) -> int:
        """Value for the player to move.

        Terminal states give +1/-1.  Non-terminal states (evaluation at
        depth 0) and Go positions stopped by the move limit give 0.
        """
        raise NotImplementedError

    # -- playing -------------------------------------------------------

    def play(self, move: int) -> "Game":
        """Pure successor: the receiver is left untouched."""
        nxt = self.copy()
        tok = nxt.try_play(move)
        if tok is None:
            raise ValueError(f"illegal move {move}")
        return nxt

    def play_inplace(self, move: int):
        """Mutating play; returns an opaque token for ``undo``."""
        tok = self.try_play(move)
        if tok is None:
            raise ValueError(f"illegal move {move}")
        return tok

    def try_play(self, move: int):
        """Play ``move`` if legal and return an undo token, else None.

        The move counter is bumped only when the move is actually played,
        so probing an illegal candidate is free in the reported counts.
        """
        raise NotImplementedError

    def undo(self, token) -> None:
        raise NotImplementedError

    def copy(self) -> "Game":
        raise NotImplementedError

    # -- debugging / tests ----------------------------------------------

    def recompute_hash(self) -> int:
        """Position hash rebuilt from scratch; must equal ``self.hash``."""
        raise NotImplementedError

    def diagram(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.width}x{self.height} to_move={self.to_move}>"
