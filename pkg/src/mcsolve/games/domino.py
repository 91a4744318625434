"""Domineering and its misere variant.

The first player places vertical dominoes, the second horizontal ones.
A move is the anchor cell: the lower cell of a vertical piece or the left
cell of a horizontal piece.  The player to move with no placement loses
the normal game and wins the misere game.

Only the occupancy matters for future play, so the position hash ignores
which side placed each domino; that lets transpositions between different
placement orders (and interleavings) share solver work.
"""

from __future__ import annotations

from ..core import (
    FIRST, SECOND, Game, GameConfig, MoveCounter, opponent, point_name,
)
from .. import zobrist

_STONE_KEYS = zobrist.STONE_KEYS
_SIDE_KEY = zobrist.SIDE_KEY


class Domineering(Game):
    game_id = "domineering"
    misere = False

    def __init__(self, width: int, height: int, counter: MoveCounter | None = None):
        if width * height > zobrist.MAX_CELLS:
            raise ValueError("board too large")
        self.width = width
        self.height = height
        self.cells = width * height
        self.full = (1 << self.cells) - 1
        left_col = 0
        for r in range(height):
            left_col |= 1 << (r * width)
        self.not_right = self.full & ~(left_col << (width - 1)) if width > 1 else 0
        self.occupied = 0
        self.to_move = FIRST
        self.hash = 0
        self.counter = counter if counter is not None else MoveCounter()

    @property
    def code_space(self) -> int:
        return self.cells * 2

    def length_bound(self) -> int:
        return (self.full & ~self.occupied).bit_count() // 2

    def move_code(self, move: int) -> int:
        return move * 2 + (0 if self.to_move == FIRST else 1)

    def describe_move(self, move: int) -> str:
        orient = "v" if self.to_move == FIRST else "h"
        return f"{point_name(move, self.width)}{orient}"

    def copy(self):
        other = type(self).__new__(type(self))
        other.width, other.height = self.width, self.height
        other.cells, other.full, other.not_right = self.cells, self.full, self.not_right
        other.occupied = self.occupied
        other.to_move = self.to_move
        other.hash = self.hash
        other.counter = self.counter
        return other

    def _anchor_mask(self, player: int) -> int:
        empty = self.full & ~self.occupied
        if player == FIRST:  # vertical: cell and the one above it free
            return empty & (empty >> self.width)
        return empty & self.not_right & (empty >> 1)

    def legal_moves(self) -> list[int]:
        mask = self._anchor_mask(self.to_move)
        out = []
        while mask:
            lsb = mask & -mask
            out.append(lsb.bit_length() - 1)
            mask ^= lsb
        return out

    def has_move(self) -> bool:
        return self._anchor_mask(self.to_move) != 0

    def _piece_bits(self, player: int, anchor: int) -> int:
        if player == FIRST:
            return (1 << anchor) | (1 << (anchor + self.width))
        return (1 << anchor) | (1 << (anchor + 1))

    def try_play(self, move: int):
        mover = self.to_move
        if not self._anchor_mask(mover) & (1 << move):
            return None
        piece = self._piece_bits(mover, move)
        self.occupied |= piece
        other = move + (self.width if mover == FIRST else 1)
        self.hash ^= _STONE_KEYS[1][move] ^ _STONE_KEYS[1][other] ^ _SIDE_KEY
        self.to_move = opponent(mover)
        self.counter.n += 1
        return move

    def undo(self, token) -> None:
        move = token
        mover = opponent(self.to_move)
        piece = self._piece_bits(mover, move)
        self.occupied &= ~piece
        other = move + (self.width if mover == FIRST else 1)
        self.hash ^= _STONE_KEYS[1][move] ^ _STONE_KEYS[1][other] ^ _SIDE_KEY
        self.to_move = mover

    def is_terminal(self) -> bool:
        return not self.has_move()

    def evaluate(self) -> int:
        if self.has_move():
            return 0
        return 1 if self.misere else -1

    def recompute_hash(self) -> int:
        h = 0
        rem = self.occupied
        while rem:
            lsb = rem & -rem
            h ^= _STONE_KEYS[1][lsb.bit_length() - 1]
            rem ^= lsb
        if self.to_move == SECOND:
            h ^= _SIDE_KEY
        return h

    def diagram(self) -> str:
        rows = []
        for r in range(self.height - 1, -1, -1):
            row = []
            for c in range(self.width):
                b = 1 << (r * self.width + c)
                row.append("#" if self.occupied & b else ".")
            rows.append("".join(row))
        return "\n".join(rows)

    @classmethod
    def from_diagram(cls, text: str, to_move: int = FIRST, **kwargs):
        rows = [line.strip() for line in text.strip().splitlines() if line.strip()]
        height = len(rows)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged diagram")
        game = cls(width, height, **kwargs)
        for i, row in enumerate(rows):
            r = height - 1 - i
            for c, ch in enumerate(row):
                if ch == "#":
                    game.occupied |= 1 << (r * width + c)
                elif ch != ".":
                    raise ValueError(f"bad cell {ch!r}")
        game.to_move = to_move
        game.hash = game.recompute_hash()
        return game


class MisereDomineering(Domineering):
    game_id = "misere-domineering"
    misere = True


def make_domino(config: GameConfig, counter: MoveCounter | None = None) -> Domineering:
    cls = MisereDomineering if config.misere else Domineering
    return cls(config.width, config.height, counter)
