"""Breakthrough and Knightthrough, each with a misere variant.

Both sides start with two full home rows.  The first player moves toward
higher rows, the second toward lower rows.  Reaching the far row ends the
game immediately: the mover wins the normal games and loses the misere
ones.  A player whose turn it is with no legal move loses the normal games
and wins the misere ones (with two full rows of pieces this only happens
in blocked or starved endgames, but the solvers do reach such states).

Breakthrough pawns step one row forward: straight only onto an empty
square, diagonally onto empty or enemy squares (captures are diagonal
only).  Knightthrough pieces make the four forward knight jumps and
capture on any destination.  Moves are encoded as ``from * cells + to``.
"""

from __future__ import annotations

from ..core import (
    FIRST, SECOND, Game, GameConfig, MoveCounter, opponent, point_name,
)
from .. import zobrist

_STONE_KEYS = zobrist.STONE_KEYS
_SIDE_KEY = zobrist.SIDE_KEY


class _PawnGeometry:
    """Masks and per-cell capture tables for one board size and move set."""

    __slots__ = ("width", "height", "cells", "full", "steps", "attack_from")

    def __init__(self, width: int, height: int, knight: bool):
        self.width = width
        self.height = height
        self.cells = width * height
        self.full = (1 << self.cells) - 1
        # steps[player][cell] -> list of (dest, is_capture_dir) in a fixed
        # order; for breakthrough the straight step is flagged non-capture.
        self.steps = [None, [], []]
        for player in (FIRST, SECOND):
            table = []
            for p in range(self.cells):
                r, c = divmod(p, width)
                out = []
                fwd = 1 if player == FIRST else -1
                if knight:
                    jumps = ((2 * fwd, -1), (2 * fwd, 1), (fwd, -2), (fwd, 2))
                    for dr, dc in jumps:
                        rr, cc = r + dr, c + dc
                        if 0 <= rr < height and 0 <= cc < width:
                            out.append((rr * width + cc, True))
                else:
                    trio = ((fwd, 0, False), (fwd, -1, True), (fwd, 1, True))
                    for dr, dc, cap in trio:
                        rr, cc = r + dr, c + dc
                        if 0 <= rr < height and 0 <= cc < width:
                            out.append((rr * width + cc, cap))
                table.append(out)
            self.steps[player] = table
        # attack_from[player][cell] = mask of squares from which ``player``
        # could capture onto the cell.
        self.attack_from = [None, [0] * self.cells, [0] * self.cells]
        for player in (FIRST, SECOND):
            for p in range(self.cells):
                for dest, cap in self.steps[player][p]:
                    if cap:
                        self.attack_from[player][dest] |= 1 << p


_geometries: dict[tuple[int, int, bool], _PawnGeometry] = {}


def _geometry(width: int, height: int, knight: bool) -> _PawnGeometry:
    key = (width, height, knight)
    geo = _geometries.get(key)
    if geo is None:
        geo = _geometries[key] = _PawnGeometry(width, height, knight)
    return geo


class PawnGame(Game):
    """Shared engine; subclasses pick the move set and the win sense."""

    knight = False

    def __init__(self, width: int, height: int, counter: MoveCounter | None = None):
        if height < 4:
            raise ValueError("pawn games need height >= 4 for two home rows each")
        if width * height > zobrist.MAX_CELLS:
            raise ValueError("board too large")
        self.width = width
        self.height = height
        self.geo = _geometry(width, height, self.knight)
        self.first = 0
        self.second = 0
        self.to_move = FIRST
        self.reached_by = 0  # player whose piece stands on its far row
        self.hash = 0
        self.counter = counter if counter is not None else MoveCounter()

    @classmethod
    def initial(cls, width: int, height: int, counter: MoveCounter | None = None):
        game = cls(width, height, counter)
        for c in range(width):
            game.first |= (1 << c) | (1 << (width + c))
            game.second |= (1 << ((height - 1) * width + c)) | (1 << ((height - 2) * width + c))
        game.hash = game.recompute_hash()
        return game

    @property
    def code_space(self) -> int:
        return self.geo.cells * self.geo.cells * 2

    def length_bound(self) -> int:
        # Every move advances one piece at least one row and rows advance
        # monotonically, so piece count times height bounds any game.
        return (self.first.bit_count() + self.second.bit_count()) * self.height

    def move_code(self, move: int) -> int:
        cells = self.geo.cells
        to = move % cells
        enemy = self.second if self.to_move == FIRST else self.first
        return move * 2 + (1 if enemy & (1 << to) else 0)

    def describe_move(self, move: int) -> str:
        cells = self.geo.cells
        src, to = divmod(move, cells)
        enemy = self.second if self.to_move == FIRST else self.first
        sep = "x" if enemy & (1 << to) else "-"
        return f"{point_name(src, self.width)}{sep}{point_name(to, self.width)}"

    def _bits_of(self, player: int) -> int:
        return self.first if player == FIRST else self.second

    def copy(self):
        other = type(self).__new__(type(self))
        other.width, other.height, other.geo = self.width, self.height, self.geo
        other.counter = self.counter
        other.first = self.first
        other.second = self.second
        other.to_move = self.to_move
        other.reached_by = self.reached_by
        other.hash = self.hash
        return other

    def legal_moves(self) -> list[int]:
        mover = self.to_move
        mine = self._bits_of(mover)
        own = mine
        enemy = self._bits_of(opponent(mover))
        empty_or_enemy = ~own
        cells = self.geo.cells
        steps = self.geo.steps[mover]
        out = []
        rem = mine
        while rem:
            lsb = rem & -rem
            p = lsb.bit_length() - 1
            for dest, cap in steps[p]:
                bit = 1 << dest
                if cap:
                    if empty_or_enemy & bit:
                        out.append(p * cells + dest)
                else:
                    if not (own | enemy) & bit:
                        out.append(p * cells + dest)
            rem ^= lsb
        return out

    def has_move(self) -> bool:
        # Any forward destination not blocked by an own piece will do; for
        # breakthrough the straight step additionally needs an empty square,
        # but a diagonal onto empty-or-enemy already proves mobility.
        return bool(self.legal_moves())

    def attackers(self, point: int, player: int) -> int:
        """Bitset of ``player`` pieces bearing on ``point`` (capture moves)."""
        return self.geo.attack_from[player][point] & self._bits_of(player)

    def far_row_mask(self, player: int) -> int:
        w, h = self.width, self.height
        if player == FIRST:
            return ((1 << w) - 1) << ((h - 1) * w)
        return (1 << w) - 1

    def rank_from_home(self, player: int, point: int) -> int:
        """Row of ``point`` counted from ``player``'s own side, 1-based."""
        r = point // self.width
        return r + 1 if player == FIRST else self.height - r

    def try_play(self, move: int):
        mover = self.to_move
        cells = self.geo.cells
        frm, to = divmod(move, cells)
        from_bit = 1 << frm
        to_bit = 1 << to
        enemy = opponent(mover)
        enemy_bits = self._bits_of(enemy)
        captured = enemy_bits & to_bit
        token = (move, captured, self.reached_by)
        keys = _STONE_KEYS[mover]
        h = self.hash ^ keys[frm] ^ keys[to] ^ _SIDE_KEY
        if captured:
            h ^= _STONE_KEYS[enemy][to]
        if mover == FIRST:
            self.first = (self.first & ~from_bit) | to_bit
            self.second = enemy_bits & ~to_bit
        else:
            self.second = (self.second & ~from_bit) | to_bit
            self.first = enemy_bits & ~to_bit
        if to_bit & self.far_row_mask(mover):
            self.reached_by = mover
        self.hash = h
        self.to_move = enemy
        self.counter.n += 1
        return token

    def undo(self, token) -> None:
        move, captured, reached = token
        mover = opponent(self.to_move)
        cells = self.geo.cells
        frm, to = divmod(move, cells)
        keys = _STONE_KEYS[mover]
        h = self.hash ^ keys[frm] ^ keys[to] ^ _SIDE_KEY
        if captured:
            h ^= _STONE_KEYS[opponent(mover)][to]
        if mover == FIRST:
            self.first = (self.first & ~(1 << to)) | (1 << frm)
            self.second |= captured
        else:
            self.second = (self.second & ~(1 << to)) | (1 << frm)
            self.first |= captured
        self.reached_by = reached
        self.hash = h
        self.to_move = mover

    def is_terminal(self) -> bool:
        return self.reached_by != 0 or not self.has_move()

    def evaluate(self) -> int:
        if self.reached_by:
            mover_won_race = self.reached_by == self.to_move
            value = 1 if mover_won_race else -1
        elif not self.has_move():
            value = -1
        else:
            return 0
        return -value if self.misere else value

    def recompute_hash(self) -> int:
        h = zobrist.board_hash(self.first, self.second)
        if self.to_move == SECOND:
            h ^= _SIDE_KEY
        return h

    def diagram(self) -> str:
        rows = []
        for r in range(self.height - 1, -1, -1):
            row = []
            for c in range(self.width):
                b = 1 << (r * self.width + c)
                row.append("X" if self.first & b else "O" if self.second & b else ".")
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
                b = 1 << (r * width + c)
                if ch == "X":
                    game.first |= b
                elif ch == "O":
                    game.second |= b
                elif ch != ".":
                    raise ValueError(f"bad cell {ch!r}")
        game.to_move = to_move
        for player in (FIRST, SECOND):
            if game._bits_of(player) & game.far_row_mask(player):
                game.reached_by = player
        game.hash = game.recompute_hash()
        return game


class Breakthrough(PawnGame):
    game_id = "breakthrough"
    knight = False
    misere = False


class MisereBreakthrough(PawnGame):
    game_id = "misere-breakthrough"
    knight = False
    misere = True


class Knightthrough(PawnGame):
    game_id = "knightthrough"
    knight = True
    misere = False


class MisereKnightthrough(PawnGame):
    game_id = "misere-knightthrough"
    knight = True
    misere = True


_CLASSES = {
    "breakthrough": Breakthrough,
    "misere-breakthrough": MisereBreakthrough,
    "knightthrough": Knightthrough,
    "misere-knightthrough": MisereKnightthrough,
}


def make_pawn(config: GameConfig, counter: MoveCounter | None = None) -> PawnGame:
    return _CLASSES[config.game].initial(config.width, config.height, counter)
