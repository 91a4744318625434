"""Goban games: Atarigo, Nogo and Go on small rectangular boards.

Boards are kept as two int bitsets (one per colour), cell ``(r, c)`` at
bit ``r * width + c``.  Strings and liberties are found with flood fills
over ints, which is fast enough that nothing incremental is cached; that
keeps play/undo trivially correct.

Rules implemented here:

* Atarigo: first capture wins.  Filling one's own last liberty without
  capturing is illegal, and a player without a legal move loses.
* Nogo: any move that captures (either colour) is illegal, so stones are
  never removed; a player without a legal move loses.
* Go: Chinese (area) scoring with a half-integer komi, positional superko,
  suicide illegal, pass always legal, two consecutive passes end the game.
  A game that reaches the move limit counts as value 0 (nobody proved a
  win), which matters to the solvers because such results are not exact.
"""

from __future__ import annotations

from ..core import (
    FIRST, SECOND, Game, GameConfig, MoveCounter, opponent, point_name,
)
from .. import zobrist

_STONE_KEYS = zobrist.STONE_KEYS
_SIDE_KEY = zobrist.SIDE_KEY
_PASS_KEY = zobrist.PASS_KEY


class _Geometry:
    """Per-board-size constants: masks for shifts, neighbours, codes."""

    __slots__ = (
        "width", "height", "cells", "full", "not_left", "not_right",
        "nbr_mask", "nbrs", "code_space",
    )

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.cells = width * height
        self.full = (1 << self.cells) - 1
        left_col = 0
        for r in range(height):
            left_col |= 1 << (r * width)
        self.not_left = self.full & ~left_col
        self.not_right = self.full & ~(left_col << (width - 1))
        self.nbr_mask = []
        self.nbrs = []
        for p in range(self.cells):
            r, c = divmod(p, width)
            # Order matters: it fixes the neighbourhood code digits.
            around = []
            around.append(p - 1 if c > 0 else -1)        # west
            around.append(p + 1 if c < width - 1 else -1)  # east
            around.append(p - width if r > 0 else -1)    # south
            around.append(p + width if r < height - 1 else -1)  # north
            self.nbrs.append(around)
            m = 0
            for q in around:
                if q >= 0:
                    m |= 1 << q
            self.nbr_mask.append(m)
        # Code 0 is the pass move; stone codes are 1 + point * 256 + the
        # four base-4 neighbourhood digits (empty/own/enemy/edge).
        self.code_space = 1 + self.cells * 256

    def spread(self, bits: int) -> int:
        """All orthogonal neighbours of the set cells."""
        w = self.width
        return (
            ((bits & self.not_right) << 1)
            | ((bits & self.not_left) >> 1)
            | (bits << w)
            | (bits >> w)
        ) & self.full


_geometries: dict[tuple[int, int], _Geometry] = {}


def geometry(width: int, height: int) -> _Geometry:
    geo = _geometries.get((width, height))
    if geo is None:
        geo = _geometries[(width, height)] = _Geometry(width, height)
    return geo


def _flood(seed: int, allowed: int, geo: _Geometry) -> int:
    """Connected component of ``seed`` inside ``allowed`` (seed included)."""
    grown = seed
    while True:
        nxt = grown | (geo.spread(grown) & allowed)
        if nxt == grown:
            return grown
        grown = nxt


class GobanGame(Game):
    """State shared by the three goban rule sets."""

    def __init__(self, width: int, height: int, counter: MoveCounter | None = None):
        if width * height > zobrist.MAX_CELLS:
            raise ValueError("board too large")
        self.width = width
        self.height = height
        self.geo = geometry(width, height)
        self.black = 0
        self.white = 0
        self.to_move = FIRST
        self.hash = 0
        self.counter = counter if counter is not None else MoveCounter()

    # -- shared helpers -------------------------------------------------

    @property
    def code_space(self) -> int:
        return self.geo.code_space

    def occupied(self) -> int:
        return self.black | self.white

    def empty_bits(self) -> int:
        return self.geo.full & ~(self.black | self.white)

    def _bits_of(self, player: int) -> int:
        return self.black if player == FIRST else self.white

    def describe_move(self, move: int) -> str:
        if move == self.geo.cells:
            return "pass"
        return point_name(move, self.width)

    def move_code(self, move: int) -> int:
        geo = self.geo
        if move == geo.cells:  # pass (Go only)
            return 0
        own = self._bits_of(self.to_move)
        enemy = self._bits_of(opponent(self.to_move))
        digits = 0
        shift = 1
        for q in self.geo.nbrs[move]:
            if q < 0:
                v = 3
            else:
                b = 1 << q
                if own & b:
                    v = 1
                elif enemy & b:
                    v = 2
                else:
                    v = 0
            digits += v * shift
            shift <<= 2
        return 1 + move * 256 + digits

    def stone_string(self, point: int) -> int:
        """Bitset of the string containing the stone at ``point``."""
        b = 1 << point
        if self.black & b:
            return _flood(b, self.black, self.geo)
        if self.white & b:
            return _flood(b, self.white, self.geo)
        raise ValueError(f"no stone at {point}")

    def string_liberty_count(self, string_bits: int) -> int:
        libs = self.geo.spread(string_bits) & self.empty_bits()
        return libs.bit_count()

    def empty_adjacent(self, point: int) -> int:
        return (self.geo.nbr_mask[point] & self.empty_bits()).bit_count()

    def enemy_strings_adjacent(self, point: int) -> list[int]:
        """Deduplicated bitsets of enemy strings touching ``point``."""
        enemy = self._bits_of(opponent(self.to_move))
        rem = self.geo.nbr_mask[point] & enemy
        out = []
        while rem:
            lsb = rem & -rem
            s = _flood(lsb, enemy, self.geo)
            out.append(s)
            rem &= ~s
        return out

    def merged_liberty_count_after(self, point: int) -> int:
        """Liberties of the mover's string if a stone went on ``point``.

        Ignores captures: ordering asks this only for non-capturing moves.
        """
        bit = 1 << point
        me = self._bits_of(self.to_move)
        grp = _flood(bit, me | bit, self.geo)
        libs = self.geo.spread(grp) & (self.empty_bits() & ~bit)
        return libs.bit_count()

    def own_strings_adjacent(self, point: int) -> list[int]:
        own = self._bits_of(self.to_move)
        rem = self.geo.nbr_mask[point] & own
        out = []
        while rem:
            lsb = rem & -rem
            s = _flood(lsb, own, self.geo)
            out.append(s)
            rem &= ~s
        return out

    def _copy_base(self, other: "GobanGame") -> None:
        other.black = self.black
        other.white = self.white
        other.to_move = self.to_move
        other.hash = self.hash

    def recompute_hash(self) -> int:
        h = zobrist.board_hash(self.black, self.white)
        if self.to_move == SECOND:
            h ^= _SIDE_KEY
        return h

    def diagram(self) -> str:
        rows = []
        for r in range(self.height - 1, -1, -1):
            row = []
            for c in range(self.width):
                b = 1 << (r * self.width + c)
                row.append("X" if self.black & b else "O" if self.white & b else ".")
            rows.append("".join(row))
        return "\n".join(rows)

    @classmethod
    def from_diagram(cls, text: str, to_move: int | None = None, **kwargs):
        """Build a position from a diagram (rows top to bottom, ``.XO``).

        The default mover is inferred from stone parity, which is right for
        Atarigo and Nogo where nothing is ever captured.
        """
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
                    game.black |= b
                elif ch == "O":
                    game.white |= b
                elif ch != ".":
                    raise ValueError(f"bad cell {ch!r}")
        if to_move is None:
            stones = (game.black | game.white).bit_count()
            to_move = FIRST if stones % 2 == 0 else SECOND
        game.to_move = to_move
        game._diagram_fixup()
        game.hash = game.recompute_hash()
        return game

    def _diagram_fixup(self) -> None:
        """Hook for subclasses that keep derived state beyond the bitsets."""


class Atarigo(GobanGame):
    """First capture wins; self-capture is illegal; no move loses."""

    game_id = "atarigo"

    def __init__(self, width: int, height: int, counter: MoveCounter | None = None):
        super().__init__(width, height, counter)
        self.winner = 0  # player who captured, 0 while nobody has

    def copy(self) -> "Atarigo":
        other = Atarigo.__new__(Atarigo)
        other.width, other.height, other.geo = self.width, self.height, self.geo
        other.counter = self.counter
        self._copy_base(other)
        other.winner = self.winner
        return other

    def length_bound(self) -> int:
        return self.empty_bits().bit_count()

    def pseudo_moves(self) -> list[int]:
        out = []
        empty = self.empty_bits()
        while empty:
            lsb = empty & -empty
            out.append(lsb.bit_length() - 1)
            empty ^= lsb
        return out

    def legal_moves(self) -> list[int]:
        return [p for p in self.pseudo_moves() if self._move_kind(p) >= 0]

    def _move_kind(self, point: int) -> int:
        """-1 illegal, 0 quiet, 1 capturing (ends the game)."""
        geo = self.geo
        bit = 1 << point
        me = self._bits_of(self.to_move)
        enemy = self._bits_of(opponent(self.to_move))
        empty_after = self.empty_bits() & ~bit
        rem = geo.nbr_mask[point] & enemy
        while rem:
            lsb = rem & -rem
            s = _flood(lsb, enemy, geo)
            if not geo.spread(s) & empty_after:
                return 1
            rem &= ~s
        grp = _flood(bit, me | bit, geo)
        if not geo.spread(grp) & empty_after:
            return -1
        return 0

    def try_play(self, point: int):
        kind = self._move_kind(point)
        if kind < 0:
            return None
        mover = self.to_move
        token = (point, self.winner)
        if mover == FIRST:
            self.black |= 1 << point
        else:
            self.white |= 1 << point
        if kind == 1:
            # Captured stones stay on the board: the game is over.
            self.winner = mover
        self.hash ^= _STONE_KEYS[mover][point] ^ _SIDE_KEY
        self.to_move = opponent(mover)
        self.counter.n += 1
        return token

    def undo(self, token) -> None:
        point, winner = token
        self.to_move = opponent(self.to_move)
        if self.to_move == FIRST:
            self.black &= ~(1 << point)
        else:
            self.white &= ~(1 << point)
        self.hash ^= _STONE_KEYS[self.to_move][point] ^ _SIDE_KEY
        self.winner = winner

    def has_move(self) -> bool:
        empty = self.empty_bits()
        while empty:
            lsb = empty & -empty
            if self._move_kind(lsb.bit_length() - 1) >= 0:
                return True
            empty ^= lsb
        return False

    def is_terminal(self) -> bool:
        return self.winner != 0 or not self.has_move()

    def evaluate(self) -> int:
        if self.winner:
            return 1 if self.winner == self.to_move else -1
        if not self.has_move():
            return -1
        return 0


class Nogo(GobanGame):
    """Capturing (either colour) is illegal; no move loses."""

    game_id = "nogo"

    def copy(self) -> "Nogo":
        other = Nogo.__new__(Nogo)
        other.width, other.height, other.geo = self.width, self.height, self.geo
        other.counter = self.counter
        self._copy_base(other)
        return other

    def length_bound(self) -> int:
        return self.empty_bits().bit_count()

    def pseudo_moves(self) -> list[int]:
        out = []
        empty = self.empty_bits()
        while empty:
            lsb = empty & -empty
            out.append(lsb.bit_length() - 1)
            empty ^= lsb
        return out

    def legal_moves(self) -> list[int]:
        return [p for p in self.pseudo_moves() if self._is_legal(p)]

    def _is_legal(self, point: int) -> bool:
        geo = self.geo
        bit = 1 << point
        if self.to_move == FIRST:
            me, enemy = self.black, self.white
        else:
            me, enemy = self.white, self.black
        nbr = geo.nbr_mask[point]
        # Fast path: an empty neighbour rules out suicide, and with no
        # enemy string adjacent there is nothing to capture.  No floods.
        if nbr & ~(self.black | self.white) and not nbr & enemy:
            return True
        empty_after = geo.full & ~(self.black | self.white | bit)
        rem = nbr & enemy
        while rem:
            lsb = rem & -rem
            s = _flood(lsb, enemy, geo)
            if not geo.spread(s) & empty_after:
                return False  # would capture the enemy string
            rem &= ~s
        grp = _flood(bit, me | bit, geo)
        return bool(geo.spread(grp) & empty_after)  # suicide is a capture too

    def try_play(self, point: int):
        if not self._is_legal(point):
            return None
        mover = self.to_move
        if mover == FIRST:
            self.black |= 1 << point
        else:
            self.white |= 1 << point
        self.hash ^= _STONE_KEYS[mover][point] ^ _SIDE_KEY
        self.to_move = opponent(mover)
        self.counter.n += 1
        return point

    def undo(self, token) -> None:
        point = token
        self.to_move = opponent(self.to_move)
        if self.to_move == FIRST:
            self.black &= ~(1 << point)
        else:
            self.white &= ~(1 << point)
        self.hash ^= _STONE_KEYS[self.to_move][point] ^ _SIDE_KEY

    def has_move(self) -> bool:
        empty = self.empty_bits()
        while empty:
            lsb = empty & -empty
            if self._is_legal(lsb.bit_length() - 1):
                return True
            empty ^= lsb
        return False

    def is_terminal(self) -> bool:
        return not self.has_move()

    def evaluate(self) -> int:
        return -1 if not self.has_move() else 0


class Go(GobanGame):
    """Chinese scoring, positional superko, pass legal, move limit."""

    game_id = "go"

    def __init__(
        self,
        width: int,
        height: int,
        komi: float = 8.5,
        move_limit: int | None = None,
        counter: MoveCounter | None = None,
    ):
        super().__init__(width, height, counter)
        self.komi = komi
        self.move_limit = move_limit if move_limit is not None else 2 * width * height
        self.passes = 0
        self.moves_played = 0
        self.board_hash = 0
        # Exact superko record: (black, white) pairs seen so far, the
        # initial position included.  Positional superko means a grid can
        # recur at most once per game, so undo can simply remove.
        self.history = {(0, 0)}

    PASS_OFFSET = 0  # pass move id is self.geo.cells

    @property
    def pass_move(self) -> int:
        return self.geo.cells

    def copy(self) -> "Go":
        other = Go.__new__(Go)
        other.width, other.height, other.geo = self.width, self.height, self.geo
        other.counter = self.counter
        self._copy_base(other)
        other.komi = self.komi
        other.move_limit = self.move_limit
        other.passes = self.passes
        other.moves_played = self.moves_played
        other.board_hash = self.board_hash
        other.history = set(self.history)
        return other

    def length_bound(self) -> int:
        return self.move_limit - self.moves_played

    def _full_hash(self) -> int:
        h = self.board_hash
        if self.to_move == SECOND:
            h ^= _SIDE_KEY
        if self.passes == 1:
            h ^= _PASS_KEY
        return h

    def recompute_hash(self) -> int:
        h = zobrist.board_hash(self.black, self.white)
        if self.to_move == SECOND:
            h ^= _SIDE_KEY
        if self.passes == 1:
            h ^= _PASS_KEY
        return h

    def _stone_move(self, point: int):
        """(captured_bits, new_black, new_white) or None if illegal.

        Illegal means occupied, suicide, or positional superko.  The move
        limit and the two-pass rule are terminal conditions, not legality.
        """
        geo = self.geo
        bit = 1 << point
        if (self.black | self.white) & bit:
            return None
        mover = self.to_move
        me = self.black if mover == FIRST else self.white
        enemy = self.white if mover == FIRST else self.black
        empty_after = geo.full & ~(self.black | self.white | bit)
        captured = 0
        rem = geo.nbr_mask[point] & enemy
        while rem:
            lsb = rem & -rem
            s = _flood(lsb, enemy, geo)
            if not geo.spread(s) & empty_after:
                captured |= s
            rem &= ~s
        new_enemy = enemy & ~captured
        new_me = me | bit
        grp = _flood(bit, new_me, geo)
        if not geo.spread(grp) & (geo.full & ~(new_me | new_enemy)):
            return None  # suicide
        if mover == FIRST:
            pos = (new_me, new_enemy)
        else:
            pos = (new_enemy, new_me)
        if pos in self.history:
            return None  # positional superko
        return captured, pos[0], pos[1]

    def pseudo_moves(self) -> list[int]:
        out = []
        empty = self.empty_bits()
        while empty:
            lsb = empty & -empty
            out.append(lsb.bit_length() - 1)
            empty ^= lsb
        out.append(self.pass_move)
        return out

    def legal_moves(self) -> list[int]:
        out = [p for p in self.pseudo_moves()[:-1] if self._stone_move(p) is not None]
        out.append(self.pass_move)
        return out

    def has_move(self) -> bool:
        return True  # pass is always legal

    def try_play(self, move: int):
        if self.is_terminal():
            return None
        mover = self.to_move
        if move == self.pass_move:
            token = (move, 0, self.passes)
            self.passes += 1
        else:
            res = self._stone_move(move)
            if res is None:
                return None
            captured, new_black, new_white = res
            token = (move, captured, self.passes)
            h = self.board_hash ^ _STONE_KEYS[mover][move]
            enemy = opponent(mover)
            rem = captured
            while rem:
                lsb = rem & -rem
                h ^= _STONE_KEYS[enemy][lsb.bit_length() - 1]
                rem ^= lsb
            self.black, self.white = new_black, new_white
            self.board_hash = h
            self.history.add((new_black, new_white))
            self.passes = 0
        self.moves_played += 1
        self.to_move = opponent(mover)
        self.hash = self._full_hash()
        self.counter.n += 1
        return token

    def undo(self, token) -> None:
        move, captured, old_passes = token
        mover = opponent(self.to_move)
        if move == self.pass_move:
            self.passes = old_passes
        else:
            self.history.discard((self.black, self.white))
            bit = 1 << move
            enemy = opponent(mover)
            h = self.board_hash ^ _STONE_KEYS[mover][move]
            rem = captured
            while rem:
                lsb = rem & -rem
                h ^= _STONE_KEYS[enemy][lsb.bit_length() - 1]
                rem ^= lsb
            if mover == FIRST:
                self.black &= ~bit
                self.white |= captured
            else:
                self.white &= ~bit
                self.black |= captured
            self.board_hash = h
            self.passes = old_passes
        self.moves_played -= 1
        self.to_move = mover
        self.hash = self._full_hash()

    def is_terminal(self) -> bool:
        return self.passes >= 2 or self.moves_played >= self.move_limit

    def area_score(self) -> float:
        """Black area minus White area minus komi (Chinese counting)."""
        geo = self.geo
        black_area = self.black.bit_count()
        white_area = self.white.bit_count()
        empty = self.empty_bits()
        while empty:
            lsb = empty & -empty
            region = _flood(lsb, empty, geo)
            border = geo.spread(region) & ~self.empty_bits()
            if border and not border & self.white:
                black_area += region.bit_count()
            elif border and not border & self.black:
                white_area += region.bit_count()
            empty &= ~region
        return black_area - white_area - self.komi

    def evaluate(self) -> int:
        if self.passes >= 2:
            score = self.area_score()
            black_wins = score > 0
            if self.to_move == FIRST:
                return 1 if black_wins else -1
            return -1 if black_wins else 1
        return 0  # move-limit cutoff or non-terminal: nothing proven

    def _diagram_fixup(self) -> None:
        self.board_hash = zobrist.board_hash(self.black, self.white)
        self.history = {(self.black, self.white)}

    def diagram(self) -> str:
        base = super().diagram()
        return f"{base}\npasses={self.passes} moves={self.moves_played} komi={self.komi}"


def _raise_unknown(game: str):
    raise ValueError(f"unknown goban game {game!r}")


def make_goban(config: GameConfig, counter: MoveCounter | None = None) -> GobanGame:
    if config.game == "atarigo":
        return Atarigo(config.width, config.height, counter)
    if config.game == "nogo":
        return Nogo(config.width, config.height, counter)
    if config.game == "go":
        return Go(config.width, config.height, config.komi, config.move_limit, counter)
    _raise_unknown(config.game)
