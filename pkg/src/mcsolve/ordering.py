"""Move-ordering functions: lower score = tried earlier.

Three layers, matching how the solvers consume them:

* ``order_mc`` turns Monte Carlo statistics into a score: the more
  playouts went through a move (or the higher its learned policy weight,
  when the position was not sampled enough), the earlier it is tried.
* Per-game heuristics put forced tactical moves (game-ending captures,
  atari escapes, supported runs) in front, deferring quiet moves to the
  Monte Carlo score or to a flat constant.
* ``make_orderer`` packages the right heuristic into a per-node vector
  function for the solvers; ``select_next`` is the incremental
  selection-sort used to consume the scores lazily.
"""

from __future__ import annotations

import heapq

from .core import opponent

MC_BASE = 1_000_000_000


def order_mc(board, code: int, mcts_tt, policy) -> float:
    """Monte Carlo ordering score for the move with ``code``.

    Starts from the learned policy weight; when the position has more
    than 100 recorded playouts and a legal move with this code has a
    positive playout count, that count takes over (the last matching
    legal move wins).  Returns MC_BASE - 1000 * ppaf.
    """
    ppaf = policy.weights[code] if policy is not None else 0.0
    if mcts_tt:
        entry = mcts_tt.get(board.hash)
        if entry is not None and entry.total > 100:
            by_move = dict(zip(entry.moves, entry.counts))
            for move in board.legal_moves():
                n = by_move.get(move, 0)
                if n > 0 and board.move_code(move) == code:
                    ppaf = n
    return MC_BASE - 1000 * ppaf


# -- game heuristics --------------------------------------------------
# Each takes mc_fn: either None (Monte Carlo disabled) or a callable
# (board, move) -> score used for the quiet-move fallback.


def _atarigo_score(board, move: int, mc_fn, clamp: bool):
    min_order = 361
    for string in board.enemy_strings_adjacent(move):
        libs = board.string_liberty_count(string)
        if libs == 1:
            return 0  # capture: ends the game
        nb = libs - 4 * board.empty_adjacent(move)
        if nb < min_order:
            min_order = nb
    if _escapes_atari(board, move):
        return 1
    if min_order == 361:  # no adjacent enemy string: quiet move
        if mc_fn is not None:
            return mc_fn(board, move)
        return 20 - board.empty_adjacent(move)
    if clamp and min_order < 2:
        return 2
    return min_order


def _escapes_atari(board, move: int) -> bool:
    """True when the move rescues an own string that had one liberty.

    Rescue means the merged string ends with at least two liberties;
    staying at one liberty only postpones the capture.
    """
    for string in board.own_strings_adjacent(move):
        if board.string_liberty_count(string) == 1:
            return board.merged_liberty_count_after(move) >= 2
    return False


def _pawn_score(board, move: int, mc_fn, with_support_rule: bool):
    mover = board.to_move
    cells = board.geo.cells
    frm, to = divmod(move, cells)
    to_bit = 1 << to
    if to_bit & board.far_row_mask(mover):
        return 0  # reaches the far row: wins on the spot
    enemy = opponent(mover)
    if board._bits_of(enemy) & to_bit and board.rank_from_home(mover, to) <= 3:
        return 1  # capture of a piece already deep in our half
    if with_support_rule and board.rank_from_home(mover, to) >= board.height - 2:
        support = (board.attackers(to, mover) & ~(1 << frm)).bit_count()
        attack = board.attackers(to, enemy).bit_count()
        if support > attack:
            return 2  # advanced destination we defend better than they do
    if mc_fn is not None:
        return mc_fn(board, move)
    return 100


# -- public per-move entry points --------------------------------------


def _single_mc_fn(mcts_tt, policy):
    return lambda board, move: order_mc(board, board.move_code(move), mcts_tt, policy)


def order_atarigo(board, move: int, mc_enabled: bool, mcts_tt=None, policy=None,
                  clamp: bool = False):
    """Captures 0, atari escapes 1, then pressure/quiet scores."""
    mc_fn = _single_mc_fn(mcts_tt, policy) if mc_enabled else None
    return _atarigo_score(board, move, mc_fn, clamp)


def order_knightthrough(board, move: int, mc_enabled: bool, mcts_tt=None, policy=None,
                        clamp: bool = False):
    """Wins 0, defensive captures 1, supported runs 2, then MC or 100."""
    mc_fn = _single_mc_fn(mcts_tt, policy) if mc_enabled else None
    return _pawn_score(board, move, mc_fn, with_support_rule=True)


def order_breakthrough(board, move: int, mc_enabled: bool, mcts_tt=None, policy=None,
                       clamp: bool = False):
    """Wins 0, defensive captures 1, then MC or 100."""
    mc_fn = _single_mc_fn(mcts_tt, policy) if mc_enabled else None
    return _pawn_score(board, move, mc_fn, with_support_rule=False)


def order_default(board, code: int, mc_enabled: bool, mcts_tt=None, policy=None):
    """Monte Carlo score when enabled, else flat (generation order)."""
    if mc_enabled:
        return order_mc(board, code, mcts_tt, policy)
    return 0


# -- solver-facing batched interface ------------------------------------


def make_orderer(game_id: str, mc_enabled: bool, mcts_tt=None, policy=None,
                 clamp: bool = False):
    """Build ``orderer(board, moves) -> scores`` for one solver run.

    Semantically identical to mapping the per-move functions over the
    candidates, but the Monte Carlo lookup resolves the node's entry once:
    matching-code playout counts become a dict instead of a scan per move.
    """
    weights = policy.weights if policy is not None else None

    def batched_mc_fn(board):
        counts_by_code = None
        if mcts_tt:
            entry = mcts_tt.get(board.hash)
            if entry is not None and entry.total > 100:
                counts_by_code = {}
                for code, n in zip(entry.codes, entry.counts):
                    if n > 0:
                        counts_by_code[code] = n

        if counts_by_code is None:
            if weights is None:
                return lambda board, move: MC_BASE
            return lambda board, move: MC_BASE - 1000 * weights[board.move_code(move)]

        def mc_fn(board, move):
            code = board.move_code(move)
            ppaf = counts_by_code.get(code)
            if ppaf is None:
                ppaf = weights[code] if weights is not None else 0.0
            return MC_BASE - 1000 * ppaf

        return mc_fn

    if game_id == "atarigo":
        def orderer(board, moves):
            mc_fn = batched_mc_fn(board) if mc_enabled else None
            return [_atarigo_score(board, m, mc_fn, clamp) for m in moves]
    elif game_id in ("knightthrough", "breakthrough"):
        support = game_id == "knightthrough"
        def orderer(board, moves):
            mc_fn = batched_mc_fn(board) if mc_enabled else None
            return [_pawn_score(board, m, mc_fn, support) for m in moves]
    elif mc_enabled:
        def orderer(board, moves):
            mc_fn = batched_mc_fn(board)
            return [mc_fn(board, m) for m in moves]
    else:
        def orderer(board, moves):
            return [0] * len(moves)

    return orderer


def select_next(moves, scores, k: int):
    """The k-th move in ascending score order, ties by ordinal.

    Partial selection (no full sort): iterating k = 0..n-1 enumerates the
    stable sort order one element at a time.
    """
    if not 0 <= k < len(moves):
        raise IndexError("k out of range")
    pairs = heapq.nsmallest(k + 1, zip(scores, range(len(moves))))
    return moves[pairs[-1][1]]
