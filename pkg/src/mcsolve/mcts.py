"""Preliminary Monte Carlo search whose statistics drive move ordering.

One search couples two learners:

* a GRAVE tree (mean values blended with AMAF statistics taken from the
  closest ancestor that has seen enough playouts), and
* a playout policy over move codes, adapted once per playout: the winner's
  played codes gain weight, every legal alternative at those positions
  loses weight proportional to its current softmax probability.

The tree is an unbounded open hash keyed by position hash, so transposed
lines share statistics.  After ``run_mcts`` both structures are read-only
and feed the move-ordering functions of the solvers.
"""

from __future__ import annotations

import math
import random
import struct
from dataclasses import dataclass

from .core import Game, opponent

_CLAMP = 50.0  # exp() guard; keeps weights meaningful over 1e7 adaptations


@dataclass
class MctsConfig:
    playouts: int = 0
    grave_ref: int = 50
    grave_bias: float = 1e-5
    seed: int = 0

    def __post_init__(self):
        if self.playouts < 0:
            raise ValueError("playouts must be >= 0")
        if self.grave_ref < 1:
            raise ValueError("grave_ref must be >= 1")


class PolicyTable:
    """Dense weights over move codes, adapted by the playout learner."""

    __slots__ = ("weights", "alpha")

    def __init__(self, code_space: int, alpha: float = 1.0):
        self.weights = [0.0] * code_space
        self.alpha = alpha

    def exp_weight(self, code: int) -> float:
        w = self.weights[code]
        if w > _CLAMP:
            w = _CLAMP
        elif w < -_CLAMP:
            w = -_CLAMP
        return math.exp(w)


class MctsEntry:
    """Per-position statistics: per-move visit counts plus AMAF by code."""

    __slots__ = ("full_hash", "to_move", "total", "moves", "codes", "counts", "wins", "amaf")

    def __init__(self, full_hash: int, to_move: int, moves: list[int], codes: list[int]):
        self.full_hash = full_hash
        self.to_move = to_move
        self.total = 0
        self.moves = moves
        self.codes = codes
        self.counts = [0] * len(moves)
        self.wins = [0] * len(moves)
        self.amaf: dict[int, list[int]] = {}


def select_move_grave(entry: MctsEntry, amaf_source: MctsEntry, grave_bias: float) -> int:
    """Index of the move to descend into.

    Unvisited moves are taken first in ordinal order.  Otherwise the move
    maximizing (1-beta) * mean + beta * amafMean wins, with
    beta = amafP / (amafP + p + bias * amafP * p); ties keep the lowest
    ordinal.  AMAF statistics come from ``amaf_source`` (an ancestor with
    enough playouts, or the entry itself).
    """
    counts = entry.counts
    for i, n in enumerate(counts):
        if n == 0:
            return i
    wins = entry.wins
    codes = entry.codes
    amaf = amaf_source.amaf
    best_i = 0
    best_s = -1.0
    for i, n in enumerate(counts):
        mean = wins[i] / n
        stats = amaf.get(codes[i])
        if stats is not None and stats[0] > 0:
            an = stats[0]
            beta = an / (an + n + grave_bias * an * n)
            score = (1.0 - beta) * mean + beta * (stats[1] / an)
        else:
            score = mean
        if score > best_s:
            best_s = score
            best_i = i
    return best_i


def playout(state: Game, policy: PolicyTable, rng: random.Random):
    """Play ``state`` to the end sampling softmax(policy) at each step.

    The state is advanced in place.  Returns ``(winner, moves)`` where
    winner is 0 when nothing was proven (Go cut off by the move limit).
    """
    moves_played: list[int] = []
    while not state.is_terminal():
        legal = state.legal_moves()
        if len(legal) == 1:
            move = legal[0]
        else:
            weights = [policy.exp_weight(state.move_code(m)) for m in legal]
            pick = rng.random() * math.fsum(weights)
            acc = 0.0
            move = legal[-1]
            for m, w in zip(legal, weights):
                acc += w
                if pick < acc:
                    move = m
                    break
        state.play_inplace(move)
        moves_played.append(move)
    value = state.evaluate()
    if value == 0:
        winner = 0
    elif value > 0:
        winner = state.to_move
    else:
        winner = opponent(state.to_move)
    return winner, moves_played


def adapt(winner: int, board: Game, player: int, playout_moves: list[int], policy: PolicyTable) -> PolicyTable:
    """One policy-adaptation pass over a finished playout.

    Every exponential is computed from the policy as it was before the
    pass; the accumulated changes are committed at the end, so the update
    order inside one playout does not feed back on itself.  ``board`` is
    not modified (the replay runs on a copy).
    """
    alpha = policy.alpha
    delta: dict[int, float] = {}
    g = board.copy()
    for move in playout_moves:
        if winner == player:
            played_code = g.move_code(move)
            delta[played_code] = delta.get(played_code, 0.0) + alpha
            legal = g.legal_moves()
            codes = [g.move_code(m) for m in legal]
            exps = [policy.exp_weight(c) for c in codes]
            z = math.fsum(exps)
            for c, e in zip(codes, exps):
                delta[c] = delta.get(c, 0.0) - alpha * e / z
        g.play_inplace(move)
        player = opponent(player)
    weights = policy.weights
    for code, d in delta.items():
        weights[code] += d
    return policy


def backpropagate(path: list[tuple[MctsEntry, int]], episode: list[tuple[int, int]], winner: int) -> None:
    """Update visit/win counters and AMAF statistics along ``path``.

    ``episode`` is the whole playout as (mover, code) pairs, tree part
    included; path entry k corresponds to episode position k.  A node's
    AMAF statistics cover every code played later (position k included)
    by the node's own mover.
    """
    for k, (entry, idx) in enumerate(path):
        entry.total += 1
        entry.counts[idx] += 1
        won = 1 if winner == entry.to_move else 0
        entry.wins[idx] += won
        amaf = entry.amaf
        mover = entry.to_move
        for j in range(k, len(episode)):
            who, code = episode[j]
            if who != mover:
                continue
            stats = amaf.get(code)
            if stats is None:
                amaf[code] = [1, won]
            else:
                stats[0] += 1
                stats[1] += won
    return None


def run_mcts(root: Game, config: MctsConfig):
    """Run the full preliminary search; returns ``(tt, policy)``.

    The tree adds one node per playout; the policy is adapted once per
    playout from the expansion point through the playout moves.
    """
    if root.is_terminal():
        raise ValueError("root is terminal")
    policy = PolicyTable(root.code_space)
    tt: dict[int, MctsEntry] = {}
    rng = random.Random(config.seed)
    grave_ref = config.grave_ref
    grave_bias = config.grave_bias
    for _ in range(config.playouts):
        g = root.copy()
        path: list[tuple[MctsEntry, int]] = []
        episode: list[tuple[int, int]] = []
        new_entry = None
        while not g.is_terminal():
            entry = tt.get(g.hash)
            if entry is None:
                moves = g.legal_moves()
                codes = [g.move_code(m) for m in moves]
                new_entry = MctsEntry(g.hash, g.to_move, moves, codes)
                tt[g.hash] = new_entry
                break
            source = entry
            if entry.total < grave_ref:
                for anc, _ in reversed(path):
                    if anc.total >= grave_ref:
                        source = anc
                        break
                else:
                    if path:
                        source = path[0][0]
            idx = select_move_grave(entry, source, grave_bias)
            move = entry.moves[idx]
            if g.try_play(move) is None:
                # Hash-equal Go states can disagree on superko history;
                # abandon the tree here and let the playout evaluate.
                break
            path.append((entry, idx))
            episode.append((entry.to_move, entry.codes[idx]))
        leaf_board = g.copy()
        leaf_player = g.to_move
        winner, playout_moves = playout(g, policy, rng)
        if new_entry is not None and playout_moves:
            # The playout's first move is the expanded node's path edge,
            # which keeps nbPlayouts = sum of edge counts at every node.
            first = playout_moves[0]
            path.append((new_entry, new_entry.moves.index(first)))
        for mover, code in _replay_codes(leaf_board, playout_moves):
            episode.append((mover, code))
        backpropagate(path, episode, winner)
        adapt(winner, leaf_board, leaf_player, playout_moves, policy)
    return tt, policy


def _replay_codes(board: Game, moves: list[int]):
    """(mover, code) for each playout move, replayed on a scratch copy."""
    g = board.copy()
    out = []
    for move in moves:
        out.append((g.to_move, g.move_code(move)))
        g.play_inplace(move)
    return out


# -- snapshot ------------------------------------------------------------

_MAGIC = b"MCOS"
_VERSION = 1


def save_snapshot(path: str, tt: dict[int, MctsEntry], policy: PolicyTable) -> None:
    """Binary dump of the policy and the tree summary (AMAF excluded)."""
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<HI", _VERSION, len(policy.weights)))
        f.write(struct.pack("<d", policy.alpha))
        f.write(struct.pack(f"<{len(policy.weights)}d", *policy.weights))
        f.write(struct.pack("<I", len(tt)))
        for h, entry in tt.items():
            f.write(struct.pack("<QBIH", h, entry.to_move, entry.total, len(entry.moves)))
            for m, c, n, w in zip(entry.moves, entry.codes, entry.counts, entry.wins):
                f.write(struct.pack("<IIII", m, c, n, w))


def load_snapshot(path: str):
    """Rebuild ``(tt, policy)`` from ``save_snapshot`` output.

    AMAF statistics are not part of the snapshot; reloaded entries carry
    empty AMAF maps, which move ordering never consults.
    """
    with open(path, "rb") as f:
        if f.read(4) != _MAGIC:
            raise ValueError("not a snapshot file")
        version, code_space = struct.unpack("<HI", f.read(6))
        if version != _VERSION:
            raise ValueError(f"unsupported snapshot version {version}")
        (alpha,) = struct.unpack("<d", f.read(8))
        policy = PolicyTable(code_space, alpha)
        policy.weights = list(struct.unpack(f"<{code_space}d", f.read(8 * code_space)))
        (n_entries,) = struct.unpack("<I", f.read(4))
        tt: dict[int, MctsEntry] = {}
        for _ in range(n_entries):
            h, to_move, total, n_moves = struct.unpack("<QBIH", f.read(15))
            moves, codes, counts, wins = [], [], [], []
            for _ in range(n_moves):
                m, c, n, w = struct.unpack("<IIII", f.read(16))
                moves.append(m)
                codes.append(c)
                counts.append(n)
                wins.append(w)
            entry = MctsEntry(h, to_move, moves, codes)
            entry.total = total
            entry.counts = counts
            entry.wins = wins
            tt[h] = entry
        return tt, policy
