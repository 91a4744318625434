"""Exact solvers: depth-first alpha-beta with a transposition table,
iterative-deepening null-window alpha-beta, and a two-level proof number
search, all parameterized by a move-ordering strategy.

Values are on the {-1, 0, +1} scale of ``Game.evaluate``.  A value is
*exact* when it was derived from terminal evaluations only; 0 is never
exact (it means an evaluation leaf or a Go move-limit cutoff was
involved).  The alpha-beta is fail-hard: a cut returns beta and a fail
low returns the original alpha, but the transposition table may still
record a stronger exact fact than the windowed return value (for example
an all-children-exact loss found while failing low), which is what lets
iterative deepening detect proven losses early.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .core import Game, MoveCounter
from .mcts import MctsConfig, run_mcts
from .ordering import make_orderer

ALGORITHMS = ("pn2", "id-ab-tt", "ab-tt", "id-ab-tt-mc", "ab-tt-mc")

_INF = float("inf")


class SearchAbort(Exception):
    """Raised inside a search when a time or node budget runs out."""


@dataclass
class SearchLimits:
    time_limit: float = 86400.0
    node_limit: int | None = None       # moves played by the solver phase
    pn_tree_limit: int = 4_000_000      # main-tree memory bound for pn2


@dataclass
class SolveReport:
    value: int                 # +1 / -1, or 0 when unsolved
    result: str                # Won / Lost / Unsolved
    moves_searched: int        # play() calls during the solver phase
    wall_time: float           # MCTS phase + solver phase
    solver_time: float
    mcts_time: float
    playouts: int
    algorithm: str
    seed: int
    unsolved: bool = False
    bound_moves: int | None = None   # moves searched before the abort
    bound_time: float | None = None  # seconds elapsed before the abort


class TranspositionTable:
    """Fixed-size always-replace table, slot = hash mod size.

    The default 20 bits give exactly 2**20 - 1 = 1,048,575 slots.  Probes
    verify the full 64-bit hash; distinct states sharing the full hash are
    an accepted risk.
    """

    __slots__ = ("size", "keys", "res", "exact", "move", "depth")

    def __init__(self, bits: int = 20):
        self.size = (1 << bits) - 1
        self.keys = [-1] * self.size
        self.res = [0] * self.size
        self.exact = bytearray(self.size)
        self.move = [-1] * self.size
        self.depth = [0] * self.size

    def probe(self, h: int):
        i = h % self.size
        if self.keys[i] != h:
            return None
        return self.res[i], self.exact[i], self.move[i], self.depth[i]

    def store(self, h: int, res: int, exact: bool, move: int, depth: int) -> None:
        i = h % self.size
        self.keys[i] = h
        self.res[i] = res
        self.exact[i] = 1 if exact else 0
        self.move[i] = move
        self.depth[i] = depth


class AlphaBeta:
    """Negamax alpha-beta over a mutable game, driven by an orderer."""

    def __init__(self, game: Game, orderer, tt: TranspositionTable | None,
                 limits: SearchLimits):
        self.game = game
        self.orderer = orderer
        self.tt = tt
        self.limits = limits
        self.counter = game.counter
        self._node_stop = (
            self.counter.n + limits.node_limit if limits.node_limit else None
        )
        self._deadline = time.monotonic() + limits.time_limit
        self._tick = 0

    def _check_limits(self) -> None:
        if self._node_stop is not None and self.counter.n >= self._node_stop:
            raise SearchAbort("node budget exceeded")
        self._tick -= 1
        if self._tick <= 0:
            self._tick = 4096
            if time.monotonic() > self._deadline:
                raise SearchAbort("time limit exceeded")

    def search(self, depth: int, alpha: int, beta: int):
        """Returns (value, exact) for the current game state.

        Fail-hard: the value is beta on a cut and the original alpha on a
        fail low.  ``exact`` is True only when the returned value is the
        true game value, established from terminal evaluations alone.
        """
        g = self.game
        if g.is_terminal():
            v = g.evaluate()
            return v, v != 0
        if depth == 0:
            return 0, False
        self._check_limits()
        tt = self.tt
        h = g.hash
        tt_move = -1
        if tt is not None:
            hit = tt.probe(h)
            if hit is not None:
                res, exact, mv, _d = hit
                if exact:
                    return res, True
                tt_move = mv
        cands = g.pseudo_moves()
        scores = self.orderer(g, cands)
        n = len(cands)
        used = bytearray(n)
        a = alpha
        best_eval = -2
        best_move = -1
        all_exact = True
        played_any = False
        search = self.search
        # The table move goes first; after that, incremental selection of
        # the lowest remaining score (ordinal tie-break).
        if tt_move >= 0:
            try:
                first = cands.index(tt_move)
            except ValueError:
                first = -1  # hash collision: stored move not a candidate here
        else:
            first = -1
        for _round in range(n):
            if first >= 0:
                i = first
                first = -2
            else:
                i = -1
                best_s = None
                for j in range(n):
                    if not used[j]:
                        s = scores[j]
                        if best_s is None or s < best_s:
                            best_s = s
                            i = j
                if i < 0:
                    break
            used[i] = 1
            move = cands[i]
            tok = g.try_play(move)
            if tok is None:
                continue
            played_any = True
            v, ex = search(depth - 1, -beta, -a)
            g.undo(tok)
            ev = -v
            if ev > best_eval:
                best_eval = ev
                best_move = move
            if not ex:
                all_exact = False
            if ev > a:
                a = ev
                if a >= beta:
                    if tt is not None:
                        if ex:
                            # ev can exceed beta (win found under a null
                            # window); keep the stronger exact fact.
                            tt.store(h, ev, True, move, depth)
                        else:
                            tt.store(h, beta, False, move, depth)
                    return beta, (ex and ev == beta)
        if not played_any:
            # Candidate superset contained no legal move; by the rules this
            # is a terminal state (handled above for honest generators).
            v = g.evaluate()
            return v, v != 0
        if all_exact:
            # Every child value was true, so the max is the true value,
            # even when it lies below the window.
            if tt is not None:
                tt.store(h, best_eval, True, best_move, depth)
            return a, a == best_eval
        if tt is not None:
            tt.store(h, a, False, best_move, depth)
        return a, False


# -- proof number search -------------------------------------------------


class _PNNode:
    __slots__ = ("pn", "dn", "move", "children")

    def __init__(self, move: int = -1, pn: float = 1, dn: float = 1):
        self.move = move
        self.pn = pn
        self.dn = dn
        self.children: list["_PNNode"] | None = None


def _winner_of(g: Game) -> int:
    """0 when the terminal value proves nothing (Go move-limit cutoff)."""
    v = g.evaluate()
    if v == 1:
        return g.to_move
    if v == -1:
        return 3 - g.to_move
    return 0


class ProofNumberSearch:
    """Best-first (dis)proof search that a fixed player wins.

    ``two_level`` makes it the main search of a PN-squared solver: every
    leaf expansion first runs a secondary plain search from the leaf with
    a node budget equal to the current main-tree size, and reuses the
    secondary root children's numbers when the budget runs out
    inconclusively.
    """

    def __init__(self, game: Game, root_player: int, orderer,
                 limits: SearchLimits, deadline: float,
                 two_level: bool = False, node_budget: int | None = None):
        self.game = game
        self.root_player = root_player
        self.orderer = orderer
        self.limits = limits
        self.deadline = deadline
        self.two_level = two_level
        self.node_budget = node_budget
        self.tree_size = 1
        self.root = _PNNode()
        g = game
        if g.is_terminal():
            won = _winner_of(g) == root_player
            self.root.pn, self.root.dn = (0, _INF) if won else (_INF, 0)

    def _update(self, node: _PNNode, or_node: bool) -> None:
        children = node.children
        if or_node:
            pn = _INF
            dn = 0
            for c in children:
                if c.pn < pn:
                    pn = c.pn
                dn += c.dn
        else:
            pn = 0
            dn = _INF
            for c in children:
                if c.dn < dn:
                    dn = c.dn
                pn += c.pn
        node.pn, node.dn = pn, dn

    def _expand(self, g: Game, node: _PNNode, seed_numbers: dict | None) -> None:
        cands = g.pseudo_moves()
        scores = self.orderer(g, cands)
        n = len(cands)
        used = bytearray(n)
        children = []
        for _ in range(n):
            best = None
            pick = -1
            for j in range(n):
                if not used[j]:
                    s = scores[j]
                    if best is None or s < best:
                        best = s
                        pick = j
            if pick < 0:
                break
            used[pick] = 1
            move = cands[pick]
            tok = g.try_play(move)
            if tok is None:
                continue
            child = _PNNode(move)
            if g.is_terminal():
                won = _winner_of(g) == self.root_player
                child.pn, child.dn = (0, _INF) if won else (_INF, 0)
            elif seed_numbers is not None and move in seed_numbers:
                child.pn, child.dn = seed_numbers[move]
            g.undo(tok)
            children.append(child)
        node.children = children
        self.tree_size += len(children)
        if not children:
            # No legal candidate: terminal by the rules of every game in
            # scope, so is_terminal should have caught it; stay safe.
            node.children = None
            won = _winner_of(g) == self.root_player
            node.pn, node.dn = (0, _INF) if won else (_INF, 0)

    def run(self) -> int:
        """+1 proven, -1 disproven, 0 budget exhausted (secondary only)."""
        root = self.root
        g = self.game
        rp = self.root_player
        while root.pn != 0 and root.dn != 0:
            if self.node_budget is not None and self.tree_size >= self.node_budget:
                return 0
            if self.node_budget is None and self.tree_size >= self.limits.pn_tree_limit:
                raise SearchAbort("proof tree memory bound exceeded")
            if time.monotonic() > self.deadline:
                raise SearchAbort("time limit exceeded")
            if (self.limits.node_limit is not None
                    and g.counter.n >= self._node_stop):
                raise SearchAbort("node budget exceeded")
            node = root
            path = [root]
            tokens = []
            while node.children is not None:
                or_node = g.to_move == rp
                nxt = None
                if or_node:
                    target = node.pn
                    for c in node.children:
                        if c.pn == target:
                            nxt = c
                            break
                else:
                    target = node.dn
                    for c in node.children:
                        if c.dn == target:
                            nxt = c
                            break
                tokens.append(g.play_inplace(nxt.move))
                node = nxt
                path.append(node)
            seed = None
            solved = False
            if self.two_level:
                budget = self.tree_size
                secondary = ProofNumberSearch(
                    g, rp, self.orderer, self.limits, self.deadline,
                    two_level=False, node_budget=budget,
                )
                secondary._node_stop = self._node_stop
                status = secondary.run()
                if status == 1:
                    node.pn, node.dn = 0, _INF
                    solved = True
                elif status == -1:
                    node.pn, node.dn = _INF, 0
                    solved = True
                elif secondary.root.children is not None:
                    seed = {
                        c.move: (c.pn, c.dn) for c in secondary.root.children
                    }
            if not solved:
                self._expand(g, node, seed)
                if node.children:
                    self._update(node, g.to_move == rp)
            for i in range(len(path) - 2, -1, -1):
                g.undo(tokens[i])
                self._update(path[i], g.to_move == rp)
        return 1 if root.pn == 0 else -1

    _node_stop = float("inf")


# -- public solver entry points -------------------------------------------


def _ab_value_to_report(v: int) -> int:
    # 0 can only come from Go: the move limit truncated every better line,
    # so the first player cannot force a win; report it as a loss.
    return 1 if v == 1 else -1


def _run_ab_full(root: Game, orderer, tt_bits: int, limits: SearchLimits) -> int:
    tt = TranspositionTable(tt_bits) if tt_bits > 0 else None
    ab = AlphaBeta(root, orderer, tt, limits)
    v, _exact = ab.search(root.length_bound(), -1, 1)
    return _ab_value_to_report(v)


def _run_ab_iterative(root: Game, orderer, tt_bits: int, limits: SearchLimits) -> int:
    tt = TranspositionTable(tt_bits) if tt_bits > 0 else None
    ab = AlphaBeta(root, orderer, tt, limits)
    bound = root.length_bound()
    for depth in range(1, bound + 1):
        v, exact = ab.search(depth, 0, 1)
        if v == 1:
            return 1  # null-window wins are terminal-derived, hence proven
        if exact:
            return -1  # fail low with every child exact: proven loss
        if tt is not None:
            hit = tt.probe(root.hash)
            if hit is not None and hit[1] and hit[0] == -1:
                return -1  # the fail low recorded a proven loss in the table
    return -1  # no win within the longest possible game


def _run_pn2(root: Game, orderer, limits: SearchLimits) -> int:
    deadline = time.monotonic() + limits.time_limit
    pn = ProofNumberSearch(root, root.to_move, orderer, limits, deadline,
                           two_level=True)
    if limits.node_limit is not None:
        pn._node_stop = root.counter.n + limits.node_limit
    status = pn.run()
    return 1 if status == 1 else -1


def solve(root: Game, algorithm: str, mcts_config: MctsConfig | None = None,
          tt_bits: int = 20, limits: SearchLimits | None = None,
          clamp_heuristic: bool = False) -> SolveReport:
    """Run one solver variant on ``root`` and report the outcome.

    The -mc variants run the Monte Carlo phase first and order moves with
    its statistics; the others use the per-game heuristics alone.  The
    reported movesSearched covers the solver phase only; playouts are
    reported separately (wall_time covers both).
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if root.is_terminal():
        # Degenerate but legal instance (Nogo 1x1 has no legal move at
        # all): the game is already decided, nothing to search.
        value = root.evaluate()
        seed = mcts_config.seed if mcts_config is not None else 0
        return SolveReport(
            value=value, result="Won" if value == 1 else "Lost",
            moves_searched=0, wall_time=0.0, solver_time=0.0,
            mcts_time=0.0, playouts=0, algorithm=algorithm, seed=seed,
        )
    if limits is None:
        limits = SearchLimits()
    # Work on a scratch copy (same shared move counter): an aborted search
    # leaves its board mid-line, and the caller keeps a clean root.
    root = root.copy()
    counter = root.counter
    wall_start = time.monotonic()
    mc = algorithm.endswith("-mc")
    mcts_time = 0.0
    playouts = 0
    seed = mcts_config.seed if mcts_config is not None else 0
    mcts_tt = policy = None
    if mc:
        cfg = mcts_config if mcts_config is not None else MctsConfig()
        seed = cfg.seed
        t0 = time.monotonic()
        mcts_tt, policy = run_mcts(root, cfg)
        mcts_time = time.monotonic() - t0
        playouts = cfg.playouts
    orderer = make_orderer(root.game_id, mc, mcts_tt, policy, clamp_heuristic)
    start_moves = counter.n
    solver_start = time.monotonic()
    try:
        if algorithm in ("ab-tt", "ab-tt-mc"):
            value = _run_ab_full(root, orderer, tt_bits, limits)
        elif algorithm in ("id-ab-tt", "id-ab-tt-mc"):
            value = _run_ab_iterative(root, orderer, tt_bits, limits)
        else:
            value = _run_pn2(root, orderer, limits)
    except SearchAbort:
        solver_time = time.monotonic() - solver_start
        moves = counter.n - start_moves
        return SolveReport(
            value=0, result="Unsolved", moves_searched=moves,
            wall_time=time.monotonic() - wall_start, solver_time=solver_time,
            mcts_time=mcts_time, playouts=playouts, algorithm=algorithm,
            seed=seed, unsolved=True, bound_moves=moves,
            bound_time=solver_time + mcts_time,
        )
    solver_time = time.monotonic() - solver_start
    return SolveReport(
        value=value, result="Won" if value == 1 else "Lost",
        moves_searched=counter.n - start_moves,
        wall_time=time.monotonic() - wall_start, solver_time=solver_time,
        mcts_time=mcts_time, playouts=playouts, algorithm=algorithm, seed=seed,
    )


def solve_ab_tt(root: Game, mcts_config: MctsConfig | None = None, **kw) -> SolveReport:
    """Single full-window depth-first search at the game length bound."""
    algorithm = "ab-tt-mc" if mcts_config is not None else "ab-tt"
    return solve(root, algorithm, mcts_config, **kw)


def solve_id_ab_tt(root: Game, mcts_config: MctsConfig | None = None, **kw) -> SolveReport:
    """Iterative deepening with a null window asking "is this a win"."""
    algorithm = "id-ab-tt-mc" if mcts_config is not None else "id-ab-tt"
    return solve(root, algorithm, mcts_config, **kw)


def solve_pn2(root: Game, **kw) -> SolveReport:
    """Two-level proof number search."""
    return solve(root, "pn2", **kw)
