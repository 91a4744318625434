"""Benchmark harness pieces: brute-force oracle, suite runner, tables.

The oracle is the independent referee for everything else in the package:
a full negamax over the whole game tree, no pruning, no transposition
table, with an optional memoization cache keyed on the complete game
state.  It is deliberately written against the pure ``play`` interface so
it shares no search machinery with the solvers it checks.

The suite runner executes benchmark jobs described in a plain text file
of ``key=value`` blocks and renders result tables as CSV (one row per
job, fixed column set) or as markdown blocks grouped by board size.
Unsolved rows keep the lower bounds reached before the abort and render
them as "> N" markers.
"""

from __future__ import annotations

import concurrent.futures
import sys

from dataclasses import dataclass

from .core import Game, GameConfig, MoveCounter
from .games import new_game
from .games.goban import Go, GobanGame
from .games.pawns import PawnGame
from .games.domino import Domineering
from .mcts import MctsConfig
from .solvers import ALGORITHMS, SearchLimits, solve

# Full-tree recursion on thin-and-deep games outgrows the default limit.
if sys.getrecursionlimit() < 10000:
    sys.setrecursionlimit(10000)


def _oracle_key(state: Game):
    """Complete identity of a position, conservative by construction.

    Go includes the superko history set, which makes caching nearly
    useless there but never wrong; the oracle only runs Go on boards
    small enough that this does not matter.
    """
    if isinstance(state, Go):
        return (
            state.black, state.white, state.to_move, state.passes,
            state.moves_played, frozenset(state.history),
        )
    if isinstance(state, GobanGame):
        winner = getattr(state, "winner", 0)
        return (state.black, state.white, state.to_move, winner)
    if isinstance(state, PawnGame):
        return (state.first, state.second, state.to_move, state.reached_by)
    if isinstance(state, Domineering):
        return (state.occupied, state.to_move)
    raise TypeError(f"no oracle key for {type(state).__name__}")


def _negamax_full(state: Game, memo) -> int:
    if state.is_terminal():
        return state.evaluate()
    if memo is not None:
        key = _oracle_key(state)
        cached = memo.get(key)
        if cached is not None:
            return cached
    best = -2
    for move in state.legal_moves():
        value = -_negamax_full(state.play(move), memo)
        if value > best:
            best = value
    if memo is not None:
        memo[key] = best
    return best


def oracle_value(state: Game, memoize: bool = True) -> int:
    """Game value for the player to move, by exhaustive search.

    Every child is visited (no alpha-beta window), so the result cannot
    depend on move ordering.  Returns -1, 0 or +1; 0 only happens for Go
    positions where the move limit truncates every line worth more.
    """
    return _negamax_full(state, {} if memoize else None)


def oracle(config: GameConfig, memoize: bool = True) -> int:
    """Oracle value of the initial position for ``config``."""
    return oracle_value(new_game(config, MoveCounter()), memoize)


# --------------------------------------------------------------------------
# Benchmark suites


@dataclass(frozen=True)
class BenchJob:
    """One benchmark unit: a game instance, an algorithm, and limits."""

    job_id: str
    game: str
    width: int
    height: int
    algorithm: str
    playouts: int = 0
    seed: int = 0
    komi: float | None = None
    tt_bits: int = 20
    time_limit: float = 86400.0
    node_limit: int | None = None
    pn_tree_limit: int = 4_000_000
    clamp: bool = False
    expect: str = "solved"      # solved | won | lost | unsolved | any
    tags: tuple[str, ...] = ()

    def config(self) -> GameConfig:
        return GameConfig(self.game, self.width, self.height, komi=self.komi)


@dataclass(frozen=True)
class BenchSuite:
    jobs: tuple[BenchJob, ...]
    fmt: str = "csv"


@dataclass
class ResultRow:
    """Raw outcome of one job; formatting happens in emit_table."""

    game: str
    width: int
    height: int
    algorithm: str
    result: str                 # Won | Lost | Unsolved | Failed
    moves_searched: int
    wall_time: float
    playouts: int
    seed: int
    unsolved: bool = False
    bound_moves: int | None = None
    bound_time: float | None = None
    ok: bool = True
    error: str = ""
    job_id: str = ""


_JOB_KEYS = {
    "id", "game", "width", "height", "algorithm", "playouts", "seed",
    "komi", "tt_bits", "time_limit", "node_limit", "pn_tree_limit",
    "clamp", "expect", "tags",
}
_SUITE_KEYS = {"format"}
_EXPECTS = {"solved", "won", "lost", "unsolved", "any"}


def _parse_bool(value: str, key: str) -> bool:
    low = value.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"bad boolean for {key}: {value!r}")


def _job_from_block(block: dict[str, str], used_ids: set[str]) -> BenchJob:
    unknown = set(block) - _JOB_KEYS
    if unknown:
        raise ValueError(f"unknown suite keys: {', '.join(sorted(unknown))}")
    for key in ("game", "width", "height", "algorithm"):
        if key not in block:
            raise ValueError(f"suite job is missing {key}=")
    algorithm = block["algorithm"]
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    width = int(block["width"])
    height = int(block["height"])
    playouts = int(block.get("playouts", "0"))
    seed = int(block.get("seed", "0"))
    komi = float(block["komi"]) if "komi" in block else None
    tt_bits = int(block.get("tt_bits", "20"))
    time_limit = float(block.get("time_limit", "86400"))
    node_limit = int(block["node_limit"]) if "node_limit" in block else None
    pn_tree_limit = int(block.get("pn_tree_limit", "4000000"))
    if width <= 0 or height <= 0:
        raise ValueError("width and height must be positive")
    if playouts < 0 or seed < 0:
        raise ValueError("playouts and seed must be non-negative")
    if time_limit <= 0 or (node_limit is not None and node_limit <= 0):
        raise ValueError("limits must be positive")
    if pn_tree_limit <= 0 or tt_bits < 0:
        raise ValueError("limits must be positive")
    expect = block.get("expect", "solved").lower()
    if expect not in _EXPECTS:
        raise ValueError(f"bad expect value {expect!r}")
    tags = tuple(
        t.strip() for t in block.get("tags", "").split(",") if t.strip()
    )
    job_id = block.get("id", "")
    if not job_id:
        base = f"{block['game']}-{width}x{height}-{algorithm}-s{seed}"
        job_id = base
        bump = 2
        while job_id in used_ids:
            job_id = f"{base}-{bump}"
            bump += 1
    if job_id in used_ids:
        raise ValueError(f"duplicate job id {job_id!r}")
    used_ids.add(job_id)
    return BenchJob(
        job_id=job_id, game=block["game"], width=width, height=height,
        algorithm=algorithm, playouts=playouts, seed=seed, komi=komi,
        tt_bits=tt_bits, time_limit=time_limit, node_limit=node_limit,
        pn_tree_limit=pn_tree_limit,
        clamp=_parse_bool(block.get("clamp", "false"), "clamp"),
        expect=expect, tags=tags,
    )


def parse_suite(text: str) -> BenchSuite:
    """Parse a suite file: blank-line separated key=value blocks.

    Lines starting with ``#`` are comments.  A leading block without a
    ``game=`` key configures the suite itself (currently ``format=``);
    every other block describes one job.  Keys are validated eagerly so
    a typo fails the whole parse instead of silently running defaults.
    """
    blocks: list[dict[str, str]] = []
    current: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if current:
                blocks.append(current)
                current = {}
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"suite line is not key=value: {raw!r}")
        key = key.strip()
        value = value.strip()
        if key in current:
            raise ValueError(f"duplicate key {key!r} in one block")
        current[key] = value
    if current:
        blocks.append(current)

    fmt = "csv"
    if blocks and "game" not in blocks[0]:
        header = blocks.pop(0)
        unknown = set(header) - _SUITE_KEYS
        if unknown:
            raise ValueError(
                f"unknown suite header keys: {', '.join(sorted(unknown))}"
            )
        fmt = header.get("format", "csv")
        if fmt not in ("csv", "markdown"):
            raise ValueError(f"unknown format {fmt!r}")
    used_ids: set[str] = set()
    jobs = tuple(_job_from_block(b, used_ids) for b in blocks)
    return BenchSuite(jobs=jobs, fmt=fmt)


def select_jobs(
    suite: BenchSuite,
    tags: tuple[str, ...] = (),
    overnight: bool = False,
) -> tuple[BenchJob, ...]:
    """Filter suite jobs; overnight-tagged jobs run only when asked."""
    jobs = suite.jobs
    if tags:
        wanted = set(tags)
        jobs = tuple(j for j in jobs if wanted & set(j.tags))
    if not overnight:
        jobs = tuple(j for j in jobs if "overnight" not in j.tags)
    return jobs


def _row_ok(result: str, expect: str) -> bool:
    if expect == "any":
        return result != "Failed"
    if expect == "solved":
        return result in ("Won", "Lost")
    return result.lower() == expect


def run_job(job: BenchJob) -> ResultRow:
    """Execute one job; a crash becomes a Failed row, never an exception."""
    try:
        root = new_game(job.config(), MoveCounter())
        mcts_config = None
        if job.algorithm.endswith("-mc"):
            mcts_config = MctsConfig(playouts=job.playouts, seed=job.seed)
        limits = SearchLimits(
            time_limit=job.time_limit, node_limit=job.node_limit,
            pn_tree_limit=job.pn_tree_limit,
        )
        report = solve(
            root, job.algorithm, mcts_config=mcts_config,
            tt_bits=job.tt_bits, limits=limits, clamp_heuristic=job.clamp,
        )
    except Exception as exc:  # noqa: BLE001 - suite must survive any job
        return ResultRow(
            game=job.game, width=job.width, height=job.height,
            algorithm=job.algorithm, result="Failed", moves_searched=0,
            wall_time=0.0, playouts=job.playouts, seed=job.seed,
            ok=False, error=f"{type(exc).__name__}: {exc}", job_id=job.job_id,
        )
    return ResultRow(
        game=job.game, width=job.width, height=job.height,
        algorithm=job.algorithm, result=report.result,
        moves_searched=report.moves_searched, wall_time=report.wall_time,
        playouts=report.playouts, seed=report.seed,
        unsolved=report.unsolved, bound_moves=report.bound_moves,
        bound_time=report.bound_time,
        ok=_row_ok(report.result, job.expect), job_id=job.job_id,
    )


def run_suite(
    suite: BenchSuite,
    tags: tuple[str, ...] = (),
    overnight: bool = False,
    jobs: int = 1,
) -> list[ResultRow]:
    """Run the selected jobs, rows in suite order.

    ``jobs`` > 1 uses a process pool; every solver owns its own
    transposition table so jobs never share mutable state.
    """
    selected = select_jobs(suite, tags=tags, overnight=overnight)
    if jobs <= 1 or len(selected) <= 1:
        return [run_job(j) for j in selected]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_job, selected))


# --------------------------------------------------------------------------
# Tables


def _moves_field(row: ResultRow) -> str:
    if row.result == "Failed":
        return "-"
    if row.unsolved:
        bound = row.bound_moves if row.bound_moves is not None else 0
        return f"> {bound}"
    return str(row.moves_searched)


def _time_field(row: ResultRow, clock: bool) -> str:
    if row.result == "Failed":
        return "-"
    if row.unsolved:
        if not clock:
            return ">"
        bound = row.bound_time if row.bound_time is not None else 0.0
        return f"> {bound:.2f}"
    return f"{row.wall_time:.2f}" if clock else "-"


def _grouped(n: int) -> str:
    """Thousands groups separated by spaces, like the published tables."""
    return f"{n:,}".replace(",", " ")


def emit_table(rows: list[ResultRow], fmt: str = "csv", clock: bool = True) -> str:
    """Render rows as text.

    ``clock=False`` replaces measured times with placeholders so two runs
    of the same seeded suite compare byte-for-byte; every other field is
    deterministic already.  Unsolved rows show the lower bounds reached
    before the abort as "> N" (moves) and "> T" (seconds).
    """
    if fmt == "csv":
        lines = ["game,width,height,algorithm,result,moves,time_s,playouts,seed"]
        for row in rows:
            lines.append(
                f"{row.game},{row.width},{row.height},{row.algorithm},"
                f"{row.result},{_moves_field(row)},{_time_field(row, clock)},"
                f"{row.playouts},{row.seed}"
            )
        return "\n".join(lines) + "\n"
    if fmt != "markdown":
        raise ValueError(f"unknown format {fmt!r}")

    out: list[str] = []
    seen: list[tuple[str, int, int]] = []
    for row in rows:
        key = (row.game, row.width, row.height)
        if key not in seen:
            seen.append(key)
    for game, width, height in seen:
        group = [
            r for r in rows
            if (r.game, r.width, r.height) == (game, width, height)
        ]
        out.append(f"### {game} {width}x{height}")
        out.append("")
        out.append("| Algorithm | Result | Moves | Time | Playouts | Seed |")
        out.append("|:--|:--|--:|--:|--:|--:|")
        for row in group:
            if row.result == "Failed":
                moves = time_s = "-"
            elif row.unsolved:
                moves = f"> {_grouped(row.bound_moves or 0)}"
                time_s = f"> {row.bound_time or 0.0:.2f} s." if clock else "> s."
            else:
                moves = _grouped(row.moves_searched)
                time_s = f"{row.wall_time:.2f} s." if clock else "-"
            out.append(
                f"| {row.algorithm} | {row.result} | {moves} | {time_s} |"
                f" {_grouped(row.playouts)} | {row.seed} |"
            )
        out.append("")
    return "\n".join(out) + ("\n" if out else "")
