"""Command line front end: solve, bench, oracle, mcts-dump."""

from __future__ import annotations

import argparse
import sys

from .bench import (
    BenchJob, BenchSuite, emit_table, oracle, parse_suite, run_job, run_suite,
)
from .core import GameConfig, MoveCounter, GAME_IDS
from .games import new_game
from .mcts import MctsConfig, run_mcts, save_snapshot
from .solvers import ALGORITHMS


def _game_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--game", required=True, choices=sorted(GAME_IDS))
    parser.add_argument("--width", type=int, required=True)
    parser.add_argument("--height", type=int, required=True)
    parser.add_argument("--komi", type=float, default=None,
                        help="half-integer; required for go, rejected "
                             "elsewhere")


def _output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "markdown"), default=None)
    parser.add_argument("--out", default=None,
                        help="write the table to this path instead of stdout")
    parser.add_argument("--no-clock", action="store_true",
                        help="placeholders instead of measured times, so "
                             "repeated runs compare byte-for-byte")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcsolve",
        description="Exactly solve small board games, with optional "
                    "Monte Carlo move ordering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one game instance")
    _game_args(p_solve)
    p_solve.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p_solve.add_argument("--playouts", type=int, default=0,
                         help="MCTS playouts before the -mc solvers")
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--tt-bits", type=int, default=20,
                         help="table holds 2^bits - 1 entries; 0 disables")
    p_solve.add_argument("--time-limit", type=float, default=86400.0)
    p_solve.add_argument("--node-limit", type=int, default=None)
    p_solve.add_argument("--pn-tree-limit", type=int, default=4_000_000)
    p_solve.add_argument("--clamp", action="store_true",
                         help="floor heuristic move scores at 2 so captures "
                              "and escapes keep priority (atarigo)")
    _output_args(p_solve)

    p_bench = sub.add_parser("bench", help="run a suite of benchmark jobs")
    p_bench.add_argument("--suite", required=True,
                         help="suite file of key=value blocks")
    p_bench.add_argument("--tags", default="",
                         help="comma list; run only jobs carrying one")
    p_bench.add_argument("--overnight", action="store_true",
                         help="include jobs tagged overnight")
    p_bench.add_argument("--jobs", type=int, default=1,
                         help="run up to N jobs concurrently")
    _output_args(p_bench)

    p_oracle = sub.add_parser("oracle", help="exhaustive ground-truth value")
    _game_args(p_oracle)
    p_oracle.add_argument("--no-memo", action="store_true",
                          help="disable the memoization cache")

    p_dump = sub.add_parser("mcts-dump",
                            help="run MCTS alone and inspect or save it")
    _game_args(p_dump)
    p_dump.add_argument("--playouts", type=int, required=True)
    p_dump.add_argument("--seed", type=int, default=0)
    p_dump.add_argument("--out", default=None,
                        help="write a binary snapshot to this path")
    p_dump.add_argument("--top", type=int, default=10,
                        help="how many root moves to list")
    return parser


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _cmd_solve(args: argparse.Namespace) -> int:
    job = BenchJob(
        job_id="cli", game=args.game, width=args.width, height=args.height,
        algorithm=args.algorithm, playouts=args.playouts, seed=args.seed,
        komi=args.komi, tt_bits=args.tt_bits, time_limit=args.time_limit,
        node_limit=args.node_limit, pn_tree_limit=args.pn_tree_limit,
        clamp=args.clamp,
    )
    row = run_job(job)
    fmt = args.format or "csv"
    _write(emit_table([row], fmt, clock=not args.no_clock), args.out)
    if row.error:
        print(f"error: {row.error}", file=sys.stderr)
    return 0 if row.ok else 1


def _cmd_bench(args: argparse.Namespace) -> int:
    try:
        with open(args.suite, "r", encoding="utf-8") as handle:
            suite = parse_suite(handle.read())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    tags = tuple(t.strip() for t in args.tags.split(",") if t.strip())
    rows = run_suite(suite, tags=tags, overnight=args.overnight,
                     jobs=args.jobs)
    fmt = args.format or suite.fmt
    _write(emit_table(rows, fmt, clock=not args.no_clock), args.out)
    for row in rows:
        if row.error:
            print(f"error: {row.job_id}: {row.error}", file=sys.stderr)
    return 0 if all(row.ok for row in rows) else 1


def _cmd_oracle(args: argparse.Namespace) -> int:
    config = GameConfig(args.game, args.width, args.height, komi=args.komi)
    value = oracle(config, memoize=not args.no_memo)
    result = "Won" if value == 1 else "Lost"
    print(f"game={args.game} width={args.width} height={args.height} "
          f"value={value} result={result}")
    return 0


def _cmd_mcts_dump(args: argparse.Namespace) -> int:
    config = GameConfig(args.game, args.width, args.height, komi=args.komi)
    state = new_game(config, MoveCounter())
    mcts_config = MctsConfig(playouts=args.playouts, seed=args.seed)
    tt, policy = run_mcts(state, mcts_config)
    entry = tt.get(state.hash)
    learned = sum(1 for w in policy.weights if w != 0.0)
    print(f"playouts={args.playouts} entries={len(tt)} "
          f"policy_nonzero={learned}")
    if entry is not None:
        ranked = sorted(
            range(len(entry.moves)),
            key=lambda i: entry.counts[i], reverse=True,
        )
        for i in ranked[:max(args.top, 0)]:
            count = entry.counts[i]
            rate = entry.wins[i] / count if count else 0.0
            print(f"move={state.describe_move(entry.moves[i])} "
                  f"count={count} winrate={rate:.3f}")
    if args.out is not None:
        save_snapshot(args.out, tt, policy)
        print(f"snapshot written to {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "bench": _cmd_bench,
        "oracle": _cmd_oracle,
        "mcts-dump": _cmd_mcts_dump,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
