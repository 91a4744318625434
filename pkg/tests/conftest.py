"""Shared fixtures: the oracle-checked instance list and tiny helpers.

ORACLE_SUITE values were produced by mcsolve.bench.oracle (exhaustive
negamax, no pruning) and frozen here; test_bench re-derives a sample live
so a regression in either the engines or the oracle shows up as a
disagreement with these constants.
"""

import random

import pytest

from mcsolve import GameConfig, MoveCounter, new_game

# (game, width, height, komi) -> value for the first player, from the
# exhaustive oracle.  Every instance is at most 16 cells.
ORACLE_SUITE = [
    ("domineering", 2, 2, None, 1),
    ("domineering", 3, 2, None, 1),
    ("domineering", 2, 3, None, 1),
    ("domineering", 3, 3, None, 1),
    ("domineering", 4, 3, None, -1),
    ("domineering", 3, 4, None, 1),
    ("domineering", 4, 4, None, 1),
    ("domineering", 5, 3, None, -1),
    ("misere-domineering", 2, 2, None, -1),
    ("misere-domineering", 3, 3, None, -1),
    ("misere-domineering", 4, 3, None, -1),
    ("misere-domineering", 4, 4, None, 1),
    ("atarigo", 2, 2, None, -1),
    ("atarigo", 3, 2, None, -1),
    ("atarigo", 2, 3, None, -1),
    ("atarigo", 3, 3, None, 1),
    ("atarigo", 4, 3, None, 1),
    ("atarigo", 3, 4, None, 1),
    ("nogo", 2, 2, None, 1),
    ("nogo", 3, 2, None, -1),
    ("nogo", 2, 3, None, -1),
    ("nogo", 3, 3, None, 1),
    ("nogo", 4, 3, None, -1),
    ("nogo", 3, 4, None, -1),
    ("nogo", 4, 2, None, -1),
    ("nogo", 2, 6, None, 1),
    ("go", 1, 3, 0.5, 1),
    ("go", 1, 3, 8.5, -1),
    ("go", 2, 2, 0.5, 0),
    ("go", 2, 2, 2.5, 0),
    ("go", 2, 2, 8.5, -1),
    ("breakthrough", 2, 4, None, -1),
    ("breakthrough", 3, 4, None, -1),
    ("breakthrough", 2, 5, None, -1),
    ("breakthrough", 2, 6, None, 1),
    ("misere-breakthrough", 2, 4, None, -1),
    ("misere-breakthrough", 3, 4, None, -1),
    ("misere-breakthrough", 2, 5, None, -1),
    ("knightthrough", 2, 4, None, 1),
    ("knightthrough", 3, 4, None, 1),
    ("knightthrough", 4, 4, None, 1),
    ("knightthrough", 2, 5, None, -1),
    ("misere-knightthrough", 2, 4, None, 1),
    ("misere-knightthrough", 3, 4, None, -1),
    ("misere-knightthrough", 2, 5, None, -1),
]


def instance_game(game, width, height, komi):
    config = GameConfig(game, width, height, komi=komi)
    return new_game(config, MoveCounter())


def random_playout(state, rng: random.Random, limit: int = 10_000):
    """Play uniformly random legal moves to the end; returns the states."""
    trail = [state]
    for _ in range(limit):
        if state.is_terminal():
            break
        state = state.play(rng.choice(state.legal_moves()))
        trail.append(state)
    return trail


@pytest.fixture(scope="session")
def rng():
    return random.Random(20240817)
