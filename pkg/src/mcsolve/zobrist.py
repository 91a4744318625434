"""Zobrist keys for incremental position hashing.

One fixed-seed table serves every game: boards are at most 64 cells and
there are at most two piece colours.  Hashes are 64-bit and combined with
XOR, so playing and undoing a move are the same operation.  The tables are
deterministic across runs, which keeps transposition-table behaviour and
therefore node counts reproducible.
"""

from __future__ import annotations

import random

MAX_CELLS = 64
_BITS = 64

_rng = random.Random(0x60BA7_5EED)

# STONE_KEYS[player][cell]; player is 1-based, index 0 row unused.
STONE_KEYS = [
    [0] * MAX_CELLS,
    [_rng.getrandbits(_BITS) for _ in range(MAX_CELLS)],
    [_rng.getrandbits(_BITS) for _ in range(MAX_CELLS)],
]

# XORed in while the second player is to move.
SIDE_KEY = _rng.getrandbits(_BITS)

# XORed in while exactly one pass is pending (Go only).
PASS_KEY = _rng.getrandbits(_BITS)


def board_hash(black_bits: int, white_bits: int) -> int:
    """Hash of the stones alone, for rebuilding from scratch."""
    h = 0
    b = black_bits
    while b:
        lsb = b & -b
        h ^= STONE_KEYS[1][lsb.bit_length() - 1]
        b ^= lsb
    w = white_bits
    while w:
        lsb = w & -w
        h ^= STONE_KEYS[2][lsb.bit_length() - 1]
        w ^= lsb
    return h
