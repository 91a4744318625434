"""Rule-engine tests: move generation, terminal logic, hashing, symmetry."""

import random

import pytest

from mcsolve import FIRST, SECOND, GameConfig, MoveCounter, new_game
from mcsolve.games.goban import Atarigo, Go, Nogo, _flood, geometry
from mcsolve.games.pawns import Breakthrough, Knightthrough, MisereBreakthrough
from mcsolve.games.domino import Domineering

from conftest import instance_game, random_playout


def fresh(game, w, h, komi=None):
    return new_game(GameConfig(game, w, h, komi=komi), MoveCounter())


# -- configuration ----------------------------------------------------------

def test_config_validation():
    with pytest.raises(ValueError):
        GameConfig("chess", 8, 8)
    with pytest.raises(ValueError):
        GameConfig("nogo", 0, 3)
    with pytest.raises(ValueError):
        GameConfig("nogo", 9, 9)  # 81 cells overflow the bitset word
    with pytest.raises(ValueError):
        GameConfig("nogo", 3, 3, komi=7.5)  # komi is Go-only
    with pytest.raises(ValueError):
        GameConfig("go", 3, 3)  # komi required
    with pytest.raises(ValueError):
        GameConfig("go", 3, 3, komi=7.0)  # integer komi allows jigo
    assert GameConfig("go", 2, 10, komi=0.5).komi == 0.5
    assert GameConfig("misere-domineering", 3, 3).misere is True
    assert GameConfig("domineering", 3, 3).misere is False


# -- move counts from the rules --------------------------------------------

def test_domineering_2x2_vertical_has_two_moves():
    g = fresh("domineering", 2, 2)
    assert len(g.legal_moves()) == 2


def test_breakthrough_5x5_initial_move_count():
    # Two home rows of pawns: the five second-row pawns have three forward
    # directions each, minus the two clipped at the left and right edges.
    g = fresh("breakthrough", 5, 5)
    assert len(g.legal_moves()) == 13


def test_knightthrough_5x5_initial_move_count():
    g = fresh("knightthrough", 5, 5)
    assert len(g.legal_moves()) == 22


def test_nogo_1x1_has_no_move():
    g = fresh("nogo", 1, 1)
    assert g.legal_moves() == []
    assert g.is_terminal()
    assert g.evaluate() == -1


# -- goban rules ------------------------------------------------------------

def test_atarigo_capture_ends_game():
    # Black a2-b2 above White a1; White b1 fills Black's... rather, Black
    # fills White's last liberty at b1 and wins immediately.
    g = Atarigo.from_diagram(
        """
        XX.
        O..
        """,
        to_move=FIRST,
    )
    b1 = 1  # bottom row, second column
    nxt = g.play(b1)
    assert nxt.is_terminal()
    assert nxt.winner == FIRST
    assert nxt.evaluate() == -1  # loser is now to move


def test_atarigo_first_move_not_terminal():
    g = fresh("atarigo", 3, 3)
    nxt = g.play(g.legal_moves()[0])
    assert not nxt.is_terminal()


def test_atarigo_pure_suicide_is_illegal():
    # White to move; a1 would give the lone white stone zero liberties
    # without capturing anything (black b1+a2 keep outside liberties).
    g = Atarigo.from_diagram(
        """
        X..
        .X.
        """,
        to_move=SECOND,
    )
    assert 0 not in g.legal_moves()


def test_atarigo_capture_beats_self_fill():
    # Black c1 fills the white string's last liberty; the move also fills
    # black's own last liberty but the capture decides the game for Black.
    g = Atarigo.from_diagram(
        """
        OOX
        XO.
        """,
        to_move=FIRST,
    )
    c1 = 2
    assert c1 in g.legal_moves()
    nxt = g.play(c1)
    assert nxt.winner == FIRST


def test_nogo_capturing_moves_illegal_both_ways():
    # Black may neither capture the white stone (a2) nor suicide (c1).
    g = Nogo.from_diagram(
        """
        O..
        XX.
        """,
        to_move=FIRST,
    )
    a2 = 3
    assert a2 not in g.legal_moves()
    g2 = Nogo.from_diagram(
        """
        .O.
        O.O
        """,
        to_move=FIRST,
    )
    b1 = 1
    assert b1 not in g2.legal_moves()


def test_go_two_passes_score_empty_board():
    g = fresh("go", 3, 3, komi=8.5)
    p = g.pass_move()
    done = g.play(p).play(p)
    assert done.is_terminal()
    # 0 - 8.5 < 0: White wins; Black is to move after two passes.
    assert done.evaluate() == -1


def test_go_area_scoring_with_stones():
    # Black holds the bottom two rows plus a1 column... constructed so the
    # whole board is decided: black area 6, white area 3, komi 2.5.
    g = Go.from_diagram(
        """
        OOO
        XXX
        XXX
        """,
        to_move=FIRST,
        komi=2.5,
    )
    p = g.pass_move()
    done = g.play(p).play(p)
    assert done.is_terminal()
    # 6 - 3 - 2.5 = 0.5 > 0: Black wins, Black to move at the end.
    assert done.evaluate() == 1


def test_go_suicide_illegal():
    g = Go.from_diagram(
        """
        .X.
        X.X
        """,
        to_move=SECOND,
        komi=0.5,
    )
    b1 = 1
    assert b1 not in g.legal_moves()


def test_go_capture_removes_stones():
    # White a2 stone with one liberty; Black captures it by playing a3...
    g = Go.from_diagram(
        """
        ...
        O..
        X..
        """,
        to_move=FIRST,
        komi=0.5,
    )
    a3 = 6
    nxt = g.play(a3)
    assert nxt.white == 0  # stone removed
    assert nxt.black & (1 << a3)
    assert nxt.black & 1


def test_go_superko_forbids_recreating_position():
    # Single-point ko in the corner on 3x2.  After the capture-recapture
    # cycle would recreate the earlier whole-board position, so the
    # immediate recapture must be excluded.
    g = Go.from_diagram(
        """
        XO.
        .XO
        """,
        to_move=SECOND,
        komi=0.5,
    )
    a1 = 0
    after = g.play(a1)  # white takes a1, capturing the black b1... no:
    # white a1 captures the black stone at b1?  b1 is black with liberties
    # a1 only?  b1 neighbours: a1 (empty), c1 (white), b2 (white).  So yes,
    # white a1 captures b1.
    assert after.black.bit_count() == 1  # only the a2 stone remains
    b1 = 1
    # black recapturing at b1 would recreate the pre-capture board with
    # black to move... positional superko tracks board only, and the
    # original diagram position (black b1+a2, white c1+b2, empty a1) is in
    # history, so the recapture that recreates it is illegal.
    assert b1 not in after.legal_moves()


def test_go_move_limit_evaluates_zero():
    g = fresh("go", 2, 2, komi=0.5)
    limit = 2 * 4
    state = g
    rng = random.Random(5)
    while state.moves_played < limit:
        moves = [m for m in state.legal_moves() if m != state.pass_move()]
        state = state.play(rng.choice(moves) if moves else state.pass_move())
        if state.is_terminal():
            break
    if not state.is_terminal():
        pytest.fail("limit never reached")
    if state.moves_played >= limit and state.passes < 2:
        assert state.evaluate() == 0


# -- pawn rules ---------------------------------------------------------------

def test_pawn_straight_capture_illegal():
    g = Breakthrough.from_diagram(
        """
        .O.
        ....
        .O..
        .X..
        ....
        """.replace("....", "...."),
        to_move=FIRST,
    )
    # straight ahead blocked by the enemy pawn, diagonals open
    cells = g.width * g.height
    src = g.width * 1 + 1  # b2
    straight = src + g.width
    assert (src * cells + straight) not in g.legal_moves()
    diag = src + g.width + 1
    assert (src * cells + diag) in g.legal_moves()


def test_breakthrough_far_rank_wins():
    g = Breakthrough.from_diagram(
        """
        ...
        X..
        ...
        O..
        """,
        to_move=FIRST,
    )
    cells = 12
    src = 2 * 3  # a3
    dst = 3 * 3  # a4 far rank
    nxt = g.play(src * cells + dst)
    assert nxt.is_terminal()
    assert nxt.evaluate() == -1  # opponent to move faces a loss


def test_misere_breakthrough_far_rank_loses_for_mover():
    g = MisereBreakthrough.from_diagram(
        """
        ...
        X..
        ...
        O..
        """,
        to_move=FIRST,
    )
    cells = 12
    nxt = g.play(6 * cells + 9)
    assert nxt.is_terminal()
    assert nxt.evaluate() == 1  # mover reached the far rank and lost


def test_knightthrough_moves_strictly_forward():
    g = fresh("knightthrough", 5, 5)
    cells = 25
    for mv in g.legal_moves():
        src, dst = divmod(mv, cells)
        assert dst // 5 > src // 5  # every jump advances in rank


# -- domineering rules -------------------------------------------------------

def test_domineering_1x1_and_2x1():
    g = fresh("domineering", 1, 1)
    assert g.is_terminal() and g.evaluate() == -1  # Vertical cannot move
    g = fresh("domineering", 1, 2)  # one column, two rows
    assert len(g.legal_moves()) == 1
    nxt = g.play(g.legal_moves()[0])
    assert nxt.is_terminal() and nxt.evaluate() == -1  # Horizontal loses


def test_misere_domineering_no_move_wins():
    g = fresh("misere-domineering", 1, 1)
    assert g.is_terminal() and g.evaluate() == 1


def test_domineering_occupied_even():
    g = fresh("domineering", 4, 4)
    rng = random.Random(1)
    for state in random_playout(g, rng):
        assert state.occupied.bit_count() % 2 == 0


# -- cross-cutting invariants -------------------------------------------------

ALL_SMALL = [
    ("atarigo", 3, 3, None), ("nogo", 3, 3, None), ("go", 2, 2, 0.5),
    ("breakthrough", 3, 4, None), ("misere-breakthrough", 3, 4, None),
    ("knightthrough", 3, 4, None), ("misere-knightthrough", 3, 4, None),
    ("domineering", 3, 3, None), ("misere-domineering", 3, 3, None),
]


@pytest.mark.parametrize("game,w,h,komi", ALL_SMALL)
def test_hash_roundtrip_random_playouts(game, w, h, komi):
    rng = random.Random(hash((game, w, h)) & 0xFFFF)
    for _ in range(60):
        for state in random_playout(fresh(game, w, h, komi), rng):
            assert state.hash == state.recompute_hash()


@pytest.mark.parametrize("game,w,h,komi", ALL_SMALL)
def test_play_is_pure_and_undo_restores(game, w, h, komi):
    rng = random.Random(hash((game, w, h, 1)) & 0xFFFF)
    for _ in range(40):
        g = fresh(game, w, h, komi)
        while not g.is_terminal():
            snap = g.play(g.legal_moves()[0])  # pure: g unchanged below
            before = (g.hash, g.to_move)
            mv = rng.choice(g.legal_moves())
            tok = g.play_inplace(mv)
            g.undo(tok)
            assert (g.hash, g.to_move) == before
            g = snap


@pytest.mark.parametrize("game,w,h,komi", ALL_SMALL)
def test_codes_in_declared_space(game, w, h, komi):
    rng = random.Random(hash((game, w, h, 2)) & 0xFFFF)
    for _ in range(30):
        for state in random_playout(fresh(game, w, h, komi), rng):
            if state.is_terminal():
                continue
            space = state.code_space
            for mv in state.legal_moves():
                assert 0 <= state.move_code(mv) < space


@pytest.mark.parametrize("game,w,h,komi", ALL_SMALL)
def test_playouts_respect_length_bound(game, w, h, komi):
    rng = random.Random(hash((game, w, h, 3)) & 0xFFFF)
    for _ in range(50):
        g = fresh(game, w, h, komi)
        bound = g.length_bound()
        trail = random_playout(g, rng)
        assert len(trail) - 1 <= bound


def test_code_is_local_feature():
    # Same point, same four neighbours, a far stone differs: same code.
    a = Nogo.from_diagram(
        """
        ...X
        ....
        X...
        """,
        to_move=FIRST,
    )
    b = Nogo.from_diagram(
        """
        ....
        ....
        X...
        """,
        to_move=FIRST,
    )
    probe = 1  # b1: neighbours a1, c1, b2 in both diagrams
    assert a.move_code(probe) == b.move_code(probe)


def test_flood_fill_matches_bfs():
    geo = geometry(4, 3)
    rng = random.Random(9)
    for _ in range(300):
        allowed = rng.getrandbits(12)
        seeds = [p for p in range(12) if allowed >> p & 1]
        if not seeds:
            continue
        seed = 1 << rng.choice(seeds)
        got = _flood(seed, allowed, geo)
        # plain breadth-first reference
        start = seed.bit_length() - 1
        seen = {start}
        frontier = [start]
        while frontier:
            p = frontier.pop()
            for q in geo.nbrs[p]:
                if q >= 0 and q not in seen and allowed >> q & 1:
                    seen.add(q)
                    frontier.append(q)
        assert got == sum(1 << p for p in seen)


def test_nogo_transpose_symmetry():
    from mcsolve.bench import oracle
    for w, h in [(1, 4), (2, 3), (3, 2), (2, 4), (3, 4)]:
        assert oracle(GameConfig("nogo", w, h)) == oracle(GameConfig("nogo", h, w))


def test_domineering_transpose_duality():
    # Transposing the board swaps the roles of Vertical and Horizontal:
    # the first player of w x h stands exactly where the second player of
    # h x w stands after one null exchange... concretely, value(w, h) for
    # the vertical first player must equal the value of the transposed
    # board as seen by a horizontal player moving first.  With only two
    # players this reduces to: value(w x h) == value(h x w) when w == h,
    # and in general the transposed game with a horizontal first mover is
    # the same game.  The engine always gives Vertical the first move, so
    # emulate a horizontal-first game by transposing and flipping the
    # perspective through one ply of search.
    from mcsolve.bench import oracle_value
    for w, h in [(2, 3), (3, 2), (2, 4), (4, 3), (4, 4)]:
        base = fresh("domineering", w, h)
        v = oracle_value(base)
        flipped = fresh("domineering", h, w)
        flipped.to_move = SECOND  # horizontal moves first on the transpose
        flipped.hash = flipped.recompute_hash()
        assert v == oracle_value(flipped)


def test_describe_move_labels():
    g = fresh("nogo", 3, 3)
    assert g.describe_move(0) == "a1"
    assert g.describe_move(4) == "b2"
    go = fresh("go", 2, 2, komi=0.5)
    assert go.describe_move(go.pass_move()) == "pass"
    d = fresh("domineering", 3, 3)
    assert d.describe_move(0) == "a1v"
    k = fresh("knightthrough", 3, 4)
    mv = k.legal_moves()[0]
    assert "-" in k.describe_move(mv) or "x" in k.describe_move(mv)
