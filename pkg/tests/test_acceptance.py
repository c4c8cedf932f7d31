"""Acceptance criteria 1-10, each at its stated tolerance.

Every test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.
"""

from __future__ import annotations

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from helpers import oracle_suite, random_game, random_triple
from multilateral import gallery
from multilateral.cli import demo_report
from multilateral.continuous import cournot_analysis, cournot_game, discretize
from multilateral.equilibrium import (
    check_fg_criterion,
    check_grouped_criterion,
    check_simultaneous_fixed_point,
    enumerate_k_lateral,
    filtration,
    is_k_lateral,
)
from multilateral.expr import BinOp, Call, Compare, Ite, Neg, Num, Pow, Var, parse_expr, to_text, eval_expr
from multilateral.family import cournot_family, fiberwise_fixed_point_check, finite_family, scan, segment_family
from multilateral.game import FiniteGame
from multilateral.kneser import exact_search, greedy_cover, lower_bound
from multilateral.mixed import (
    MixedProfile,
    delta_triple,
    find_2lateral_witness,
    is_k_lateral_mixed,
    mixed_v_k,
    pure_payoffs_against,
    verify_ineq02,
)
from multilateral.nikaido_isoda import check_classical_equivalence, v_k

TOL = 1e-9


def c(number: int, title: str):
    return pytest.mark.criterion(number, title)


@pytest.fixture(scope="module")
def suite() -> list[FiniteGame]:
    return oracle_suite(200)


# --- 1 ---------------------------------------------------------------------

C1 = c(1, "Cournot reproduction")


@C1
def test_c1_cournot_closed_form_and_grid():
    start = time.perf_counter()
    rep = demo_report("cournot")
    assert rep["equilibrium"] == pytest.approx([80, 30], abs=TOL)
    assert rep["price"] == pytest.approx(45, abs=TOL)
    assert rep["profits"] == pytest.approx([3200, 900], abs=TOL)
    assert rep["deviation"] == pytest.approx([95, 0], abs=TOL)
    assert rep["deviation_profit"] == pytest.approx(4512.5, abs=TOL)
    assert rep["grid"]["m"] == 400
    assert rep["grid"]["equilibria"] == [[80.0, 30.0]]
    assert time.perf_counter() - start < 10


@C1
def test_c1_grid_equilibrium_on_square():
    start = time.perf_counter()
    disc = discretize(cournot_game(), 400)
    assert disc.grids[0][0] == 0.0 and disc.grids[0][-1] == 200.0
    eqs = enumerate_k_lateral(disc.game, 1)
    assert [disc.point(x) for x in eqs] == [(80.0, 30.0)]
    assert time.perf_counter() - start < 10


# --- 2 ---------------------------------------------------------------------

C2 = c(2, "oracle equivalence on 200 random games")


@C2
def test_c2_all_criteria_agree(suite):
    from multilateral.kneser import exact_cover

    start = time.perf_counter()
    covers = {}
    disagreements = []
    shapes = set()
    checked = 0
    for game in suite:
        n = game.num_players
        shapes.add((n, game.strategy_counts))
        for k in range(1, n + 1):
            cover = covers.setdefault((n, k), exact_cover(n, k))
            enumerated = set(enumerate_k_lateral(game, k))
            for x in game.profiles():
                verdicts = (
                    is_k_lateral(game, k, x),
                    v_k(game, k, x) == 0,
                    check_fg_criterion(game, k, x),
                    check_simultaneous_fixed_point(game, k, x),
                    check_grouped_criterion(game, k, x, cover),
                    x in enumerated,
                )
                checked += 1
                if len(set(verdicts)) != 1:
                    disagreements.append((game.strategy_counts, k, x, verdicts))
    elapsed = time.perf_counter() - start
    assert len(suite) >= 200
    assert {n for n, _ in shapes} == {2, 3, 4}
    assert {d for _, counts in shapes for d in counts} == {2, 3}
    assert disagreements == []
    assert checked > 0
    assert elapsed < 60, f"took {elapsed:.1f}s"


@C2
def test_c2_suite_is_not_degenerate(suite):
    # equivalence on games with no equilibria at all would be vacuous
    nonempty = sum(1 for g in suite if enumerate_k_lateral(g, 1))
    deeper = sum(1 for g in suite if g.num_players >= 2 and enumerate_k_lateral(g, 2))
    assert nonempty >= 50 and deeper >= 10


# --- 3 ---------------------------------------------------------------------

C3 = c(3, "filtration nesting")


def _assert_nested(game: FiniteGame):
    levels = [set(enumerate_k_lateral(game, k)) for k in range(1, game.num_players + 1)]
    for k in range(len(levels) - 1):
        assert levels[k + 1] <= levels[k], (game, k + 1)


@C3
def test_c3_nesting_on_suite(suite):
    for game in suite:
        _assert_nested(game)


@C3
def test_c3_nesting_on_gallery():
    games = [
        gallery.date_dilemma(),
        gallery.matching_pennies(),
        gallery.majority_voting(1),
        gallery.majority_voting(2),
        gallery.inspection_game(10, 2, 1, 20),
        gallery.delta_witness_game(),
        gallery.witness_game(3, 4).game,
        gallery.witness_game(4, 3).game,
        gallery.triple_game(find_2lateral_witness(0)),
    ]
    for game in games:
        _assert_nested(game)
        filtration(game)  # asserts nesting internally as well


# --- 4 ---------------------------------------------------------------------

C4 = c(4, "Nikaido-Isoda monotonicity v_k <= v_l")


@C4
def test_c4_monotone_in_k(suite):
    for game in suite:
        for x in game.profiles():
            values = [v_k(game, k, x) for k in range(1, game.num_players + 1)]
            assert all(isinstance(v, (int, Fraction)) for v in values)
            for k, l in itertools.combinations(range(len(values)), 2):
                assert values[k] <= values[l], (game, x, k + 1, l + 1)


# --- 5 ---------------------------------------------------------------------

C5 = c(5, "classical Nikaido-Isoda maximizers = global best replies")


@C5
def test_c5_classical_equivalence(suite):
    for game in suite:
        for x in game.profiles():
            assert check_classical_equivalence(game, x), (game, x)


# --- 6 ---------------------------------------------------------------------

C6 = c(6, "Kneser clique covering numbers")


def _chromatic_oracle(n: int, k: int) -> int:
    """Minimum classes by plain backtracking over class assignments (no pruning bound)."""
    verts = list(itertools.combinations(range(n), k))
    masks = [sum(1 << i for i in s) for s in verts]

    def fits(classes_used: list[int], v: int, c: int) -> bool:
        return not classes_used[c] & masks[v]

    def colorable(colors: int) -> bool:
        used = [0] * colors

        def go(v: int) -> bool:
            if v == len(verts):
                return True
            opened = False
            for c in range(colors):
                if used[c] == 0:
                    if opened:
                        continue  # empty classes are interchangeable
                    opened = True
                if fits(used, v, c):
                    used[c] |= masks[v]
                    if go(v + 1):
                        return True
                    used[c] &= ~masks[v]
            return False

        return go(0)

    colors = 1
    while not colorable(colors):
        colors += 1
    return colors


@C6
def test_c6_kneser_table():
    start = time.perf_counter()
    for n in range(1, 9):
        for k in range(1, n + 1):
            res = exact_search(n, k)
            exact = res.cover.size
            greedy = greedy_cover(n, k).size
            bound = lower_bound(n, k)
            assert greedy >= exact >= bound, (n, k)
            assert res.cover.violations() == []
            assert res.certified_by in ("lower-bound", "exhausted")
            if k == 1:
                assert exact == 1
            if k >= n // 2 + 1:
                assert exact == math.comb(n, k), (n, k)
    assert exact_search(4, 2).cover.size == 3
    assert exact_search(6, 2).cover.size == 5
    assert exact_search(6, 3).cover.size == 10
    assert time.perf_counter() - start < 30


@C6
def test_c6_small_values_match_exhaustive_oracle():
    start = time.perf_counter()
    for n, k in [(4, 2), (5, 2), (6, 2), (6, 3), (5, 3), (3, 1), (4, 1)]:
        assert exact_search(n, k).cover.size == _chromatic_oracle(n, k), (n, k)
    assert time.perf_counter() - start < 30


# --- 7 ---------------------------------------------------------------------

C7 = c(7, "3-player 2-lateral witness system")


@C7
def test_c7_delta_triple_accepted():
    assert verify_ineq02(delta_triple())


@C7
def test_c7_ten_seeded_witnesses():
    seen = set()
    vertex = MixedProfile.pure((2, 2, 2), (2, 2, 2))
    for seed in range(10):
        t = find_2lateral_witness(seed)
        game = t.game()
        assert verify_ineq02(t)
        assert (2, 2, 2) in enumerate_k_lateral(game, 2)
        assert is_k_lateral(game, 2, (2, 2, 2))
        assert mixed_v_k(game, 2, vertex) <= TOL
        seen.add((t.xa, t.xb, t.xc))
    assert len(seen) == 10


@C7
def test_c7_corner_reduction_on_1000_triples():
    rng = np.random.default_rng(7)
    vertex = MixedProfile.pure((2, 2, 2), (2, 2, 2))
    accepted = 0
    for _ in range(1000):
        t = random_triple(rng, -1, 2)
        corner = verify_ineq02(t)
        mixed = is_k_lateral_mixed(t.game(), 2, vertex, TOL)
        assert corner == mixed, t
        accepted += corner
    # both verdicts must actually occur
    assert 0 < accepted < 1000


# --- 8 ---------------------------------------------------------------------

C8 = c(8, "gallery claims")


@C8
def test_c8_date_dilemma():
    game = gallery.date_dilemma()
    assert enumerate_k_lateral(game, 1) == [(1, 1), (2, 2)]
    assert enumerate_k_lateral(game, 2) == [(2, 2)]


@C8
def test_c8_majority_voting_lateralities():
    for n in (1, 2):
        players = 2 * n + 1
        filt = filtration(gallery.majority_voting(n))
        # consensus is n-lateral but nothing is (n+1)-lateral
        assert filt.laterality((1,) * players) == n
        assert filt[n + 1] == ()
        # every candidate can win in an equilibrium
        for j in range(1, players + 1):
            assert (j,) * players in filt[1]
        # n+1 votes for 2 and n for 1: player 1 switches and wins
        assert filt.laterality((2,) * (n + 1) + (1,) * n) == 0
    filt = filtration(gallery.majority_voting(2))
    # x_1..x_{n+2} = 1, the rest n+2: 1-lateral, not 2-lateral
    assert filt.laterality((1, 1, 1, 1, 4)) == 1


@C8
def test_c8_inspection_no_pure_equilibrium():
    assert enumerate_k_lateral(gallery.inspection_game(10, 2, 1, 20), 1) == []


@C8
def test_c8_inspection_stated_mixed_profile():
    """The stated profile: employee shirks with g/w, boss inspects with h/w."""
    w, g, h, v = 10, 2, 1, 20
    game = gallery.inspection_game(w, g, h, v)
    stated = MixedProfile(((g / w, 1 - g / w), (h / w, 1 - h / w)))
    assert mixed_v_k(game, 1, stated) <= TOL
    for player in (1, 2):
        values = pure_payoffs_against(game, player, stated)
        assert abs(values[0] - values[1]) <= TOL


@C8
def test_c8_inspection_equilibrium_profile():
    from multilateral.mixed import inspection_equilibrium

    w, g, h, v = 10, 2, 1, 20
    game = gallery.inspection_game(w, g, h, v)
    mix = inspection_equilibrium(w, g, h, v)
    assert mixed_v_k(game, 1, mix) <= TOL
    for player in (1, 2):
        values = pure_payoffs_against(game, player, mix)
        assert abs(values[0] - values[1]) <= TOL


@C8
def test_c8_witness_game():
    disc = gallery.witness_game(3, 4)
    ne2 = set(enumerate_k_lateral(disc.game, 2))
    ne3 = set(enumerate_k_lateral(disc.game, 3))
    top = len(disc.grids[1])
    for a in range(1, len(disc.grids[0]) + 1):
        x = (a, top, top)
        assert disc.point(x)[1:] == (1.0, 1.0)
        assert x in ne2 and x not in ne3


# --- 9 ---------------------------------------------------------------------

C9 = c(9, "family scan")


@C9
def test_c9_fixed_point_check_matches_scan():
    rng = np.random.default_rng(9)
    hits = 0
    for _ in range(50):
        players = int(rng.integers(2, 4))
        counts = tuple(int(d) for d in rng.integers(2, 4, size=players))
        g0 = random_game(rng, counts=counts, low=-3, high=3)
        g1 = random_game(rng, counts=counts, low=-3, high=3)
        family = finite_family([g0, g1])
        k = int(rng.integers(1, players + 1))
        nonempty = bool(scan(family, k).nonempty_points)
        assert fiberwise_fixed_point_check(family, k) == nonempty
        hits += nonempty
    assert 0 < hits < 50


@C9
def test_c9_segment_table_deterministic():
    d = gallery.delta_witness_game()
    neg = FiniteGame(d.strategy_counts, tuple(-p for p in d.payoffs))
    ts = [i / 10 for i in range(11)]
    first = scan(segment_family(d, neg, ts), 2)
    second = scan(segment_family(d, neg, ts), 2, workers=4)
    assert first == second
    assert first.entries[0].point.coords == (0.0,) and first.entries[0].nonempty
    assert (2, 2, 2) in first.entries[0].equilibria
    assert fiberwise_fixed_point_check(segment_family(d, neg, ts), 2)


@C9
def test_c9_cournot_table():
    intercepts = list(range(50, 151, 10))
    first = scan(cournot_family(intercepts), 1)
    second = scan(cournot_family(intercepts), 1, workers=4)
    assert first == second
    step = 200 / 400
    for entry in first.entries:
        assert entry.nonempty
        x1, x2 = cournot_analysis(entry.point.coords[0]).equilibrium
        fam = cournot_family([entry.point.coords[0]])
        from multilateral.family import finite_fiber

        _, disc = finite_fiber(fam, entry.point)
        for x in entry.equilibria:
            p = disc.point(x)
            assert abs(p[0] - x1) <= step and abs(p[1] - x2) <= step
    at100 = first.entries[intercepts.index(100)]
    assert at100.witness_coords == (80.0, 30.0)


# --- 10 --------------------------------------------------------------------

C10 = c(10, "expression parser")


def _random_ast(rng: np.random.Generator, depth: int):
    leaf = depth == 0 or rng.random() < 0.25
    if leaf:
        if rng.random() < 0.5:
            return Var(f"x{int(rng.integers(1, 4))}")
        return Num(float(rng.choice([0.0, 0.5, 1.0, 2.0, 3.25, 10.0, 1e-5, 1.5e16])))
    kind = rng.integers(0, 5)
    if kind == 0:
        return Neg(_random_ast(rng, depth - 1))
    if kind == 1:
        return Pow(_random_ast(rng, depth - 1), int(rng.integers(0, 4)))
    if kind == 2:
        func = str(rng.choice(["min", "max", "abs"]))
        arity = 1 if func == "abs" else int(rng.integers(1, 4))
        return Call(func, tuple(_random_ast(rng, depth - 1) for _ in range(arity)))
    if kind == 3:
        op = str(rng.choice(["<", "<=", ">", ">=", "=="]))
        cond = Compare(op, _random_ast(rng, depth - 1), _random_ast(rng, depth - 1))
        return Ite(cond, _random_ast(rng, depth - 1), _random_ast(rng, depth - 1))
    op = str(rng.choice(["+", "-", "*", "/"]))
    return BinOp(op, _random_ast(rng, depth - 1), _random_ast(rng, depth - 1))


@C10
def test_c10_round_trip_1000_asts():
    rng = np.random.default_rng(10)
    for _ in range(1000):
        node = _random_ast(rng, int(rng.integers(1, 6)))
        text = to_text(node)
        assert parse_expr(text) == node, text


@C10
def test_c10_cournot_gradient():
    game = cournot_game()
    rep = cournot_analysis()
    x1, x2 = rep.equilibrium
    h = 1e-3

    def grad(player):
        f = lambda p: eval_expr(parse_expr(game.formula(player)), {"x1": p[0], "x2": p[1]})
        d1 = (f((x1 + h, x2)) - f((x1 - h, x2))) / (2 * h)
        d2 = (f((x1, x2 + h)) - f((x1, x2 - h))) / (2 * h)
        return d1, d2

    (own1, cross1), (cross2, own2) = grad(1), grad(2)
    assert abs(cross1 - (-40)) <= 1e-4 and abs(cross2 - (-15)) <= 1e-4
    assert rep.cross_partials == (-40.0, -15.0)
    assert max(abs(v) for v in rep.own_partials) <= 1e-9
    assert abs(own1 - rep.own_partials[0]) <= 1e-4 and abs(own2 - rep.own_partials[1]) <= 1e-4
