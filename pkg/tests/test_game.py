from decimal import Decimal
from fractions import Fraction
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helpers import game_and_profile, rationals
from multilateral.errors import InvalidArgument
from multilateral.gallery import date_dilemma
from multilateral.game import (
    FiniteGame,
    PartialProfile,
    coalitions,
    compose,
    format_rational,
    make_coalition,
    payoff,
    restrict,
    to_rational,
    validate,
)


def test_date_dilemma_payoffs():
    game = date_dilemma()
    assert payoff(game, 1, (2, 2)) == 5
    assert payoff(game, 1, (1, 1)) == 3
    assert payoff(game, 2, (1, 2)) == 0


def test_single_entry_game():
    game = FiniteGame((1, 1, 1), (["7/2"], [0], [0]))
    assert payoff(game, 1, (1, 1, 1)) == Fraction(7, 2)


def test_layout_last_player_fastest():
    game = FiniteGame((2, 3), (list(range(6)), [0] * 6))
    assert payoff(game, 1, (1, 3)) == 2
    assert payoff(game, 1, (2, 1)) == 3


def test_payoff_rejects_bad_indices():
    game = date_dilemma()
    with pytest.raises(InvalidArgument):
        payoff(game, 3, (1, 1))
    with pytest.raises(InvalidArgument):
        payoff(game, 1, (1, 3))
    with pytest.raises(InvalidArgument):
        payoff(game, 1, (1,))


def test_compose_examples():
    assert compose((1, 2, 3), PartialProfile((2,), (9,))) == (1, 9, 3)
    assert compose((1, 1), PartialProfile((1, 2), (2, 2))) == (2, 2)
    assert compose((2, 2), PartialProfile((1,), (2,))) == (2, 2)


def test_compose_checks_range_against_game():
    game = FiniteGame((3, 9, 3), ([0] * 81, [0] * 81, [0] * 81))
    assert compose((1, 2, 3), PartialProfile((2,), (9,)), game) == (1, 9, 3)
    with pytest.raises(InvalidArgument):
        compose((1, 2, 3), PartialProfile((1,), (4,)), game)
    with pytest.raises(InvalidArgument):
        compose((1, 2), PartialProfile((3,), (1,)))


def test_partial_profile_sorts_members_with_their_choices():
    y = PartialProfile((3, 1), (7, 5))
    assert y.coalition == (1, 3) and y.choices == (5, 7)
    assert compose((1, 1, 1), y) == (5, 1, 7)
    with pytest.raises(InvalidArgument):
        PartialProfile((1, 1), (1, 2))


def test_validate_messages():
    assert validate(date_dilemma()) == []
    bad = SimpleNamespace(strategy_counts=[2, 2], payoffs=[[1, 2, 3, 4], [1, 2, 3]])
    problems = validate(bad)
    assert len(problems) == 1 and "player 2" in problems[0]
    empty = SimpleNamespace(strategy_counts=[2, 0], payoffs=[[], []])
    assert any("empty game" in p for p in validate(empty))


def test_constructor_rejects_invalid():
    with pytest.raises(InvalidArgument, match="empty game"):
        FiniteGame((2, 0), ([], []))
    with pytest.raises(InvalidArgument):
        FiniteGame((2, 2), ([1, 2, 3], [1, 2, 3, 4]))
    with pytest.raises(InvalidArgument):
        FiniteGame((2, 2), ([1, 2, 3, 4],))
    with pytest.raises(InvalidArgument):
        FiniteGame((2,), ([1, 2],), labels=(("a",),))


def test_exact_and_float_games():
    exact = FiniteGame((2,), ([1, "1/3"],))
    assert exact.exact and exact.payoffs[0][1] == Fraction(1, 3)
    approx = FiniteGame((2,), ([1, 0.5],))
    assert not approx.exact and approx.payoffs[0].dtype == np.float64
    assert exact.tolerance() == 0 and approx.tolerance() == 1e-9


def test_tensors_are_read_only():
    game = date_dilemma()
    with pytest.raises(ValueError):
        game.payoffs[0][0, 0] = 9


def test_to_rational_inputs():
    assert to_rational(3) == 3
    assert to_rational("-4/6") == Fraction(-2, 3)
    assert to_rational(Decimal("0.1")) == Fraction(1, 10)
    assert to_rational("2.5") == Fraction(5, 2)
    for bad in (0.1, "x", True, "1/0"):
        with pytest.raises(InvalidArgument):
            to_rational(bad)
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert format_rational(Fraction(4, 2)) == "2"


def test_coalitions():
    assert coalitions(3, 2) == [(1, 2), (1, 3), (2, 3)]
    assert make_coalition((3, 1), 3) == (1, 3)
    for bad in ((), (1, 1), (0,), (4,)):
        with pytest.raises(InvalidArgument):
            make_coalition(bad, 3)
    with pytest.raises(InvalidArgument):
        coalitions(3, 4)


@given(game_and_profile(), st.data())
def test_compose_restrict_identity(gx, data):
    game, x = gx
    n = game.num_players
    members = data.draw(st.sets(st.integers(1, n), min_size=1))
    assert compose(x, restrict(x, sorted(members)), game) == x


@given(st.permutations([1, 2, 3, 4]), st.lists(st.integers(1, 5), min_size=4, max_size=4))
def test_compose_ignores_member_order(order, choices):
    x = (1, 1, 1, 1)
    y = PartialProfile(tuple(order), tuple(choices[m - 1] for m in order))
    assert compose(x, y) == tuple(choices)


@given(rationals, rationals)
def test_rational_arithmetic_exact(a, b):
    assert (a + b) - b == a
    if a != 0:
        assert a * (1 / a) == 1
    assert to_rational(format_rational(a)) == a
