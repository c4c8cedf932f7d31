"""Seeded generators shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from multilateral.game import FiniteGame
from multilateral.mixed import TensorTriple


def random_game(
    rng: np.random.Generator,
    players: int | None = None,
    counts: tuple[int, ...] | None = None,
    low: int = -2,
    high: int = 2,
) -> FiniteGame:
    """Small exact game; narrow payoff range so ties (and equilibria) are common."""
    if counts is None:
        players = players if players is not None else int(rng.integers(2, 5))
        counts = tuple(int(d) for d in rng.integers(2, 4, size=players))
    size = int(np.prod(counts))
    payoffs = []
    for _ in counts:
        nums = rng.integers(low, high + 1, size=size)
        dens = rng.choice([1, 2], size=size)
        payoffs.append([Fraction(int(a), int(b)) for a, b in zip(nums, dens)])
    return FiniteGame(tuple(counts), tuple(payoffs))


def oracle_suite(count: int = 200, seed: int = 2024) -> list[FiniteGame]:
    """The seeded game suite: N cycles through 2, 3, 4 and each d_i is 2 or 3."""
    games = []
    for n in range(count):
        rng = np.random.default_rng(seed + n)
        games.append(random_game(rng, players=(2, 3, 4)[n % 3]))
    return games


def random_triple(rng: np.random.Generator, low: int = -2, high: int = 2) -> TensorTriple:
    t = rng.integers(low, high + 1, size=(3, 8))
    return TensorTriple(*(tuple(int(v) for v in row) for row in t))


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def small_games(draw, max_players: int = 3, max_strategies: int = 3) -> FiniteGame:
    n = draw(st.integers(1, max_players))
    counts = tuple(draw(st.lists(st.integers(1, max_strategies), min_size=n, max_size=n)))
    size = int(np.prod(counts))
    entries = st.integers(-3, 3).map(Fraction)
    payoffs = tuple(draw(st.lists(entries, min_size=size, max_size=size)) for _ in counts)
    return FiniteGame(counts, payoffs)


@st.composite
def game_and_profile(draw, max_players: int = 3, max_strategies: int = 3):
    game = draw(small_games(max_players, max_strategies))
    x = tuple(draw(st.integers(1, d)) for d in game.strategy_counts)
    return game, x
