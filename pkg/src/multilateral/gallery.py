"""Constructors for the worked example games."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .continuous import Discretization, discretize, witness_continuous
from .equilibrium import DEFAULT_BUDGET
from .errors import InvalidArgument, ResourceLimit
from .game import FiniteGame, Profile
from .mixed import TensorTriple, delta_triple


def date_dilemma() -> FiniteGame:
    """Two friends choose camping (C) or the amusement park (A); both prefer going together, ideally to A."""
    table = [3, 0, 0, 5]  # (C,C) (C,A) (A,C) (A,A)
    return FiniteGame((2, 2), (table, table), labels=(("C", "A"), ("C", "A")))


def matching_pennies() -> FiniteGame:
    return FiniteGame((2, 2), ([1, -1, -1, 1], [-1, 1, 1, -1]), labels=(("H", "T"), ("H", "T")))


def witness_game(num_players: int, grid_m: int, budget: int | None = None) -> Discretization:
    """The truncated-projection game of player A against witnesses B_1..B_{N-1}, on a grid."""
    return discretize(witness_continuous(num_players), grid_m, budget)


def elected_leader(x: Profile) -> int:
    """Most-voted candidate; ties go to the smallest label."""
    counts: dict[int, int] = {}
    for vote in x:
        counts[vote] = counts.get(vote, 0) + 1
    top = max(counts.values())
    return min(c for c, n in counts.items() if n == top)


def majority_voting(n: int, budget: int | None = None) -> FiniteGame:
    """``2n+1`` voters elect one of themselves; each wants to be the leader."""
    if n < 1:
        raise InvalidArgument(f"need n >= 1, got {n}")
    players = 2 * n + 1
    size = players**players
    budget = DEFAULT_BUDGET if budget is None else budget
    if size > budget:
        raise ResourceLimit(
            f"majority voting with {players} voters has {size} profiles, above the budget of {budget}",
            bound=budget,
            required=size,
        )
    leaders = np.empty((players,) * players, dtype=np.int64)
    for x in itertools.product(range(1, players + 1), repeat=players):
        leaders[tuple(j - 1 for j in x)] = elected_leader(x)
    payoffs = tuple((leaders == i).astype(np.int64).reshape(-1).tolist() for i in range(1, players + 1))
    return FiniteGame((players,) * players, payoffs)


def inspection_game(w, g, h, v) -> FiniteGame:
    """Employee (not work, work) against boss (inspect, not inspect).

    Arguments may be ints, Fractions or ``"p/q"`` strings; payoffs stay exact.
    """
    w, g, h, v = (Fraction(a) for a in (w, g, h, v))
    if not (0 < g < w and 0 < h < w):
        raise InvalidArgument(f"need 0 < g < w and 0 < h < w, got w={w}, g={g}, h={h}")
    employee = [0, w, w - g, w - g]
    boss = [-h, -w, v - w - h, v - w]
    return FiniteGame(
        (2, 2),
        (employee, boss),
        labels=(("shirk", "work"), ("inspect", "trust")),
    )


def delta_witness_game() -> FiniteGame:
    """The 2x2x2 game in which everyone scores 1 at (2,2,2) and 0 elsewhere."""
    return delta_triple().game()


def triple_game(t: TensorTriple) -> FiniteGame:
    return t.game()
