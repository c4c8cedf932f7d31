"""Nikaido–Isoda functions of finite games and their maximal values.

``psi_classical`` sums every player's unilateral gain; ``psi_k`` takes the
largest gain any member of any k-coalition gets from the coalition's block of
``y``.  Their maxima over ``y`` vanish exactly at the (k-lateral) equilibria.
"""

from __future__ import annotations

from typing import Sequence

from .equilibrium import best_reply_profiles, check_budget, deviations
from .game import FiniteGame, Profile, coalitions


def _splice(x: Profile, y: Profile, coalition) -> Profile:
    out = list(x)
    for i in coalition:
        out[i - 1] = y[i - 1]
    return tuple(out)


def psi_classical(game: FiniteGame, x: Sequence[int], y: Sequence[int]):
    x, y = game.check_profile(x), game.check_profile(y)
    return sum(
        (game.value(i, _splice(x, y, (i,))) - game.value(i, x) for i in range(1, game.num_players + 1)),
        start=0,
    )


def psi_k(game: FiniteGame, k: int, x: Sequence[int], y: Sequence[int]):
    """Largest gain ``theta_i(y_I, x_-I) - theta_i(x)`` over k-coalitions ``I`` and ``i`` in ``I``."""
    x, y = game.check_profile(x), game.check_profile(y)
    return max(
        game.value(i, _splice(x, y, coalition)) - game.value(i, x)
        for coalition in coalitions(game.num_players, k)
        for i in coalition
    )


def psi_modified(game: FiniteGame, x: Sequence[int], y: Sequence[int]):
    """Max-form (instead of sum-form) unilateral Nikaido–Isoda function."""
    return psi_k(game, 1, x, y)


def v_classical(game: FiniteGame, x: Sequence[int], budget: int | None = None):
    check_budget(game, budget)
    x = game.check_profile(x)
    return max(psi_classical(game, x, y) for y in game.profiles())


def v_k(game: FiniteGame, k: int, x: Sequence[int], budget: int | None = None):
    """Maximum of ``psi_k(x, .)`` over pure profiles.

    Evaluated coalition by coalition: ``psi_k`` reads ``y`` only through the
    blocks ``y_I``, so maximizing over each block separately gives the same value
    as scanning all of ``E``.  ``v_k_exhaustive`` does the full scan.
    """
    check_budget(game, budget)
    x = game.check_profile(x)
    best = 0
    for coalition in coalitions(game.num_players, k):
        current = [game.value(i, x) for i in coalition]
        for _, values in deviations(game, coalition, x):
            for v, c in zip(values, current):
                if v - c > best:
                    best = v - c
    return best


def v_k_exhaustive(game: FiniteGame, k: int, x: Sequence[int], budget: int | None = None):
    check_budget(game, budget)
    x = game.check_profile(x)
    return max(psi_k(game, k, x, y) for y in game.profiles())


def _equal(game: FiniteGame, a, b, tol) -> bool:
    return abs(a - b) <= game.tolerance(tol)


def r_k_contains(game: FiniteGame, k: int, x: Sequence[int], y: Sequence[int], tol: float | None = None) -> bool:
    """Whether ``y`` attains the maximum of ``psi_k(x, .)``."""
    return _equal(game, psi_k(game, k, x, y), v_k(game, k, x), tol)


def r_k_set(game: FiniteGame, k: int, x: Sequence[int], tol: float | None = None) -> set[Profile]:
    top = v_k(game, k, x)
    return {y for y in game.profiles() if _equal(game, psi_k(game, k, x, y), top, tol)}


def r_classical_set(game: FiniteGame, x: Sequence[int], tol: float | None = None) -> set[Profile]:
    top = v_classical(game, x)
    return {y for y in game.profiles() if _equal(game, psi_classical(game, x, y), top, tol)}


def check_classical_equivalence(game: FiniteGame, x: Sequence[int], tol: float | None = None) -> bool:
    """The maximizers of the sum-form function coincide with the product of best replies."""
    return r_classical_set(game, x, tol) == best_reply_profiles(game, x, tol)
