"""Coalition marginal values, best replies and k-lateral equilibria of finite games.

A profile ``x`` is a k-lateral equilibrium when no member of any k-player
coalition gains from any joint deviation of that coalition, with everyone
else held at ``x``.  Every member must be unable to gain; the weaker reading
in which one non-improving member suffices is deliberately not offered.

Payoff comparisons use ``game.tolerance(tol)``: exact for rational games,
``1e-9`` absolute by default for float (discretized) games.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Sequence

import numpy as np

from .errors import InvalidArgument, ResourceLimit
from .game import Coalition, FiniteGame, Profile, coalitions, make_coalition

if TYPE_CHECKING:
    from .kneser import KneserCover

#: default cap on the number of pure profiles an exhaustive search may visit
DEFAULT_BUDGET = 10**6


def check_budget(game: FiniteGame, budget: int | None) -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    if game.num_profiles > budget:
        raise ResourceLimit(
            f"game has {game.num_profiles} pure profiles, above the enumeration budget of {budget}",
            bound=budget,
            required=game.num_profiles,
        )


def _check_k(game: FiniteGame, k: int) -> int:
    if not 1 <= k <= game.num_players:
        raise InvalidArgument(f"laterality k={k} outside 1..{game.num_players}")
    return k


def deviations(game: FiniteGame, coalition: Coalition, x: Profile) -> Iterator[tuple[tuple[int, ...], tuple]]:
    """Yield ``(y_I, (theta_i(y_I, x_-I) for i in I))`` over all joint deviations."""
    current = [j - 1 for j in x]
    tensors = [game.payoffs[i - 1] for i in coalition]
    ranges = [range(game.strategy_counts[i - 1]) for i in coalition]
    for y in itertools.product(*ranges):
        for i, j in zip(coalition, y):
            current[i - 1] = j
        index = tuple(current)
        yield tuple(j + 1 for j in y), tuple(t[index] for t in tensors)


def _prepare(game: FiniteGame, coalition: Sequence[int], x: Sequence[int]) -> tuple[Coalition, Profile]:
    return make_coalition(coalition, game.num_players), game.check_profile(x)


def marginal_values(game: FiniteGame, coalition: Sequence[int], x: Sequence[int]) -> dict[int, object]:
    """Per member ``i``, the best payoff ``i`` can see under any joint deviation of the coalition."""
    coalition, x = _prepare(game, coalition, x)
    best = None
    for _, values in deviations(game, coalition, x):
        best = list(values) if best is None else [max(b, v) for b, v in zip(best, values)]
    return dict(zip(coalition, best))


def best_reply_set(
    game: FiniteGame, coalition: Sequence[int], x: Sequence[int], tol: float | None = None
) -> set[tuple[int, ...]]:
    """Joint deviations ``y_I`` that reach every member's marginal value at once.

    The result can be empty when members' interests conflict.
    """
    coalition, x = _prepare(game, coalition, x)
    tol = game.tolerance(tol)
    table = list(deviations(game, coalition, x))
    best = [max(values[m] for _, values in table) for m in range(len(coalition))]
    return {
        y
        for y, values in table
        if all(v >= b - tol for v, b in zip(values, best))
    }


def is_k_lateral(game: FiniteGame, k: int, x: Sequence[int], tol: float | None = None) -> bool:
    """Whether ``x`` resists every joint deviation by every coalition of size ``k``."""
    _check_k(game, k)
    x = game.check_profile(x)
    tol = game.tolerance(tol)
    for coalition in coalitions(game.num_players, k):
        current = [game.value(i, x) for i in coalition]
        for _, values in deviations(game, coalition, x):
            if any(v > c + tol for v, c in zip(values, current)):
                return False
    return True


def enumerate_k_lateral(
    game: FiniteGame, k: int, tol: float | None = None, budget: int | None = None
) -> list[Profile]:
    """All k-lateral equilibria, in lexicographic order.

    Works tensor-wide: for each coalition ``I`` and member ``i`` the marginal
    value is the max of ``X_i`` over the axes of ``I``, and a profile survives
    when it attains that max for every ``(I, i)`` pair.
    """
    _check_k(game, k)
    check_budget(game, budget)
    tol = game.tolerance(tol)
    mask = np.ones(game.strategy_counts, dtype=bool)
    for coalition in coalitions(game.num_players, k):
        axes = tuple(i - 1 for i in coalition)
        for i in coalition:
            tensor = game.payoffs[i - 1]
            best = tensor.max(axis=axes, keepdims=True)
            mask &= np.asarray(tensor >= best - tol, dtype=bool)
    return [tuple(int(j) + 1 for j in idx) for idx in np.argwhere(mask)]


def nash_equilibria(game: FiniteGame, tol: float | None = None, budget: int | None = None) -> list[Profile]:
    """Pure Nash equilibria (the 1-lateral level)."""
    return enumerate_k_lateral(game, 1, tol, budget)


@dataclass(frozen=True)
class Filtration:
    """The chain NE_1 ⊇ NE_2 ⊇ ... ⊇ NE_N of a game."""

    levels: tuple[tuple[Profile, ...], ...]

    def __getitem__(self, k: int) -> tuple[Profile, ...]:
        if not 1 <= k <= len(self.levels):
            raise InvalidArgument(f"filtration level {k} outside 1..{len(self.levels)}")
        return self.levels[k - 1]

    def __len__(self):
        return len(self.levels)

    def laterality(self, x: Profile) -> int:
        """Largest k with ``x`` in NE_k, or 0 when ``x`` is no equilibrium."""
        top = 0
        for k, level in enumerate(self.levels, start=1):
            if tuple(x) in level:
                top = k
        return top


def filtration(game: FiniteGame, tol: float | None = None, budget: int | None = None) -> Filtration:
    levels = tuple(
        tuple(enumerate_k_lateral(game, k, tol, budget)) for k in range(1, game.num_players + 1)
    )
    for k in range(1, len(levels)):
        if not set(levels[k]) <= set(levels[k - 1]):
            raise RuntimeError(f"filtration nesting broken between levels {k} and {k + 1}")
    return Filtration(levels)


def check_fg_criterion(game: FiniteGame, k: int, x: Sequence[int], tol: float | None = None) -> bool:
    """Coincidence test: the block ``x_I`` lies in the coalition best replies for every ``I``."""
    _check_k(game, k)
    x = game.check_profile(x)
    return all(
        tuple(x[i - 1] for i in coalition) in best_reply_set(game, coalition, x, tol)
        for coalition in coalitions(game.num_players, k)
    )


def modified_best_reply_contains(
    game: FiniteGame,
    coalition: Sequence[int],
    x: Sequence[int],
    candidate: Sequence[int],
    tol: float | None = None,
) -> bool:
    """Membership of a full profile in the extended best reply of ``coalition`` at ``x``.

    Only the coalition's block of ``candidate`` is constrained; the other
    coordinates are free.
    """
    coalition, x = _prepare(game, coalition, x)
    candidate = game.check_profile(candidate)
    tol = game.tolerance(tol)
    targets = marginal_values(game, coalition, x)
    probe = list(x)
    for i in coalition:
        probe[i - 1] = candidate[i - 1]
    probe = tuple(probe)
    return all(game.value(i, probe) >= targets[i] - tol for i in coalition)


def check_simultaneous_fixed_point(game: FiniteGame, k: int, x: Sequence[int], tol: float | None = None) -> bool:
    """``x`` is a common fixed point of the extended best replies of all k-coalitions."""
    _check_k(game, k)
    x = game.check_profile(x)
    return all(
        modified_best_reply_contains(game, coalition, x, x, tol)
        for coalition in coalitions(game.num_players, k)
    )


def check_grouped_criterion(
    game: FiniteGame, k: int, x: Sequence[int], cover: "KneserCover", tol: float | None = None
) -> bool:
    """Fixed-point test with the k-coalitions grouped into the classes of a clique cover.

    Coalitions in a class are pairwise disjoint, so the intersection of their
    extended best replies constrains disjoint blocks and is the product of the
    individual coalition best replies on the union of those blocks.
    """
    _check_k(game, k)
    x = game.check_profile(x)
    cover.check(game.num_players, k)
    for group in cover.classes:
        factors = [best_reply_set(game, coalition, x, tol) for coalition in group]
        blocks = [tuple(x[i - 1] for i in coalition) for coalition in group]
        if not all(block in factor for block, factor in zip(blocks, factors)):
            return False
    return True


def best_reply_profiles(game: FiniteGame, x: Sequence[int], tol: float | None = None) -> set[Profile]:
    """The classical global best reply: the product of every player's own best replies."""
    x = game.check_profile(x)
    per_player = [
        sorted(y[0] for y in best_reply_set(game, (i,), x, tol))
        for i in range(1, game.num_players + 1)
    ]
    return set(itertools.product(*per_player))
