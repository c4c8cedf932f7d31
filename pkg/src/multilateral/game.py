"""Finite games in normal form, pure profiles and coalitions.

Profiles are plain tuples of 1-based strategy indices ``(j_1, ..., j_N)``.
Coalitions are strictly increasing tuples of 1-based player indices.
Payoff tensors are stored as numpy arrays of shape ``strategy_counts``; exact
games hold :class:`fractions.Fraction` objects, discretized games hold float64.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Integral, Rational
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidArgument

#: absolute tolerance used for float-valued games when the caller gives none
DEFAULT_FLOAT_TOL = 1e-9

Profile = tuple[int, ...]
Coalition = tuple[int, ...]


def to_rational(value) -> Fraction:
    """Convert ints, Fractions, Decimals and ``"p/q"`` / decimal strings exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise InvalidArgument(f"not a number: {value!r}")
    if isinstance(value, (Integral, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidArgument(f"not a rational number: {value!r}") from exc
    if isinstance(value, (float, np.floating)):
        raise InvalidArgument(f"float {value!r} has no exact rational reading; pass a string")
    raise InvalidArgument(f"not a number: {value!r}")


def format_rational(value: Fraction) -> str:
    """Canonical ``p/q`` text (``p`` alone when the denominator is 1)."""
    value = to_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _is_float(value) -> bool:
    return isinstance(value, (float, np.floating))


def _tensor_size(payoff) -> int:
    return int(np.size(payoff)) if isinstance(payoff, np.ndarray) else len(payoff)


def validate(game) -> list[str]:
    """List every broken invariant of a game-like object.

    Works on anything exposing ``strategy_counts`` and ``payoffs`` so that raw,
    not-yet-constructed data can be checked too. An empty list means valid.
    """
    problems: list[str] = []
    counts = list(game.strategy_counts)
    payoffs = list(game.payoffs)
    if not counts:
        problems.append("a game needs at least one player")
    for i, d in enumerate(counts, start=1):
        if not isinstance(d, (Integral, np.integer)) or isinstance(d, bool):
            problems.append(f"player {i}: strategy count {d!r} is not an integer")
        elif d == 0:
            problems.append(f"player {i}: strategy count 0 makes this the empty game")
        elif d < 0:
            problems.append(f"player {i}: strategy count {d} is negative")
    if len(payoffs) != len(counts):
        problems.append(
            f"{len(payoffs)} payoff tensors given for {len(counts)} players"
        )
    if problems:
        return problems
    size = math.prod(int(d) for d in counts)
    for i, payoff in enumerate(payoffs, start=1):
        n = _tensor_size(payoff)
        if n != size:
            problems.append(f"player {i}: payoff tensor has {n} entries, expected {size}")
    return problems


@dataclass(frozen=True, eq=False)
class FiniteGame:
    """An N-player game with finitely many pure strategies per player.

    ``payoffs[i]`` may be given as a flat row-major sequence (player N's index
    varying fastest) or as an array of shape ``strategy_counts``.
    """

    strategy_counts: tuple[int, ...]
    payoffs: tuple[np.ndarray, ...]
    labels: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self):
        counts = tuple(self.strategy_counts)
        raw = tuple(self.payoffs)
        problems = validate(_Raw(counts, raw))
        if problems:
            raise InvalidArgument("invalid game: " + "; ".join(problems))
        counts = tuple(int(d) for d in counts)
        entries = [np.asarray(p, dtype=object).reshape(-1) for p in raw]
        use_float = any(_is_float(v) for flat in entries for v in flat)
        tensors = []
        for flat in entries:
            if use_float:
                arr = np.array([float(v) for v in flat], dtype=np.float64)
            else:
                arr = np.empty(len(flat), dtype=object)
                arr[:] = [to_rational(v) for v in flat]
            arr = arr.reshape(counts)
            arr.setflags(write=False)
            tensors.append(arr)
        object.__setattr__(self, "strategy_counts", counts)
        object.__setattr__(self, "payoffs", tuple(tensors))
        if self.labels is not None:
            labels = tuple(tuple(str(s) for s in row) for row in self.labels)
            if len(labels) != len(counts) or any(
                len(row) != d for row, d in zip(labels, counts)
            ):
                raise InvalidArgument("strategy labels do not match strategy counts")
            object.__setattr__(self, "labels", labels)

    @property
    def num_players(self) -> int:
        return len(self.strategy_counts)

    @property
    def exact(self) -> bool:
        return self.payoffs[0].dtype == object

    @property
    def num_profiles(self) -> int:
        return math.prod(self.strategy_counts)

    def tolerance(self, tol: float | None = None):
        """Comparison slack: the caller's ``tol``, else 0 (exact) or 1e-9 (float)."""
        if tol is not None:
            if tol < 0:
                raise InvalidArgument(f"tolerance must be non-negative, got {tol}")
            return tol
        return 0 if self.exact else DEFAULT_FLOAT_TOL

    def profiles(self) -> Iterator[Profile]:
        """All pure profiles in lexicographic order."""
        return itertools.product(*(range(1, d + 1) for d in self.strategy_counts))

    def check_profile(self, x: Sequence[int]) -> Profile:
        x = tuple(int(j) for j in x)
        if len(x) != self.num_players:
            raise InvalidArgument(f"profile {x} has {len(x)} entries, game has {self.num_players} players")
        for i, (j, d) in enumerate(zip(x, self.strategy_counts), start=1):
            if not 1 <= j <= d:
                raise InvalidArgument(f"profile {x}: player {i} strategy {j} outside 1..{d}")
        return x

    def check_player(self, player: int) -> int:
        if not 1 <= player <= self.num_players:
            raise InvalidArgument(f"player {player} outside 1..{self.num_players}")
        return player

    def value(self, player: int, x: Profile):
        """Unchecked payoff lookup; ``x`` must already be valid."""
        return self.payoffs[player - 1][tuple(j - 1 for j in x)]

    def label(self, x: Profile) -> str:
        if self.labels is None:
            return "(" + ",".join(str(j) for j in x) + ")"
        return "(" + ",".join(self.labels[i][j - 1] for i, j in enumerate(x)) + ")"

    def flat_payoffs(self, player: int) -> list:
        return list(self.payoffs[player - 1].reshape(-1))

    def __eq__(self, other):
        if not isinstance(other, FiniteGame):
            return NotImplemented
        return self.strategy_counts == other.strategy_counts and all(
            np.array_equal(a, b) for a, b in zip(self.payoffs, other.payoffs)
        )

    def __hash__(self):
        return hash((self.strategy_counts, tuple(tuple(p.reshape(-1)) for p in self.payoffs)))

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"FiniteGame(strategy_counts={self.strategy_counts}, {kind})"


@dataclass(frozen=True)
class _Raw:
    strategy_counts: tuple
    payoffs: tuple


def payoff(game: FiniteGame, player: int, x: Sequence[int]):
    """Payoff of ``player`` at pure profile ``x``."""
    game.check_player(player)
    return game.value(player, game.check_profile(x))


def make_coalition(members: Sequence[int], num_players: int) -> Coalition:
    """Validate and canonically sort a coalition of distinct players."""
    members = tuple(sorted(int(m) for m in members))
    if not members:
        raise InvalidArgument("a coalition needs at least one member")
    if len(set(members)) != len(members):
        raise InvalidArgument(f"coalition {members} repeats a player")
    if members[0] < 1 or members[-1] > num_players:
        raise InvalidArgument(f"coalition {members} not within players 1..{num_players}")
    return members


def coalitions(num_players: int, k: int) -> list[Coalition]:
    """All k-element coalitions of ``num_players`` players, lexicographically."""
    if not 1 <= k <= num_players:
        raise InvalidArgument(f"coalition size {k} outside 1..{num_players}")
    return list(itertools.combinations(range(1, num_players + 1), k))


@dataclass(frozen=True)
class PartialProfile:
    """Strategy choices ``y_I`` of the members of one coalition."""

    coalition: Coalition
    choices: tuple[int, ...]

    def __post_init__(self):
        coalition = tuple(self.coalition)
        choices = tuple(self.choices)
        if len(coalition) != len(choices):
            raise InvalidArgument("coalition and choices differ in length")
        if len(set(coalition)) != len(coalition):
            raise InvalidArgument(f"coalition {coalition} repeats a player")
        # members are kept sorted; choices follow their player
        order = sorted(range(len(coalition)), key=coalition.__getitem__)
        coalition = tuple(coalition[i] for i in order)
        choices = tuple(choices[i] for i in order)
        object.__setattr__(self, "coalition", coalition)
        object.__setattr__(self, "choices", choices)


def restrict(x: Sequence[int], coalition: Sequence[int]) -> PartialProfile:
    """The block ``x_I`` of a profile."""
    coalition = make_coalition(coalition, len(x))
    return PartialProfile(coalition, tuple(x[i - 1] for i in coalition))


def compose(x: Sequence[int], y: PartialProfile, game: FiniteGame | None = None) -> Profile:
    """``(y_I, x_{-I})``: replace the coalition's coordinates of ``x`` by ``y``."""
    x = tuple(x)
    if game is not None:
        game.check_profile(x)
    make_coalition(y.coalition, len(x))
    out = list(x)
    for i, j in zip(y.coalition, y.choices):
        if game is not None and not 1 <= j <= game.strategy_counts[i - 1]:
            raise InvalidArgument(f"player {i} strategy {j} outside 1..{game.strategy_counts[i - 1]}")
        if j < 1:
            raise InvalidArgument(f"strategy index {j} must be positive")
        out[i - 1] = j
    return tuple(out)
