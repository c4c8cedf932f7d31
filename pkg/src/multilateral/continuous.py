"""Games with one scalar strategy per player on a closed interval.

Payoffs are formulas in the expression language.  ``discretize`` samples each
interval on an even grid and returns a float-valued :class:`FiniteGame`, so
the finite equilibrium machinery applies with an absolute tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .equilibrium import DEFAULT_BUDGET
from .errors import DegenerateParameters, InvalidArgument, ResourceLimit
from .expr import Expr, eval_array, eval_expr, parse_expr, to_text, variables
from .game import FiniteGame, Profile


@dataclass(frozen=True)
class ContinuousGame:
    """``intervals[i]`` is player i+1's strategy set, ``payoffs[i]`` their profit formula.

    Formulas may be given as text.  ``params`` binds family symbols ``b1..bM``.
    """

    intervals: tuple[tuple[float, float], ...]
    payoffs: tuple[Expr, ...]
    params: Mapping[str, float] = field(default_factory=dict)
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        intervals = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        if not intervals:
            raise InvalidArgument("a game needs at least one player")
        for i, (lo, hi) in enumerate(intervals, start=1):
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
                raise InvalidArgument(f"player {i}: interval [{lo}, {hi}] is empty or unbounded")
        n = len(intervals)
        if len(self.payoffs) != n:
            raise InvalidArgument(f"{len(self.payoffs)} payoff formulas for {n} players")
        params = {str(k): float(v) for k, v in dict(self.params).items()}
        num_params = max((int(k[1:]) for k in params), default=0)
        formulas = []
        for i, p in enumerate(self.payoffs, start=1):
            node = parse_expr(p, n, None) if isinstance(p, str) else p
            for name in sorted(variables(node)):
                if name.startswith("x") and not 1 <= int(name[1:]) <= n:
                    raise InvalidArgument(f"player {i}: payoff uses {name} but there are {n} players")
                if name.startswith("b") and name not in params:
                    raise InvalidArgument(f"player {i}: payoff uses unbound parameter {name}")
            formulas.append(node)
        if any(not k.startswith("b") or not k[1:].isdigit() for k in params):
            raise InvalidArgument(f"parameter names must be b1..b{num_params}")
        object.__setattr__(self, "intervals", intervals)
        object.__setattr__(self, "payoffs", tuple(formulas))
        object.__setattr__(self, "params", params)

    @property
    def num_players(self) -> int:
        return len(self.intervals)

    def bindings(self, point: Sequence[float]) -> dict[str, float]:
        out = {f"x{i}": float(v) for i, v in enumerate(point, start=1)}
        out.update(self.params)
        return out

    def payoff(self, player: int, point: Sequence[float]) -> float:
        if not 1 <= player <= self.num_players:
            raise InvalidArgument(f"player {player} outside 1..{self.num_players}")
        if len(point) != self.num_players:
            raise InvalidArgument(f"point has {len(point)} coordinates, game has {self.num_players} players")
        return eval_expr(self.payoffs[player - 1], self.bindings(point))

    def formula(self, player: int) -> str:
        return to_text(self.payoffs[player - 1])


@dataclass(frozen=True)
class Discretization:
    """A continuous game sampled on a grid: the finite game plus the node values."""

    game: FiniteGame
    grids: tuple[tuple[float, ...], ...]
    source: ContinuousGame

    def point(self, x: Sequence[int]) -> tuple[float, ...]:
        """Coordinates of the grid profile ``x`` (1-based node indices)."""
        x = self.game.check_profile(x)
        return tuple(self.grids[i][j - 1] for i, j in enumerate(x))

    def profile(self, point: Sequence[float], tol: float = 1e-9) -> Profile:
        """Grid profile at given coordinates; every coordinate must be a grid node."""
        if len(point) != len(self.grids):
            raise InvalidArgument("point dimension does not match the game")
        out = []
        for i, (v, grid) in enumerate(zip(point, self.grids), start=1):
            j = int(np.argmin([abs(g - v) for g in grid]))
            if abs(grid[j] - v) > tol:
                raise InvalidArgument(f"coordinate {v} of player {i} is not a grid node")
            out.append(j + 1)
        return tuple(out)


def grid_nodes(lo: float, hi: float, m: int) -> tuple[float, ...]:
    return tuple(lo + t * (hi - lo) / m for t in range(m + 1))


def discretize(cg: ContinuousGame, m: int, budget: int | None = None) -> Discretization:
    """Sample every interval at ``m + 1`` evenly spaced nodes (endpoints included)."""
    if m < 1:
        raise InvalidArgument(f"grid resolution must be at least 1, got {m}")
    budget = DEFAULT_BUDGET if budget is None else budget
    size = (m + 1) ** cg.num_players
    if size > budget:
        raise ResourceLimit(
            f"grid has {size} profiles, above the budget of {budget}", bound=budget, required=size
        )
    grids = tuple(grid_nodes(lo, hi, m) for lo, hi in cg.intervals)
    axes = np.meshgrid(*(np.array(g) for g in grids), indexing="ij")
    bindings = {f"x{i}": a for i, a in enumerate(axes, start=1)}
    bindings.update({k: np.float64(v) for k, v in cg.params.items()})
    shape = (m + 1,) * cg.num_players
    tensors = [np.broadcast_to(eval_array(p, bindings), shape).astype(np.float64) for p in cg.payoffs]
    labels = tuple(tuple(repr(v) for v in g) for g in grids)
    return Discretization(FiniteGame(shape, tuple(tensors), labels), grids, cg)


def cournot_game(
    price_intercept: float = 100.0,
    price_slope: float = 0.5,
    upper: float = 200.0,
) -> ContinuousGame:
    """Two-firm Cournot duopoly with price ``a - s*(x1+x2)`` and costs ``5*x1``, ``x2^2/2``.

    Production is truncated to ``[0, upper]``; the default 200 contains every
    best response (at most 95 for the default prices).
    """
    a, s = repr(float(price_intercept)), repr(float(price_slope))
    price = f"({a} - {s}*(x1 + x2))"
    return ContinuousGame(
        ((0.0, upper), (0.0, upper)),
        (f"x1*{price} - 5*x1", f"x2*{price} - 0.5*x2^2"),
    )


@dataclass(frozen=True)
class CournotReport:
    best_response_1: tuple[float, float]  # (constant, slope) of the reply to x2
    best_response_2: tuple[float, float]  # (constant, slope) of the reply to x1
    equilibrium: tuple[float, float]
    price: float
    profits: tuple[float, float]
    own_partials: tuple[float, float]  # d theta_1 / d x1, d theta_2 / d x2 at equilibrium
    cross_partials: tuple[float, float]  # d theta_1 / d x2, d theta_2 / d x1 at equilibrium
    deviation: tuple[float, float]
    deviation_profit: float

    @property
    def bilateral_counterexample(self) -> bool:
        """Whether the joint deviation beats firm 1's equilibrium profit."""
        return self.deviation_profit > self.profits[0]


def cournot_analysis(price_intercept: float = 100.0, price_slope: float = 0.5) -> CournotReport:
    """Closed-form best replies, the unique equilibrium and a profitable joint deviation.

    With price ``a - s*X`` and costs ``5*x1``, ``x2^2/2`` the first-order
    conditions are ``2s*x1 + s*x2 = a - 5`` and ``s*x1 + (2s+1)*x2 = a``.
    """
    # singularity is tested on the caller's number type so Fraction(-2, 3) is caught
    s0 = price_slope
    if s0 == 0 or 2 * s0 * (2 * s0 + 1) - s0 * s0 == 0:
        raise DegenerateParameters(f"best-response system is singular for slope {s0}")
    a, s = float(price_intercept), float(price_slope)
    det = 2 * s * (2 * s + 1) - s * s
    if det == 0:
        raise DegenerateParameters(f"best-response system is singular for slope {s}")
    br1 = ((a - 5) / (2 * s), -0.5)
    br2 = (a / (2 * s + 1), -s / (2 * s + 1))
    x1 = ((a - 5) * (2 * s + 1) - s * a) / det
    x2 = (2 * s * a - s * (a - 5)) / det
    game = cournot_game(a, s)
    price = a - s * (x1 + x2)
    profits = (game.payoff(1, (x1, x2)), game.payoff(2, (x1, x2)))
    # firm 2 shuts down and firm 1 plays its reply to zero
    deviation = (br1[0], 0.0)
    return CournotReport(
        best_response_1=br1,
        best_response_2=br2,
        equilibrium=(x1, x2),
        price=price,
        profits=profits,
        own_partials=(a - 5 - 2 * s * x1 - s * x2, a - s * x1 - (2 * s + 1) * x2),
        cross_partials=(-s * x1, -s * x2),
        deviation=deviation,
        deviation_profit=game.payoff(1, deviation),
    )


def witness_continuous(num_players: int) -> ContinuousGame:
    """Player A (x1) gets ``a`` only while ``a + max(b_j) < 1``; each B_j (x2..xN) gets its own ``b_j``."""
    if num_players < 2:
        raise InvalidArgument("the witness game needs at least two players")
    others = [f"x{i}" for i in range(2, num_players + 1)]
    top = others[0] if len(others) == 1 else f"max({', '.join(others)})"
    payoffs = [f"ite(x1 + {top} < 1, x1, 0)"] + others
    names = ("A",) + tuple(f"B{j}" for j in range(1, num_players))
    return ContinuousGame(((0.0, 1.0),) * num_players, tuple(payoffs), names=names)
