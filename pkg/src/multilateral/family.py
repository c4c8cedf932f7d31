"""Games indexed by a finite grid of parameter points.

Each grid point carries a fiber game, either finite or continuous.  Continuous
fibers are sampled on an ``m``-step grid before any equilibrium search.  All
fibers of a family must share the number of players and the strategy shape.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from .continuous import ContinuousGame, Discretization, discretize
from .equilibrium import check_simultaneous_fixed_point, enumerate_k_lateral, is_k_lateral, check_budget
from .errors import InvalidArgument, ResourceLimit
from .game import FiniteGame, Profile

Fiber = Union[FiniteGame, ContinuousGame]


@dataclass(frozen=True)
class ParameterPoint:
    coords: tuple[float, ...]
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))

    def name(self) -> str:
        if self.label is not None:
            return self.label
        return "(" + ", ".join(repr(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class GameFamily:
    """``generator`` maps every grid point to its fiber.

    ``m`` is the sampling resolution for continuous fibers and must be ``None``
    for finite ones.
    """

    grid: tuple[ParameterPoint, ...]
    generator: Callable[[ParameterPoint], Fiber] = field(compare=False)
    m: int | None = None

    def __post_init__(self):
        grid = tuple(p if isinstance(p, ParameterPoint) else ParameterPoint(tuple(p)) for p in self.grid)
        if not grid:
            raise InvalidArgument("a family needs at least one parameter point")
        dims = {len(p.coords) for p in grid}
        if len(dims) != 1:
            raise InvalidArgument(f"parameter points have mixed dimensions {sorted(dims)}")
        if len({p.coords for p in grid}) != len(grid):
            raise InvalidArgument("duplicate parameter point in grid")
        if self.m is not None and self.m < 1:
            raise InvalidArgument(f"grid resolution must be at least 1, got {self.m}")
        object.__setattr__(self, "grid", grid)

    @property
    def kind(self) -> str:
        return "finite" if self.m is None else "continuous"

    def index(self, b: ParameterPoint | Sequence[float]) -> int:
        coords = b.coords if isinstance(b, ParameterPoint) else tuple(float(c) for c in b)
        for n, p in enumerate(self.grid):
            if p.coords == coords:
                return n
        raise InvalidArgument(f"parameter point {coords} is not on the family grid")


def fiber(family: GameFamily, b: ParameterPoint | Sequence[float]) -> Fiber:
    """The game at grid point ``b``, exactly as the generator builds it."""
    game = family.generator(family.grid[family.index(b)])
    if family.kind == "finite" and not isinstance(game, FiniteGame):
        raise InvalidArgument(f"finite family produced {type(game).__name__} at {b}")
    if family.kind == "continuous" and not isinstance(game, ContinuousGame):
        raise InvalidArgument(f"continuous family produced {type(game).__name__} at {b}")
    return game


def finite_fiber(
    family: GameFamily, b: ParameterPoint | Sequence[float], budget: int | None = None
) -> tuple[FiniteGame, Discretization | None]:
    """The fiber as a finite game, sampling continuous fibers on the family grid."""
    game = fiber(family, b)
    if isinstance(game, ContinuousGame):
        disc = discretize(game, family.m, budget)
        return disc.game, disc
    check_budget(game, budget)
    return game, None


@dataclass(frozen=True)
class ScanEntry:
    point: ParameterPoint
    equilibria: tuple[Profile, ...]
    witness: Profile | None
    witness_coords: tuple[float, ...] | None  # grid node values, continuous fibers only

    @property
    def nonempty(self) -> bool:
        return bool(self.equilibria)


@dataclass(frozen=True)
class ScanResult:
    k: int
    entries: tuple[ScanEntry, ...]

    @property
    def nonempty_points(self) -> tuple[ParameterPoint, ...]:
        return tuple(e.point for e in self.entries if e.nonempty)


def _scan_one(family: GameFamily, n: int, k: int, tol, budget) -> tuple[ScanEntry, tuple]:
    point = family.grid[n]
    try:
        game, disc = finite_fiber(family, point, budget)
        found = tuple(enumerate_k_lateral(game, k, tol, budget))
    except ResourceLimit as exc:
        raise ResourceLimit(f"fiber {point.name()}: {exc}", bound=exc.bound, required=exc.required) from exc
    except InvalidArgument as exc:
        raise InvalidArgument(f"fiber {point.name()}: {exc}") from exc
    witness = found[0] if found else None
    if witness is not None and not is_k_lateral(game, k, witness, tol):
        raise RuntimeError(f"fiber {point.name()}: witness {witness} fails the direct check")
    coords = disc.point(witness) if (disc is not None and witness is not None) else None
    shape = (game.num_players, game.strategy_counts)
    return ScanEntry(point, found, witness, coords), shape


def scan(
    family: GameFamily,
    k: int,
    tol: float | None = None,
    budget: int | None = None,
    workers: int = 1,
) -> ScanResult:
    """NE_k of every fiber, in grid order.

    ``workers > 1`` evaluates fibers on a thread pool; results are assembled by
    grid index, so the output does not depend on scheduling.
    """
    if k < 1:
        raise InvalidArgument(f"laterality k={k} must be at least 1")
    if workers < 1:
        raise InvalidArgument(f"need at least one worker, got {workers}")
    indices = range(len(family.grid))
    if workers == 1:
        results = [_scan_one(family, n, k, tol, budget) for n in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda n: _scan_one(family, n, k, tol, budget), indices))
    shapes = {shape for _, shape in results}
    if len(shapes) != 1:
        raise InvalidArgument(f"fibers disagree on players/strategy shape: {sorted(shapes)}")
    return ScanResult(k, tuple(entry for entry, _ in results))


def fiberwise_fixed_point_check(
    family: GameFamily, k: int, tol: float | None = None, budget: int | None = None
) -> bool:
    """Whether some fiber has a common fixed point of all extended k-coalition best replies.

    Goes profile by profile through the coalition best replies, independently
    of the tensor-wide search used by :func:`scan`.
    """
    if family.kind != "finite":
        raise InvalidArgument("the fixed-point check needs finite fibers")
    shape = None
    for point in family.grid:
        game, _ = finite_fiber(family, point, budget)
        if shape is None:
            shape = game.strategy_counts
        elif game.strategy_counts != shape:
            raise InvalidArgument(f"fiber {point.name()} has shape {game.strategy_counts}, expected {shape}")
        if not 1 <= k <= game.num_players:
            raise InvalidArgument(f"laterality k={k} outside 1..{game.num_players}")
        if any(check_simultaneous_fixed_point(game, k, x, tol) for x in game.profiles()):
            return True
    return False


def finite_family(games: Sequence[FiniteGame], points: Sequence[ParameterPoint] | None = None) -> GameFamily:
    """A family listing its fibers explicitly; points default to ``(0,), (1,), ...``."""
    games = tuple(games)
    if points is None:
        points = tuple(ParameterPoint((float(n),)) for n in range(len(games)))
    points = tuple(points)
    if len(points) != len(games):
        raise InvalidArgument(f"{len(points)} parameter points for {len(games)} games")
    lookup = {p.coords: g for p, g in zip(points, games)}
    return GameFamily(points, lambda b: lookup[b.coords])


def _exact(t) -> Fraction:
    # floats go through their shortest repr so 0.1 means 1/10
    return Fraction(repr(t)) if isinstance(t, float) else Fraction(t)


def interpolate(g0: FiniteGame, g1: FiniteGame, t) -> FiniteGame:
    """Entrywise ``(1 - t) * g0 + t * g1``, exact when both games are."""
    if g0.strategy_counts != g1.strategy_counts:
        raise InvalidArgument(f"endpoint shapes differ: {g0.strategy_counts} vs {g1.strategy_counts}")
    if g0.exact and g1.exact:
        s = _exact(t)
    else:
        s = float(t)
    payoffs = tuple((1 - s) * a + s * b for a, b in zip(g0.payoffs, g1.payoffs))
    return FiniteGame(g0.strategy_counts, payoffs, g0.labels)


def segment_family(g0: FiniteGame, g1: FiniteGame, ts: Sequence[float]) -> GameFamily:
    """Straight-line interpolation between two games of the same shape."""
    if g0.strategy_counts != g1.strategy_counts:
        raise InvalidArgument(f"endpoint shapes differ: {g0.strategy_counts} vs {g1.strategy_counts}")
    points = tuple(ParameterPoint((float(t),), label=f"t={t}") for t in ts)
    return GameFamily(points, lambda b: interpolate(g0, g1, b.coords[0]))


def template_family(
    intervals: Sequence[tuple[float, float]],
    payoffs: Sequence[str],
    grid: Sequence[ParameterPoint],
    m: int,
) -> GameFamily:
    """Continuous fibers from formulas in ``x1..xN`` and parameters ``b1..bM``."""
    grid = tuple(grid)
    if not grid:
        raise InvalidArgument("a family needs at least one parameter point")
    intervals = tuple(intervals)
    payoffs = tuple(payoffs)

    def build(b: ParameterPoint) -> ContinuousGame:
        params = {f"b{j}": c for j, c in enumerate(b.coords, start=1)}
        return ContinuousGame(intervals, payoffs, params)

    family = GameFamily(grid, build, m)
    build(family.grid[0])  # surface formula errors at construction
    return family


def cournot_family(
    intercepts: Sequence[float],
    m: int = 400,
    price_slope: float = 0.5,
    upper: float = 200.0,
) -> GameFamily:
    """The Cournot duopoly with the demand intercept as parameter ``b1``."""
    s = repr(float(price_slope))
    price = f"(b1 - {s}*(x1 + x2))"
    points = tuple(ParameterPoint((float(a),), label=f"a={a}") for a in intercepts)
    return template_family(
        ((0.0, upper), (0.0, upper)),
        (f"x1*{price} - 5*x1", f"x2*{price} - 0.5*x2^2"),
        points,
        m,
    )
