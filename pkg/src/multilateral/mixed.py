"""Mixed extensions of finite games.

A mixed profile assigns each player a probability vector over their pure
strategies; payoffs extend multilinearly.  Since ``theta_i(y_I, x_-I)`` is
multilinear in the blocks of ``y_I``, its maximum over a product of simplices
is attained at a vertex, so joint deviations only need to range over pure
``y_I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidArgument
from .game import FiniteGame, coalitions

DEFAULT_TOL = 1e-9
SIMPLEX_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MixedProfile:
    """One probability vector per player."""

    probs: tuple[np.ndarray, ...]

    def __post_init__(self):
        vectors = []
        for i, p in enumerate(self.probs, start=1):
            v = np.array([float(q) for q in p], dtype=np.float64)
            if v.ndim != 1 or v.size == 0:
                raise InvalidArgument(f"player {i}: probability vector must be non-empty")
            if np.any(v < 0):
                raise InvalidArgument(f"player {i}: negative probability in {v}")
            if abs(v.sum() - 1.0) > SIMPLEX_TOL:
                raise InvalidArgument(f"player {i}: probabilities sum to {v.sum()}, not 1")
            v.setflags(write=False)
            vectors.append(v)
        object.__setattr__(self, "probs", tuple(vectors))

    @classmethod
    def pure(cls, strategy_counts: Sequence[int], x: Sequence[int]) -> "MixedProfile":
        """The vertex profile that puts all weight on pure profile ``x``."""
        vectors = []
        for d, j in zip(strategy_counts, x):
            v = np.zeros(d)
            v[j - 1] = 1.0
            vectors.append(v)
        return cls(tuple(vectors))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(p.size for p in self.probs)

    def __eq__(self, other):
        if not isinstance(other, MixedProfile):
            return NotImplemented
        return self.shape == other.shape and all(np.array_equal(a, b) for a, b in zip(self.probs, other.probs))

    def __hash__(self):
        return hash(tuple(tuple(p) for p in self.probs))


def _float_tensor(game: FiniteGame, player: int) -> np.ndarray:
    return np.asarray(game.payoffs[player - 1], dtype=np.float64)


def _check_shape(game: FiniteGame, mixed: MixedProfile) -> None:
    if mixed.shape != game.strategy_counts:
        raise InvalidArgument(f"mixed profile shape {mixed.shape} does not match game {game.strategy_counts}")


def _contract(tensor: np.ndarray, mixed: MixedProfile, keep: Sequence[int] = ()) -> np.ndarray:
    """Average ``tensor`` over every player not in ``keep`` (1-based)."""
    out = tensor
    # contract from the last axis down so earlier axis numbers stay valid
    for axis in reversed(range(tensor.ndim)):
        if axis + 1 not in keep:
            out = np.tensordot(out, mixed.probs[axis], axes=([axis], [0]))
    return out


def mixed_payoff(game: FiniteGame, player: int, mixed: MixedProfile) -> float:
    """Expected payoff of ``player`` when everyone randomizes independently."""
    game.check_player(player)
    _check_shape(game, mixed)
    return float(_contract(_float_tensor(game, player), mixed))


def deviation_gains(game: FiniteGame, k: int, mixed: MixedProfile) -> dict[tuple[int, ...], dict[int, np.ndarray]]:
    """For each k-coalition and member, the gain of every pure joint deviation.

    ``gains[I][i]`` is an array over the coalition's pure blocks ``y_I``.
    """
    _check_shape(game, mixed)
    out = {}
    for coalition in coalitions(game.num_players, k):
        per_member = {}
        for i in coalition:
            tensor = _float_tensor(game, i)
            base = float(_contract(tensor, mixed))
            per_member[i] = _contract(tensor, mixed, keep=coalition) - base
        out[coalition] = per_member
    return out


def mixed_v_k(game: FiniteGame, k: int, mixed: MixedProfile) -> float:
    """Largest gain any k-coalition member gets from any pure joint deviation."""
    gains = deviation_gains(game, k, mixed)
    return max(float(g.max()) for per_member in gains.values() for g in per_member.values())


def is_k_lateral_mixed(game: FiniteGame, k: int, mixed: MixedProfile, tol: float = DEFAULT_TOL) -> bool:
    if tol <= 0:
        raise InvalidArgument("tolerance must be positive")
    return mixed_v_k(game, k, mixed) <= tol


def inspection_equilibrium(w: float, g: float, h: float, v: float = 0.0) -> MixedProfile:
    """The totally mixed equilibrium of :func:`~multilateral.gallery.inspection_game`.

    Strategy order: employee (not work, work), boss (inspect, not inspect).
    The boss is indifferent only when the employee shirks with probability
    h/w, and the employee only when the boss inspects with probability g/w.
    The value ``v`` of the work does not enter.
    """
    if not (0 < g < w and 0 < h < w):
        raise InvalidArgument(f"need 0 < g < w and 0 < h < w, got w={w}, g={g}, h={h}")
    shirk, inspect = h / w, g / w
    return MixedProfile(((shirk, 1 - shirk), (inspect, 1 - inspect)))


def pure_payoffs_against(game: FiniteGame, player: int, mixed: MixedProfile) -> np.ndarray:
    """Payoff of each of ``player``'s pure strategies against the others' mix."""
    game.check_player(player)
    _check_shape(game, mixed)
    return _contract(_float_tensor(game, player), mixed, keep=(player,))


def argmax_convexity_probe(
    game: FiniteGame,
    player: int,
    mixed: MixedProfile,
    samples: int,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> bool:
    """Sample pairs of best replies of ``player`` and check their midpoints are best replies.

    Against fixed opponents the payoff is linear in the player's own mix, so
    the optimal value is the best pure payoff and best replies are the mixes
    supported on near-optimal pure strategies.
    """
    if samples < 1:
        raise InvalidArgument("need at least one sample")
    values = pure_payoffs_against(game, player, mixed)
    top = float(values.max())
    support = np.flatnonzero(values >= top - tol)
    rng = np.random.default_rng(seed)

    def draw() -> np.ndarray:
        p = np.zeros(values.size)
        p[support] = rng.dirichlet(np.ones(support.size))
        return p

    for _ in range(samples):
        a, b = draw(), draw()
        if float(values @ a) < top - tol or float(values @ b) < top - tol:
            raise RuntimeError("sampled best reply is not optimal")
        if float(values @ ((a + b) / 2)) < top - tol:
            return False
    return True


# The 3-player, two-strategy system: can pure profile (2, 2, 2) be 2-lateral?

Index3 = tuple[int, int, int]


@dataclass(frozen=True)
class TensorTriple:
    """Payoff tensors of players A, B, C in a 2x2x2 game, indexed ``(i, j, k)`` in {1,2}^3."""

    xa: tuple[Fraction, ...]
    xb: tuple[Fraction, ...]
    xc: tuple[Fraction, ...]

    def __post_init__(self):
        for name in ("xa", "xb", "xc"):
            values = tuple(Fraction(v) for v in getattr(self, name))
            if len(values) != 8:
                raise InvalidArgument(f"{name} needs 8 entries, got {len(values)}")
            object.__setattr__(self, name, values)

    @classmethod
    def from_entries(cls, entries: dict[str, dict[Index3, object]]) -> "TensorTriple":
        """Build from sparse ``{"A": {(i, j, k): value}, ...}``; missing entries are 0."""
        tensors = []
        for player in "ABC":
            flat = [Fraction(0)] * 8
            for (i, j, k), value in entries.get(player, {}).items():
                flat[_flat(i, j, k)] = Fraction(value)
            tensors.append(tuple(flat))
        return cls(*tensors)

    def get(self, player: str, i: int, j: int, k: int) -> Fraction:
        return {"A": self.xa, "B": self.xb, "C": self.xc}[player][_flat(i, j, k)]

    def game(self) -> FiniteGame:
        return FiniteGame((2, 2, 2), (self.xa, self.xb, self.xc))


def _flat(i: int, j: int, k: int) -> int:
    if not all(v in (1, 2) for v in (i, j, k)):
        raise InvalidArgument(f"index ({i},{j},{k}) outside {{1,2}}^3")
    return (i - 1) * 4 + (j - 1) * 2 + (k - 1)


def delta_triple() -> TensorTriple:
    """Every player gets 1 at (2,2,2) and 0 elsewhere."""
    one = {(2, 2, 2): 1}
    return TensorTriple.from_entries({"A": one, "B": one, "C": one})


# Each row: the player whose payoff is tested, and the three entries multiplying
# -u1*v1, -u1*v2, -u2*v1; the (2,2,2) entry always carries (1 - u2*v2).
_INEQ02_ROWS: tuple[tuple[str, tuple[Index3, Index3, Index3]], ...] = (
    ("A", ((1, 1, 2), (1, 2, 2), (2, 1, 2))),  # coalition {A, B}, C stays at 2
    ("B", ((1, 1, 2), (1, 2, 2), (2, 1, 2))),
    ("A", ((1, 2, 1), (1, 2, 2), (2, 2, 1))),  # coalition {A, C}, B stays at 2
    ("C", ((1, 2, 1), (1, 2, 2), (2, 2, 1))),
    ("B", ((2, 1, 1), (2, 1, 2), (2, 2, 1))),  # coalition {B, C}, A stays at 2
    ("C", ((2, 1, 1), (2, 1, 2), (2, 2, 1))),
)


def ineq02_values(t: TensorTriple, u1, v1) -> list:
    """Left-hand sides of the six 2-lateral conditions at deviation mixes ``(u1, 1-u1)``, ``(v1, 1-v1)``."""
    u2, v2 = 1 - u1, 1 - v1
    out = []
    for player, (e11, e12, e21) in _INEQ02_ROWS:
        out.append(
            -t.get(player, *e11) * u1 * v1
            - t.get(player, *e12) * u1 * v2
            - t.get(player, *e21) * u2 * v1
            + t.get(player, 2, 2, 2) * (1 - u2 * v2)
        )
    return out


def ineq02_slacks(t: TensorTriple) -> list[Fraction]:
    """All 24 corner values (6 inequalities x 4 corners), exact."""
    return [
        value
        for u1 in (Fraction(0), Fraction(1))
        for v1 in (Fraction(0), Fraction(1))
        for value in ineq02_values(t, u1, v1)
    ]


def verify_ineq02(t: TensorTriple) -> bool:
    """Whether all six conditions hold on the whole square of deviation mixes.

    Each left-hand side is bilinear in ``(u1, v1)``, so its minimum over
    ``[0, 1]^2`` sits at a corner.
    """
    return all(value >= 0 for value in ineq02_slacks(t))


def find_2lateral_witness(seed: int, max_tries: int = 20000, tol: float = DEFAULT_TOL) -> TensorTriple:
    """A random integer triple for which (2, 2, 2) is a 2-lateral equilibrium.

    Candidates must pass the corner test with some strictly positive slack and
    are re-checked on the mixed extension; the delta triple is the fallback.
    """
    rng = np.random.default_rng(seed)
    vertex = MixedProfile.pure((2, 2, 2), (2, 2, 2))
    for _ in range(max_tries):
        tensors = rng.integers(-9, 10, size=(3, 8))
        # the (2,2,2) entry bounds everything it competes with, so draw it non-negative
        tensors[:, 7] = rng.integers(0, 10, size=3)
        t = TensorTriple(*(tuple(int(v) for v in row) for row in tensors))
        slacks = ineq02_slacks(t)
        if all(s >= 0 for s in slacks) and any(s > 0 for s in slacks):
            if mixed_v_k(t.game(), 2, vertex) <= tol:
                return t
    return delta_triple()
