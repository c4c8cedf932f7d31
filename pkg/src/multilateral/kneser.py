"""Kneser graphs K(n, k) and their clique covers.

A clique of K(n, k) is a family of pairwise disjoint k-subsets of ``[n]``, so a
clique cover is a partition of all k-subsets into such families.  The minimum
number of classes is the clique covering number xi(n, k), which counts how many
grouped best-reply maps a k-lateral fixed-point test needs.

Note on k = 1: all singletons are pairwise disjoint, K(n, 1) is complete and
xi(n, 1) = 1.  The n singleton coalitions all fit in one class.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import InvalidArgument, ResourceLimit

Subset = tuple[int, ...]

DEFAULT_VERTEX_BUDGET = 10**4
EXACT_MAX_N = 8


def _check(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise InvalidArgument(f"need 1 <= k <= n, got n={n}, k={k}")


def _vertices(n: int, k: int, budget: int | None) -> list[Subset]:
    _check(n, k)
    budget = DEFAULT_VERTEX_BUDGET if budget is None else budget
    count = math.comb(n, k)
    if count > budget:
        raise ResourceLimit(
            f"K({n},{k}) has {count} vertices, above the budget of {budget}", bound=budget, required=count
        )
    return list(itertools.combinations(range(1, n + 1), k))


@dataclass(frozen=True)
class KneserGraph:
    n: int
    k: int
    vertices: tuple[Subset, ...]
    edges: tuple[tuple[Subset, Subset], ...]


def build_kneser(n: int, k: int, budget: int | None = None) -> KneserGraph:
    vertices = _vertices(n, k, budget)
    edges = tuple(
        (a, b) for a, b in itertools.combinations(vertices, 2) if not set(a) & set(b)
    )
    return KneserGraph(n, k, tuple(vertices), edges)


@dataclass(frozen=True)
class KneserCover:
    """A partition of the k-subsets of ``[n]`` into families of pairwise disjoint sets."""

    n: int
    k: int
    classes: tuple[tuple[Subset, ...], ...]

    def __post_init__(self):
        classes = tuple(
            sorted(tuple(sorted(tuple(sorted(s)) for s in group)) for group in self.classes)
        )
        object.__setattr__(self, "classes", classes)
        problems = self.violations()
        if problems:
            raise InvalidArgument("invalid clique cover: " + "; ".join(problems))

    @property
    def size(self) -> int:
        return len(self.classes)

    def violations(self) -> list[str]:
        problems = []
        try:
            _check(self.n, self.k)
        except InvalidArgument as exc:
            return [str(exc)]
        expected = set(itertools.combinations(range(1, self.n + 1), self.k))
        seen: set[Subset] = set()
        for c, group in enumerate(self.classes, start=1):
            if not group:
                problems.append(f"class {c} is empty")
            for s in group:
                if s not in expected:
                    problems.append(f"class {c}: {s} is not a {self.k}-subset of 1..{self.n}")
                if s in seen:
                    problems.append(f"{s} appears in more than one place")
                seen.add(s)
            for a, b in itertools.combinations(group, 2):
                if set(a) & set(b):
                    problems.append(f"class {c}: {a} and {b} intersect")
        missing = expected - seen
        if missing:
            problems.append(f"{len(missing)} subsets not covered, e.g. {min(missing)}")
        return problems

    def check(self, n: int, k: int) -> None:
        """Raise unless this cover is for K(n, k)."""
        if (self.n, self.k) != (n, k):
            raise InvalidArgument(f"cover is for K({self.n},{self.k}), needed K({n},{k})")


def lower_bound(n: int, k: int) -> int:
    """Counting bound: a clique holds at most floor(n/k) disjoint k-subsets."""
    _check(n, k)
    return -(-math.comb(n, k) // (n // k))


def greedy_cover(n: int, k: int, budget: int | None = None) -> KneserCover:
    """First-fit cover: seed each class with the smallest uncovered subset."""
    uncovered = _vertices(n, k, budget)
    classes = []
    while uncovered:
        group = [uncovered[0]]
        used = set(uncovered[0])
        for s in uncovered[1:]:
            if used.isdisjoint(s):
                group.append(s)
                used.update(s)
        classes.append(tuple(group))
        chosen = set(group)
        uncovered = [s for s in uncovered if s not in chosen]
    return KneserCover(n, k, tuple(classes))


@dataclass(frozen=True)
class ExactResult:
    cover: KneserCover
    lower_bound: int
    nodes: int
    certified_by: str  # "lower-bound" or "exhausted"


def exact_search(n: int, k: int, max_n: int = EXACT_MAX_N, seed_with_greedy: bool = True) -> ExactResult:
    """Branch and bound for a minimum clique cover of K(n, k).

    The smallest uncovered subset must join some class; we branch over the
    maximal disjoint families it can head among the uncovered subsets
    (shrinking a class of a cover keeps it a cover, so maximal families
    suffice) and prune with the counting bound on what remains.  The incumbent
    starts from the greedy cover, or from all singletons when
    ``seed_with_greedy`` is false.
    """
    _check(n, k)
    if n > max_n:
        raise ResourceLimit(
            f"exact clique cover is limited to n <= {max_n} (got n={n}); use greedy_cover for an upper bound",
            bound=max_n,
            required=n,
        )
    vertices = list(itertools.combinations(range(1, n + 1), k))
    masks = [sum(1 << (i - 1) for i in s) for s in vertices]
    per_class = n // k
    bound = lower_bound(n, k)
    if seed_with_greedy:
        index = {s: v for v, s in enumerate(vertices)}
        best = [[index[s] for s in group] for group in greedy_cover(n, k).classes]
    else:
        best = [[v] for v in range(len(vertices))]
    nodes = 0

    def families(head: int, rest: list[int]) -> list[list[int]]:
        found = []

        def extend(chosen: list[int], used: int, candidates: list[int]):
            options = [v for v in candidates if not masks[v] & used]
            if not options:
                found.append(chosen)
                return
            for pos, v in enumerate(options):
                extend(chosen + [v], used | masks[v], options[pos + 1 :])

        extend([head], masks[head], rest)
        maximal = []
        for fam in found:
            used = 0
            for v in fam:
                used |= masks[v]
            if all(masks[v] & used for v in rest if v not in fam):
                maximal.append(fam)
        return maximal

    def search(uncovered: list[int], current: list[list[int]]):
        nonlocal best, nodes
        nodes += 1
        if not uncovered:
            if len(current) < len(best):
                best = [list(g) for g in current]
            return
        # subsets with no uncovered disjoint partner can only sit alone in a class
        alone = sum(1 for v in uncovered if all(masks[v] & masks[w] for w in uncovered if w != v))
        if len(current) + alone + -(-(len(uncovered) - alone) // per_class) >= len(best):
            return
        head, rest = uncovered[0], uncovered[1:]
        # most constrained partners first; does not affect the optimum found
        freedom = {v: sum(1 for w in rest if not masks[v] & masks[w]) for v in rest}
        options = sorted(families(head, rest), key=lambda fam: sorted(freedom[v] for v in fam[1:]))
        for fam in options:
            chosen = set(fam)
            search([v for v in rest if v not in chosen], current + [fam])
            if len(best) == bound:
                return

    if len(best) > bound:
        search(list(range(len(vertices))), [])
    cover = KneserCover(n, k, tuple(tuple(vertices[v] for v in g) for g in best))
    how = "lower-bound" if cover.size == bound else "exhausted"
    return ExactResult(cover, bound, nodes, how)


def exact_cover(n: int, k: int, max_n: int = EXACT_MAX_N) -> KneserCover:
    """A clique cover of K(n, k) with exactly xi(n, k) classes."""
    return exact_search(n, k, max_n).cover


def xi(n: int, k: int, max_n: int = EXACT_MAX_N) -> int:
    """The clique covering number of K(n, k)."""
    return exact_cover(n, k, max_n).size
