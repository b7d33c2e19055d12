"""Exact Gromov-Hausdorff distance between small finite metric spaces.

The distance is half the smallest distortion of a correspondence between the two spaces. The
search runs over correspondences of the form graph(f) | transpose(graph(g)) for maps f: X -> Y and
g: Y -> X, which is enough:

    Every correspondence R contains such a sub-correspondence: choose one partner in R for each
    point of X (this is f) and one for each point of Y (this is g). Distortion is a maximum over
    pairs of pairs, so removing pairs never raises it. The minimum over all R is therefore attained
    on a correspondence of this form.

By the same argument g(y) is only chosen for points y that f leaves uncovered.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from ghdist.metric_core import EPS_METRIC, diam
from ghdist.pi_rational import PiRational
from ghdist.types import BoundKind, CoverageError, DomainError, GHResult, Method

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from ghdist.metric_core import FiniteMetricSpace

module_logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**9

# Encoding of a search leaf: f on every point of X, g on Y with -1 where f already covers y
type MapPair = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class Correspondence:
    """A relation between the points of X (size n) and Y (size m), as index pairs.

    Attributes:
        pairs: The related (i, j) index pairs.
        n: The number of points of X.
        m: The number of points of Y.
    """

    pairs: frozenset[tuple[int, int]]
    n: int
    m: int

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], n: int, m: int) -> Correspondence:
        """Build a correspondence from index pairs.

        Raises:
            DomainError: If a pair refers to an index out of range.
        """
        frozen = frozenset((int(i), int(j)) for i, j in pairs)
        for i, j in frozen:
            if not (0 <= i < n and 0 <= j < m):
                msg = f"Pair ({i}, {j}) is outside of {n} x {m}."
                raise DomainError(msg)
        return cls(frozen, n, m)

    @classmethod
    def from_maps(cls, f: Sequence[int], g: Sequence[int]) -> Correspondence:
        """Build graph(f) | transpose(graph(g)); entries of g below zero are skipped."""
        pairs = {(i, int(j)) for i, j in enumerate(f)}
        pairs |= {(int(i), j) for j, i in enumerate(g) if i >= 0}
        return cls.from_pairs(pairs, len(f), len(g))

    @classmethod
    def from_label_pairs(
        cls, pairs: Iterable[tuple[str, str]], x: FiniteMetricSpace, y: FiniteMetricSpace
    ) -> Correspondence:
        """Build a correspondence from (label in X, label in Y) pairs.

        Raises:
            DomainError: If a label is unknown.
        """
        indices = [(x.index_of(a), y.index_of(b)) for a, b in pairs]
        return cls.from_pairs(indices, x.size, y.size)

    def uncovered(self) -> tuple[str, int] | None:
        """The first point left uncovered, as (side, index), or None when R is valid."""
        left = {i for i, _ in self.pairs}
        right = {j for _, j in self.pairs}
        for i in range(self.n):
            if i not in left:
                return "X", i
        for j in range(self.m):
            if j not in right:
                return "Y", j
        return None

    def is_valid(self) -> bool:
        """Whether every point of both spaces is related to something."""
        return self.uncovered() is None

    def check(self, x: FiniteMetricSpace, y: FiniteMetricSpace) -> None:
        """Ensure the correspondence fits the two spaces and covers them.

        Raises:
            DomainError: If the sizes differ from the spaces.
            CoverageError: If a point is uncovered.
        """
        if (self.n, self.m) != (x.size, y.size):
            msg = f"Correspondence is {self.n} x {self.m} but the spaces are {x.size} x {y.size}."
            raise DomainError(msg)
        if (missing := self.uncovered()) is not None:
            side, index = missing
            label = (x if side == "X" else y).labels[index]
            raise CoverageError(side, index, label)

    def transposed(self) -> Correspondence:
        """The same relation read from Y to X."""
        return Correspondence(frozenset((j, i) for i, j in self.pairs), self.m, self.n)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        """The pairs in lexicographic order."""
        return sorted(self.pairs)

    def label_pairs(self, x: FiniteMetricSpace, y: FiniteMetricSpace) -> list[tuple[str, str]]:
        """The pairs as (label in X, label in Y), in index order."""
        return [(x.labels[i], y.labels[j]) for i, j in self.sorted_pairs()]

    def __len__(self) -> int:
        return len(self.pairs)


def distortion(r: Correspondence, x: FiniteMetricSpace, y: FiniteMetricSpace) -> float:
    """dis R: the largest | |x1 x2| - |y1 y2| | over two related pairs.

    Raises:
        CoverageError: If R leaves a point uncovered.
    """
    r.check(x, y)
    pairs = r.sorted_pairs()
    xs = np.fromiter((i for i, _ in pairs), dtype=np.intp, count=len(pairs))
    ys = np.fromiter((j for _, j in pairs), dtype=np.intp, count=len(pairs))
    gaps = np.abs(x.dist[np.ix_(xs, xs)] - y.dist[np.ix_(ys, ys)])
    return float(gaps.max())


def distortion_pi(r: Correspondence, x: FiniteMetricSpace, y: FiniteMetricSpace) -> PiRational:
    """dis R computed exactly, for spaces whose distances are rational multiples of pi.

    Raises:
        DomainError: If either space lacks exact coefficients.
        CoverageError: If R leaves a point uncovered.
    """
    if x.pi_coefficients is None or y.pi_coefficients is None:
        msg = "Exact distortion needs both spaces to carry pi coefficients."
        raise DomainError(msg)
    r.check(x, y)

    cx, cy = x.pi_coefficients, y.pi_coefficients
    pairs = r.sorted_pairs()
    worst = Fraction(0)
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[a + 1 :]:
            worst = max(worst, abs(cx[i][k] - cy[j][l]))
    return PiRational.from_fraction(worst)


def gh_lower_diameter(x: FiniteMetricSpace, y: FiniteMetricSpace) -> GHResult:
    """The lower bound |diam X - diam Y| / 2."""
    exact = None
    if x.pi_coefficients is not None and y.pi_coefficients is not None:
        dx = max(max(row) for row in x.pi_coefficients)
        dy = max(max(row) for row in y.pi_coefficients)
        exact = PiRational.from_fraction(abs(dx - dy) / 2)
    value = abs(diam(x) - diam(y)) / 2
    return GHResult(value, BoundKind.LOWER, Method.DIAM_LOWER, exact=exact)


def greedy_profile_correspondence(x: FiniteMetricSpace, y: FiniteMetricSpace) -> Correspondence:
    """Match every point to the point of the other space with the closest distance profile.

    A point's profile is its row of distances sampled at common quantile levels, so spaces of
    different sizes can be compared.
    """
    levels = np.linspace(0.0, 1.0, max(x.size, y.size))
    px = np.quantile(x.dist, levels, axis=1).T
    py = np.quantile(y.dist, levels, axis=1).T
    gap = np.abs(px[:, np.newaxis, :] - py[np.newaxis, :, :]).max(axis=2)
    return Correspondence.from_maps(gap.argmin(axis=1).tolist(), gap.argmin(axis=0).tolist())


def seed_correspondence(x: FiniteMetricSpace, y: FiniteMetricSpace) -> Correspondence:
    """A good starting correspondence for the search.

    Polygon pairs are seeded from the explicit polygon correspondences, everything else from the
    greedy profile matching. The candidate with the smallest distortion wins.
    """
    from ghdist.polygon_formulas import divisible_correspondence, rounding_correspondence

    candidates = [greedy_profile_correspondence(x, y)]
    if x.size == y.size and np.array_equal(x.dist, y.dist):
        identity = range(x.size)
        candidates.append(Correspondence.from_maps(identity, identity))

    n, m = x.polygon_order, y.polygon_order
    if n is not None and m is not None:
        candidates.append(rounding_correspondence(n, m))
        if m % n == 0:
            candidates.append(divisible_correspondence(n, m // n))
        elif n % m == 0:
            candidates.append(divisible_correspondence(m, n // m).transposed())

    return min(candidates, key=lambda r: distortion(r, x, y))


class _BudgetExhaustedSignal(Exception):
    """Unwinds the search; floor collects the cheapest unexplored subtree on the way up."""

    def __init__(self, floor: float):
        super().__init__()
        self.floor = floor


@dataclass(frozen=True)
class SearchOutcome:
    """The raw result of one correspondence search.

    Attributes:
        distortion: The best distortion found, or the seed distortion when nothing was found.
        witness: The (f, g) encoding of the best leaf, if any leaf was accepted.
        nodes: The number of nodes visited.
        exhausted: Whether the node budget ran out.
        floor: The smallest partial distortion of any unexplored subtree (inf when complete).
    """

    distortion: float
    witness: MapPair | None
    nodes: int
    exhausted: bool
    floor: float

    @property
    def found(self) -> bool:
        """Whether the search accepted a leaf of its own."""
        return self.witness is not None


class CorrespondenceSearch:
    """Depth-first branch-and-bound over (f, g) correspondences.

    Points of X are assigned first (f), then each point of Y that f leaves uncovered (g). The
    running distortion only grows as pairs are added, so a branch is cut as soon as it cannot
    improve on the best known distortion. Choices are tried in index order, which makes the first
    accepted optimal leaf the lexicographically smallest one. Until a leaf of its own is accepted,
    the search keeps leaves tying with the seed so the seed never hides that leaf.
    """

    def __init__(
        self,
        x: FiniteMetricSpace,
        y: FiniteMetricSpace,
        seed_distortion: float = math.inf,
        budget: int = DEFAULT_BUDGET,
        tolerance: float = EPS_METRIC,
        check_coverage: bool = False,
        first_choices: Sequence[int] | None = None,
        logger: logging.Logger | None = None,
    ):
        self.logger = logger or module_logger
        self.dx: list[list[float]] = x.dist.tolist()
        self.dy: list[list[float]] = y.dist.tolist()
        self.n, self.m = x.size, y.size
        self.budget = budget
        self.tolerance = tolerance
        self.check_coverage = check_coverage

        self.all_x = list(range(self.n))
        self.all_y = list(range(self.m))
        self.first_choices = list(first_choices) if first_choices is not None else self.all_y

        self.best = seed_distortion
        self.best_witness: MapPair | None = None
        self.nodes = 0

        # Mutable search state
        self.pairs_x: list[int] = []
        self.pairs_y: list[int] = []
        self.f = [-1] * self.n
        self.g = [-1] * self.m
        self.cover = [0] * self.m

    def run(self) -> SearchOutcome:
        """Run the search to completion or until the budget is spent."""
        try:
            self._assign_f(0, 0.0)
        except _BudgetExhaustedSignal as signal:
            exhausted, floor = True, signal.floor
        else:
            exhausted, floor = False, math.inf

        self.logger.debug(
            "Correspondence search visited %s node%s%s.",
            self.nodes,
            "" if self.nodes == 1 else "s",
            " before running out of budget" if exhausted else "",
        )
        return SearchOutcome(self.best, self.best_witness, self.nodes, exhausted, floor)

    def _pruned(self, dis: float) -> bool:
        if self.best_witness is not None:
            return dis >= self.best - self.tolerance
        return dis > self.best + self.tolerance

    def _cost(self, i: int, j: int, current: float) -> float:
        """The running distortion after adding the pair (i, j)."""
        row_x = self.dx[i]
        row_y = self.dy[j]
        worst = current
        for k, l in zip(self.pairs_x, self.pairs_y, strict=True):
            gap = row_x[k] - row_y[l]
            if gap < 0:
                gap = -gap
            if gap > worst:
                worst = gap
        return worst

    def _floor_f(self, i: int, choices: Sequence[int], current: float) -> float:
        return min((self._cost(i, j, current) for j in choices), default=math.inf)

    def _floor_g(self, j: int, choices: Sequence[int], current: float) -> float:
        return min((self._cost(i, j, current) for i in choices), default=math.inf)

    def _push(self, i: int, j: int) -> None:
        self.pairs_x.append(i)
        self.pairs_y.append(j)

    def _pop(self) -> None:
        self.pairs_x.pop()
        self.pairs_y.pop()

    def _assign_f(self, i: int, dis: float) -> None:
        if i == self.n:
            self._assign_g(0, dis)
            return

        choices = self.first_choices if i == 0 else self.all_y
        for k, j in enumerate(choices):
            if self.nodes >= self.budget:
                raise _BudgetExhaustedSignal(self._floor_f(i, choices[k:], dis))
            self.nodes += 1

            cost = self._cost(i, j, dis)
            if self._pruned(cost):
                continue

            self._push(i, j)
            self.f[i] = j
            self.cover[j] += 1
            try:
                self._assign_f(i + 1, cost)
            except _BudgetExhaustedSignal as signal:
                self._undo_f(i, j)
                signal.floor = min(signal.floor, self._floor_f(i, choices[k + 1 :], dis))
                raise
            self._undo_f(i, j)

    def _undo_f(self, i: int, j: int) -> None:
        self._pop()
        self.f[i] = -1
        self.cover[j] -= 1

    def _assign_g(self, j: int, dis: float) -> None:
        while j < self.m and self.cover[j]:
            j += 1
        if j == self.m:
            self._accept(dis)
            return

        for k, i in enumerate(self.all_x):
            if self.nodes >= self.budget:
                raise _BudgetExhaustedSignal(self._floor_g(j, self.all_x[k:], dis))
            self.nodes += 1

            cost = self._cost(i, j, dis)
            if self._pruned(cost):
                continue

            self._push(i, j)
            self.g[j] = i
            try:
                self._assign_g(j + 1, cost)
            except _BudgetExhaustedSignal as signal:
                self._pop()
                self.g[j] = -1
                signal.floor = min(signal.floor, self._floor_g(j, self.all_x[k + 1 :], dis))
                raise
            self._pop()
            self.g[j] = -1

    def _accept(self, dis: float) -> None:
        if self.check_coverage:
            covered_y = {j for j in self.f} | {j for j, i in enumerate(self.g) if i >= 0}
            if len(covered_y) != self.m:
                missing = min(set(self.all_y) - covered_y)
                raise CoverageError("Y", missing)
        self.best = dis
        self.best_witness = (tuple(self.f), tuple(self.g))


@dataclass(frozen=True)
class _BranchTask:
    x: FiniteMetricSpace
    y: FiniteMetricSpace
    seed_distortion: float
    budget: int
    tolerance: float
    check_coverage: bool
    first_choices: tuple[int, ...]


def _search_branch(task: _BranchTask) -> SearchOutcome:
    search = CorrespondenceSearch(
        task.x,
        task.y,
        seed_distortion=task.seed_distortion,
        budget=task.budget,
        tolerance=task.tolerance,
        check_coverage=task.check_coverage,
        first_choices=task.first_choices,
    )
    return search.run()


def _join_outcomes(outcomes: list[SearchOutcome], tolerance: float) -> SearchOutcome:
    """Merge branch outcomes: best distortion, then the smallest witness among ties."""
    nodes = sum(o.nodes for o in outcomes)
    exhausted = any(o.exhausted for o in outcomes)
    floor = min(o.floor for o in outcomes)
    found = [o for o in outcomes if o.found]
    if not found:
        return SearchOutcome(min(o.distortion for o in outcomes), None, nodes, exhausted, floor)

    best = min(o.distortion for o in found)
    winner = min(
        (o for o in found if o.distortion <= best + tolerance),
        key=lambda o: o.witness or ((), ()),
    )
    return SearchOutcome(winner.distortion, winner.witness, nodes, exhausted, floor)


def gh_bruteforce(
    x: FiniteMetricSpace,
    y: FiniteMetricSpace,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    check_coverage: bool = False,
    seed: Correspondence | None = None,
    tolerance: float = EPS_METRIC,
    logger: logging.Logger | None = None,
) -> GHResult:
    """Compute d_GH(X, Y) exactly as half the minimal correspondence distortion.

    With workers > 1, the top-level choices of f(x1) are searched in separate processes, each with
    an equal share of the budget; the joined result is the same as the sequential one.

    Args:
        x: The first space.
        y: The second space.
        budget: The maximum number of search-tree nodes.
        workers: The number of worker processes.
        check_coverage: Whether to verify coverage at every accepted leaf.
        seed: The initial correspondence, defaulting to seed_correspondence().
        tolerance: Distortions closer than this are treated as ties.
        logger: The logger for search statistics.

    Returns:
        An exact result with an optimal witness, or an upper bound with the best witness found and a
        separate lower bound when the budget runs out.

    Raises:
        DomainError: If budget or workers is not positive.
    """
    logger = logger or module_logger
    if budget < 1 or workers < 1:
        msg = f"Budget and workers must be positive, got {budget} and {workers}."
        raise DomainError(msg)

    seed = seed or seed_correspondence(x, y)
    seed_distortion = distortion(seed, x, y)
    logger.debug(
        "Seeded search with distortion %s (d_GH <= %s).", seed_distortion, seed_distortion / 2
    )

    if workers > 1 and y.size > 1:
        share = max(1, budget // y.size)
        tasks = [
            _BranchTask(x, y, seed_distortion, share, tolerance, check_coverage, (j,))
            for j in range(y.size)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcome = _join_outcomes(list(pool.map(_search_branch, tasks)), tolerance)
    else:
        search = CorrespondenceSearch(
            x, y, seed_distortion, budget, tolerance, check_coverage, logger=logger
        )
        outcome = search.run()

    if not outcome.exhausted:
        # Without an accepted leaf, nothing beat the seed
        witness = Correspondence.from_maps(*outcome.witness) if outcome.witness else seed
        value = outcome.distortion if outcome.witness else seed_distortion
        exact = None
        if x.pi_coefficients is not None and y.pi_coefficients is not None:
            exact = distortion_pi(witness, x, y) / 2
        return GHResult(
            value / 2,
            BoundKind.EXACT,
            Method.EXACT,
            witness=witness,
            exact=exact,
            nodes=outcome.nodes,
        )

    best = min(outcome.distortion, seed_distortion)
    witness = Correspondence.from_maps(*outcome.witness) if outcome.witness else seed
    proven = min(outcome.floor, best - tolerance)
    lower = max(gh_lower_diameter(x, y).value, max(0.0, proven) / 2)
    logger.warning(
        "Search budget of %s node%s exhausted; d_GH lies between %s and %s.",
        budget,
        "" if budget == 1 else "s",
        min(lower, best / 2),
        best / 2,
    )
    return GHResult(
        best / 2,
        BoundKind.UPPER,
        Method.EXACT,
        witness=witness,
        lower_bound=min(lower, best / 2),
        nodes=outcome.nodes,
    )
