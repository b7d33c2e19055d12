"""Distance from a simplex lam * Delta_m to a finite metric space, via set partitions.

For X with more than one point and 2 <= m <= #X,

    2 d_GH(lam Delta_m, X) = min over partitions D of X into m nonempty blocks of
                             max{diam D, lam - alpha(D), diam X - lam}.

Partitions are searched as restricted-growth strings with branch-and-bound: while points are
assigned in index order, diam D can only grow and alpha(D) can only shrink, so every term of the
maximum is nondecreasing along a branch.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from ghdist.metric_core import (
    EPS_METRIC,
    Partition,
    diam,
    partition_alpha,
    partition_diam,
    simplex_space,
)
from ghdist.pi_rational import PiRational
from ghdist.types import BoundKind, DomainError, GHResult, Method

if TYPE_CHECKING:
    from collections.abc import Iterator

    from ghdist.metric_core import FiniteMetricSpace

module_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimplexSpec:
    """The simplex lam * Delta_m.

    Attributes:
        m: The number of points.
        lam: The common nonzero distance.
        exact: The distance as a rational multiple of pi, when known.
    """

    m: int
    lam: float
    exact: PiRational | None = None

    def __post_init__(self):
        if self.m < 2:
            msg = f"A simplex here has at least 2 points, got {self.m}."
            raise DomainError(msg)
        if not self.lam > 0:
            msg = f"Simplex distance must be positive, got {self.lam}."
            raise DomainError(msg)

    @classmethod
    def from_pi(cls, m: int, lam: PiRational) -> SimplexSpec:
        """The simplex whose distance is an exact multiple of pi."""
        return cls(m, lam.value(), lam)

    def as_space(self) -> FiniteMetricSpace:
        """Materialize the simplex as a finite metric space."""
        return simplex_space(self.m, self.lam)


def stirling2(n: int, k: int) -> int:
    """The number of partitions of n points into k nonempty blocks."""
    if n < 0 or k < 0:
        return 0
    row = [1] + [0] * k  # S(0, j)
    for i in range(1, n + 1):
        new = [0] * (k + 1)
        for j in range(1, min(i, k) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


def enumerate_partitions(n: int, m: int) -> Iterator[Partition]:
    """Yield every partition of n points into exactly m nonempty blocks, once each.

    Partitions come out in lexicographic order of their restricted-growth strings.

    Raises:
        DomainError: If m is not in 1..n.
    """
    if not 1 <= m <= n:
        msg = f"Cannot partition {n} point{'s' if n != 1 else ''} into {m} nonempty blocks."
        raise DomainError(msg)

    block_of = [0] * n

    def extend(i: int, used: int) -> Iterator[Partition]:
        if i == n:
            yield Partition(tuple(block_of), m)
            return
        for block in range(min(used + 1, m)):
            now_used = max(used, block + 1)
            # The points after i must still be able to open the missing blocks
            if m - now_used > n - i - 1:
                continue
            block_of[i] = block
            yield from extend(i + 1, now_used)

    yield from extend(0, 0)


def consecutive_partitions(n: int, m: int) -> Iterator[Partition]:
    """Yield every partition of the cycle 0..n-1 into m runs of consecutive points.

    Raises:
        DomainError: If m is not in 1..n.
    """
    if not 1 <= m <= n:
        msg = f"Cannot cut a cycle of {n} points into {m} nonempty runs."
        raise DomainError(msg)
    if m == 1:
        yield Partition((0,) * n, 1)
        return

    for cuts in itertools.combinations(range(n), m):
        block_of = [0] * n
        # Run t covers the points after cut t up to and including cut t + 1, wrapping around
        for t in range(m):
            start, end = cuts[t] + 1, cuts[(t + 1) % m]
            length = (end - start) % n + 1
            for step in range(length):
                block_of[(start + step) % n] = t
        yield Partition(tuple(block_of), m)


def partition_objective(partition: Partition, x: FiniteMetricSpace, lam: float) -> float:
    """max{diam D, lam - alpha(D), diam X - lam} for one partition."""
    return max(
        partition_diam(partition, x),
        lam - partition_alpha(partition, x),
        diam(x) - lam,
    )


def partition_objective_pi(
    partition: Partition, x: FiniteMetricSpace, lam: PiRational
) -> PiRational:
    """partition_objective() computed exactly for spaces with pi coefficients.

    Raises:
        DomainError: If the space has no exact coefficients.
    """
    if x.pi_coefficients is None:
        msg = "Exact partition objective needs a space with pi coefficients."
        raise DomainError(msg)
    partition.check_for(x)

    c = x.pi_coefficients
    block_of = partition.block_of
    within = Fraction(0)
    between: Fraction | None = None
    whole = Fraction(0)
    for i, j in itertools.combinations(range(x.size), 2):
        d = c[i][j]
        whole = max(whole, d)
        if block_of[i] == block_of[j]:
            within = max(within, d)
        elif between is None or d < between:
            between = d

    terms = [within, whole - lam.coefficient]
    if between is not None:
        terms.append(lam.coefficient - between)
    return PiRational.from_fraction(max(terms))


class PartitionSearch:
    """Branch-and-bound over partitions of X into m blocks for a fixed lam.

    Blocks are opened in restricted-growth order, so the first optimal leaf accepted is the
    lexicographically smallest. Ties with the seed are kept until a leaf of its own is accepted.
    """

    def __init__(
        self,
        x: FiniteMetricSpace,
        lam: float,
        m: int,
        seed_value: float = math.inf,
        tolerance: float = EPS_METRIC,
        logger: logging.Logger | None = None,
    ):
        self.logger = logger or module_logger
        self.d: list[list[float]] = x.dist.tolist()
        self.n = x.size
        self.lam = lam
        self.m = m
        self.diam_gap = diam(x) - lam
        self.tolerance = tolerance

        self.best = seed_value
        self.best_witness: tuple[int, ...] | None = None
        self.nodes = 0
        self.block_of = [-1] * self.n

    def run(self) -> tuple[float, Partition | None]:
        """Run the search and return the best objective and its partition (None if the seed won)."""
        self._assign(0, 0, 0.0, math.inf)
        self.logger.debug(
            "Partition search visited %s node%s.", self.nodes, "" if self.nodes == 1 else "s"
        )
        if self.best_witness is None:
            return self.best, None
        return self.best, Partition(self.best_witness, self.m)

    def _pruned(self, value: float) -> bool:
        if self.best_witness is not None:
            return value >= self.best - self.tolerance
        return value > self.best + self.tolerance

    def _assign(self, i: int, used: int, within: float, between: float) -> None:
        if i == self.n:
            self.best = max(within, self.lam - between, self.diam_gap)
            self.best_witness = tuple(self.block_of)
            return

        row = self.d[i]
        for block in range(min(used + 1, self.m)):
            now_used = max(used, block + 1)
            if self.m - now_used > self.n - i - 1:
                continue
            self.nodes += 1

            new_within, new_between = within, between
            for k in range(i):
                if self.block_of[k] == block:
                    if row[k] > new_within:
                        new_within = row[k]
                elif row[k] < new_between:
                    new_between = row[k]

            if self._pruned(max(new_within, self.lam - new_between, self.diam_gap)):
                continue

            self.block_of[i] = block
            self._assign(i + 1, now_used, new_within, new_between)
            self.block_of[i] = -1


def _default_seed(n: int, m: int) -> Partition:
    """Points 0..m-2 alone, everything else in the last block."""
    return Partition(tuple(min(i, m - 1) for i in range(n)), m)


def simplex_distance(
    spec: SimplexSpec,
    x: FiniteMetricSpace,
    arc_seed: bool = True,
    tolerance: float = EPS_METRIC,
    logger: logging.Logger | None = None,
) -> GHResult:
    """Compute d_GH(lam * Delta_m, X) exactly from the partition formula.

    Args:
        spec: The simplex.
        x: The target space, with more than one point and at least m points.
        arc_seed: Whether to seed polygon targets with their best partition into consecutive runs.
        tolerance: Objective values closer than this are treated as ties.
        logger: The logger for search statistics.

    Returns:
        An exact result whose witness is an optimal partition of X.

    Raises:
        DomainError: If X has one point or fewer than m points.
    """
    logger = logger or module_logger
    if x.size == 1:
        msg = "The partition formula needs a target space with more than one point."
        raise DomainError(msg)
    if spec.m > x.size:
        msg = f"Cannot partition {x.size} points into {spec.m} nonempty blocks."
        raise DomainError(msg)

    seeds = [_default_seed(x.size, spec.m)]
    if arc_seed and x.polygon_order is not None:
        seeds.extend(consecutive_partitions(x.size, spec.m))
    seed = min(seeds, key=lambda p: partition_objective(p, x, spec.lam))
    seed_value = partition_objective(seed, x, spec.lam)
    logger.debug("Seeded partition search with objective %s.", seed_value)

    search = PartitionSearch(x, spec.lam, spec.m, seed_value, tolerance, logger)
    best, witness = search.run()
    if witness is None:
        best, witness = seed_value, seed

    exact = None
    if spec.exact is not None and x.pi_coefficients is not None:
        exact = partition_objective_pi(witness, x, spec.exact) / 2
    return GHResult(
        best / 2, BoundKind.EXACT, Method.SIMPLEX, witness, exact=exact, nodes=search.nodes
    )
