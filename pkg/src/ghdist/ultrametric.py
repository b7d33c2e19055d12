"""The minimax pseudo-ultrametric u_X, the quotient U(X), and the lower bound it gives for d_GH.

u_X(x, y) is the smallest, over all chains from x to y, of the largest link in the chain. For a
finite space it equals the largest edge on the path joining x and y in a minimum spanning tree of
the complete distance graph, so every value of u is a copy of an input distance.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import networkx as nx
import numpy as np

from ghdist.gh_exact import DEFAULT_BUDGET, gh_bruteforce
from ghdist.metric_core import FiniteMetricSpace, diam, is_simplex
from ghdist.simplex_dist import SimplexSpec, simplex_distance
from ghdist.types import BoundKind, BudgetExhaustedError, GHResult, Method

if TYPE_CHECKING:
    from ghdist.metric_core import Partition

module_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UltrametricQuotient:
    """U(X): the space of zero-u classes with the induced ultrametric.

    Attributes:
        space: The quotient space; labels join the labels of each class with "+".
        class_of: The quotient point of every original point.
    """

    space: FiniteMetricSpace
    class_of: tuple[int, ...]

    def members(self, point: int) -> list[int]:
        """The original points merged into a quotient point."""
        return [i for i, c in enumerate(self.class_of) if c == point]


def minimax_metric(x: FiniteMetricSpace) -> np.ndarray:
    """Compute u_X as the largest edge on minimum spanning tree paths."""
    n = x.size
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_weighted_edges_from(
        (i, j, float(x.dist[i, j])) for i in range(n) for j in range(i + 1, n)
    )
    tree = nx.minimum_spanning_tree(graph, algorithm="kruskal")

    u = np.zeros((n, n))
    for source in range(n):
        # Walk the tree outward, carrying the largest edge seen on the way
        for parent, child in nx.bfs_edges(tree, source):
            u[source, child] = max(u[source, parent], tree[parent][child]["weight"])
    return u


def minimax_closure(x: FiniteMetricSpace) -> np.ndarray:
    """Compute u_X by a Floyd-Warshall style min-max closure, in O(n^3)."""
    u = np.array(x.dist, dtype=np.float64)
    for k in range(x.size):
        u = np.minimum(u, np.maximum(u[:, k, np.newaxis], u[np.newaxis, k, :]))
    return u


def is_ultrametric(u: np.ndarray) -> bool:
    """Whether u(x, z) <= max(u(x, y), u(y, z)) for all triples, compared exactly."""
    for k in range(u.shape[0]):
        if np.any(u > np.maximum(u[:, k, np.newaxis], u[np.newaxis, k, :])):
            return False
    return True


def quotient(x: FiniteMetricSpace) -> UltrametricQuotient:
    """Build U(X) by merging points at u-distance exactly zero."""
    u = minimax_metric(x)
    class_of = [-1] * x.size
    representatives: list[int] = []
    labels: list[str] = []

    for i in range(x.size):
        if class_of[i] >= 0:
            continue
        members = np.nonzero(u[i] == 0)[0]
        for j in members:
            class_of[j] = len(representatives)
        representatives.append(i)
        labels.append("+".join(x.labels[j] for j in members))

    induced = u[np.ix_(representatives, representatives)]
    return UltrametricQuotient(FiniteMetricSpace(tuple(labels), induced), tuple(class_of))


def gh_lower_ultrametric(
    x: FiniteMetricSpace,
    y: FiniteMetricSpace,
    budget: int = DEFAULT_BUDGET,
    logger: logging.Logger | None = None,
) -> GHResult:
    """The lower bound d_GH(U(X), U(Y)) <= d_GH(X, Y), computed exactly.

    The smaller quotient is a simplex far more often than not (every polygon quotient is one), in
    which case the partition formula for simplices is used. A one-point quotient is at distance
    diam / 2 from anything. Otherwise the quotients go to the exact correspondence search. The
    witness, when present, refers to the quotient spaces.

    Raises:
        BudgetExhaustedError: If the exact search on the quotients runs out of budget.
    """
    logger = logger or module_logger
    ux, uy = quotient(x).space, quotient(y).space
    small, large = (ux, uy) if ux.size <= uy.size else (uy, ux)

    witness: Partition | None = None
    if small.size == 1:
        value = diam(large) / 2
    elif is_simplex(small):
        spec = SimplexSpec(small.size, float(small.dist[0, 1]))
        logger.debug(
            "Quotient is a simplex with %s points; using the partition formula.", small.size
        )
        inner = simplex_distance(spec, large, logger=logger)
        value = inner.value
        witness = inner.witness  # type: ignore[assignment]
    else:
        inner = gh_bruteforce(ux, uy, budget=budget, logger=logger)
        if inner.bound_kind is BoundKind.UPPER:
            raise BudgetExhaustedError(inner)
        return GHResult(
            inner.value, BoundKind.LOWER, Method.ULTRA_LOWER, inner.witness, nodes=inner.nodes
        )

    return GHResult(value, BoundKind.LOWER, Method.ULTRA_LOWER, witness)
