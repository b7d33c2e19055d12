from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ghdist.gh_exact import Correspondence
    from ghdist.metric_core import Partition, ValidationReport
    from ghdist.pi_rational import PiRational


class BoundKind(StrEnum):
    """How a computed value relates to the true Gromov-Hausdorff distance."""

    EXACT = "exact"
    LOWER = "lower"
    UPPER = "upper"


class Method(StrEnum):
    """Names of the operations that produce a distance."""

    EXACT = "exact"
    ULTRA_LOWER = "ultra-lower"
    DIAM_LOWER = "diam-lower"
    SIMPLEX = "simplex"
    CLOSED_FORM = "closed-form"


class FileFormat(StrEnum):
    """Supported distance matrix file formats."""

    CSV = "csv"
    JSON = "json"


class Theorem(StrEnum):
    """Closed-form results for regular polygon vertex sets."""

    DIVISIBLE = "thm_divisible"
    P2 = "thm_p2"
    P3 = "thm_p3"
    CIRCLE = "prop_circle"
    CONSECUTIVE = "prop_consecutive"


class Axiom(StrEnum):
    """Distinct ways a distance matrix can fail to be a (pseudo)metric."""

    EMPTY = "empty matrix"
    NON_SQUARE = "non-square matrix"
    LABEL_MISMATCH = "label count mismatch"
    NOT_FINITE = "non-finite entry"
    NEGATIVE = "negative entry"
    NONZERO_DIAGONAL = "nonzero diagonal"
    ASYMMETRY = "asymmetry"
    ZERO_DISTANCE = "zero distance between distinct points"
    TRIANGLE = "triangle inequality violation"


class GHDistError(Exception):
    """Base class for all errors raised by ghdist."""


class DomainError(GHDistError, ValueError):
    """An operation was called outside of its preconditions."""


class CoverageError(DomainError):
    """A correspondence leaves a point of one of the two spaces uncovered."""

    def __init__(self, side: str, index: int, label: str | None = None):
        self.side = side
        self.index = index
        self.label = label
        name = label if label is not None else f"#{index}"
        super().__init__(f"Point {name} of space {side} is not covered by the correspondence.")


class MetricValidationError(GHDistError, ValueError):
    """A distance matrix failed validation."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(report.summary())


class BudgetExhaustedError(GHDistError):
    """An exact search ran out of its node budget before proving optimality."""

    def __init__(self, result: GHResult):
        self.result = result
        super().__init__(
            f"Search budget exhausted: distance lies in [{result.lower_bound}, {result.value}]."
        )


@dataclass(frozen=True)
class GHResult:
    """A distance value together with its provenance.

    Attributes:
        value: The distance (or the bound on it).
        bound_kind: Whether the value is exact, a lower bound, or an upper bound.
        method: The operation that produced the value.
        witness: An optimal correspondence or partition, when the method has one.
        exact: The exact value as a rational multiple of pi, when known.
        lower_bound: The best proven lower bound when the value is only an upper bound.
        nodes: The number of search-tree nodes visited, for search methods.
    """

    value: float
    bound_kind: BoundKind
    method: Method
    witness: Correspondence | Partition | None = None
    exact: PiRational | None = None
    lower_bound: float | None = None
    nodes: int = 0
