"""Finite metric spaces, their validation, and partition statistics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from ghdist.pi_rational import PiRational
from ghdist.types import Axiom, DomainError, MetricValidationError

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

# Absolute tolerance for all axiom checks
EPS_METRIC = 1e-9

POLYGON_PREFIXES = ("v", "u")


@dataclass(frozen=True)
class Violation:
    """One violated axiom, located at a tuple of point indices."""

    axiom: Axiom
    where: tuple[int, ...] = ()
    detail: str = ""

    def __str__(self) -> str:
        location = f" at {self.where}" if self.where else ""
        detail = f": {self.detail}" if self.detail else ""
        return f"{self.axiom}{location}{detail}"


@dataclass(frozen=True)
class ValidationReport:
    """The list of violated axioms for a distance matrix (empty means valid)."""

    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        """Whether the matrix satisfies every checked axiom."""
        return not self.violations

    def axioms(self) -> set[Axiom]:
        """The distinct axioms that were violated."""
        return {v.axiom for v in self.violations}

    def summary(self) -> str:
        """A one-line description of the report."""
        if self.ok:
            return "Distance matrix is valid."
        count = len(self.violations)
        shown = "; ".join(str(v) for v in self.violations[:5])
        more = f" (and {count - 5} more)" if count > 5 else ""
        return f"Found {count} violation{'s' if count != 1 else ''}: {shown}{more}."


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A labeled finite point set with a distance matrix.

    The matrix is stored as a read-only float64 array. Polygon spaces additionally carry the exact
    coefficients of pi for every entry and their vertex count.

    Attributes:
        labels: The point identifiers.
        dist: The square distance matrix.
        pi_coefficients: Exact entries as rational multiples of pi, when known.
        polygon_order: The n of P_n when the space is a regular polygon vertex set.
        pseudo: Whether zero distances between distinct points are allowed.
    """

    labels: tuple[str, ...]
    dist: np.ndarray
    pi_coefficients: tuple[tuple[Fraction, ...], ...] | None = field(default=None, repr=False)
    polygon_order: int | None = None
    pseudo: bool = False

    def __post_init__(self):
        matrix = np.array(self.dist, dtype=np.float64)
        matrix.setflags(write=False)
        object.__setattr__(self, "dist", matrix)
        object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))

    @classmethod
    def from_matrix(
        cls,
        dist: Sequence[Sequence[float]] | np.ndarray,
        labels: Sequence[str] | None = None,
        allow_pseudo: bool = False,
        prefix: str = "x",
    ) -> FiniteMetricSpace:
        """Build a validated space from a matrix.

        Args:
            dist: The distance matrix.
            labels: The point labels, defaulting to prefix1..prefixN.
            allow_pseudo: Whether to accept zero distances between distinct points.
            prefix: The label prefix used when no labels are given.

        Raises:
            MetricValidationError: If the matrix violates any metric axiom.
        """
        try:
            matrix = np.asarray(dist, dtype=np.float64)
        except (TypeError, ValueError) as e:
            violation = Violation(Axiom.NON_SQUARE, detail=str(e))
            raise MetricValidationError(ValidationReport((violation,))) from e

        if labels is None:
            size = matrix.shape[0] if matrix.ndim >= 1 else 0
            labels = [f"{prefix}{i + 1}" for i in range(size)]
        space = cls(tuple(labels), matrix, pseudo=allow_pseudo)
        report = validate(space, allow_pseudo=allow_pseudo)
        if not report.ok:
            raise MetricValidationError(report)
        return space

    @property
    def size(self) -> int:
        """The number of points."""
        return len(self.labels)

    def __len__(self) -> int:
        return self.size

    def index_of(self, label: str) -> int:
        """The index of the point with the given label.

        Raises:
            DomainError: If no point has the label.
        """
        try:
            return self.labels.index(label)
        except ValueError:
            msg = f"No point labeled {label!r}."
            raise DomainError(msg) from None

    def pi_matrix(self) -> tuple[tuple[PiRational, ...], ...] | None:
        """The distance matrix as exact PiRational entries, when known."""
        if self.pi_coefficients is None:
            return None
        return tuple(
            tuple(PiRational.from_fraction(q) for q in row) for row in self.pi_coefficients
        )

    def same_as(self, other: FiniteMetricSpace) -> bool:
        """Whether both spaces have equal labels and bit-identical matrices."""
        return self.labels == other.labels and np.array_equal(self.dist, other.dist)


def validate(space: FiniteMetricSpace, allow_pseudo: bool = False) -> ValidationReport:
    """Check a space against the metric axioms.

    Shape problems stop the check early since the remaining axioms are meaningless for them.
    Asymmetry and triangle violations are reported once per unordered pair.

    Args:
        space: The space to check.
        allow_pseudo: Whether zero off-diagonal distances are permitted.

    Returns:
        A report listing every violation found.
    """
    d = np.asarray(space.dist, dtype=np.float64)
    violations: list[Violation] = []

    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        return ValidationReport((Violation(Axiom.NON_SQUARE, detail=f"shape {d.shape}"),))
    n = d.shape[0]
    if n == 0:
        return ValidationReport((Violation(Axiom.EMPTY),))
    if len(space.labels) != n:
        detail = f"{len(space.labels)} labels for {n} points"
        return ValidationReport((Violation(Axiom.LABEL_MISMATCH, detail=detail),))

    finite = np.isfinite(d)
    for i, j in zip(*np.nonzero(~finite), strict=True):
        violations.append(Violation(Axiom.NOT_FINITE, (int(i), int(j))))
    if violations:
        return ValidationReport(tuple(violations))

    for i, j in zip(*np.nonzero(d < 0), strict=True):
        violations.append(Violation(Axiom.NEGATIVE, (int(i), int(j)), f"{d[i, j]}"))

    for i in np.nonzero(np.diag(d) != 0)[0]:
        violations.append(Violation(Axiom.NONZERO_DIAGONAL, (int(i), int(i)), f"{d[i, i]}"))

    asym = np.abs(d - d.T) > EPS_METRIC
    for i, j in zip(*np.nonzero(np.triu(asym, 1)), strict=True):
        violations.append(Violation(Axiom.ASYMMETRY, (int(i), int(j)), f"{d[i, j]} != {d[j, i]}"))

    if not allow_pseudo:
        off_diagonal_zero = (d == 0) & ~np.eye(n, dtype=bool)
        for i, j in zip(*np.nonzero(np.triu(off_diagonal_zero, 1)), strict=True):
            violations.append(Violation(Axiom.ZERO_DISTANCE, (int(i), int(j))))

    violations.extend(_triangle_violations(d))
    return ValidationReport(tuple(violations))


def _triangle_violations(d: np.ndarray) -> list[Violation]:
    n = d.shape[0]
    seen: set[tuple[int, int]] = set()
    found = []
    for k in range(n):
        # Compare every d[i, j] with the detour through k
        detour = d[:, k, np.newaxis] + d[np.newaxis, k, :]
        bad = np.triu(d > detour + EPS_METRIC, 1)
        for i, j in zip(*np.nonzero(bad), strict=True):
            pair = (int(i), int(j))
            if pair in seen:
                continue
            seen.add(pair)
            found.append(
                Violation(
                    Axiom.TRIANGLE,
                    pair,
                    f"{d[i, j]} > {d[i, k]} + {d[k, j]} via point {k}",
                )
            )
    return found


def polygon_coefficient(n: int, i: int, j: int) -> Fraction:
    """The coefficient of pi in the arc distance between vertices i and j of P_n."""
    steps = abs(i - j)
    return Fraction(2 * min(steps, n - steps), n)


def regular_polygon(n: int, prefix: str = "v") -> FiniteMetricSpace:
    """Build P_n, the vertex set of a regular n-gon on the unit circle with the arc metric.

    Vertex i and j are (2 pi / n) * min(|i - j|, n - |i - j|) apart. The exact coefficients are kept
    alongside the float matrix.

    Args:
        n: The number of vertices.
        prefix: The label prefix, "v" (default) or "u".

    Raises:
        DomainError: If n < 2 or the prefix is not supported.
    """
    if n < 2:
        msg = f"A polygon vertex set needs at least 2 vertices, got {n}."
        raise DomainError(msg)
    if prefix not in POLYGON_PREFIXES:
        msg = f"Polygon labels use one of the prefixes {POLYGON_PREFIXES}, got {prefix!r}."
        raise DomainError(msg)

    coefficients = tuple(
        tuple(polygon_coefficient(n, i, j) for j in range(n)) for i in range(n)
    )
    dist = [[float(PiRational.from_fraction(q)) for q in row] for row in coefficients]
    labels = tuple(f"{prefix}{i + 1}" for i in range(n))
    return FiniteMetricSpace(labels, np.array(dist), coefficients, polygon_order=n)


def simplex_space(m: int, lam: float, prefix: str = "s") -> FiniteMetricSpace:
    """Build the simplex lam * Delta_m: m points, all nonzero distances equal to lam.

    Raises:
        DomainError: If m < 1 or lam is not positive.
    """
    if m < 1:
        msg = f"A simplex needs at least one point, got {m}."
        raise DomainError(msg)
    if not lam > 0:
        msg = f"Simplex distance must be positive, got {lam}."
        raise DomainError(msg)

    dist = np.full((m, m), float(lam))
    np.fill_diagonal(dist, 0.0)
    labels = tuple(f"{prefix}{i + 1}" for i in range(m))

    # P_2 and P_3 are simplices; keep exact coefficients when lam is a recognizable multiple of pi
    coefficients = None
    q = PiRational.from_float_multiple_of_pi(float(lam))
    if q.value() == float(lam):
        coefficients = tuple(
            tuple(Fraction(0) if i == j else q.coefficient for j in range(m)) for i in range(m)
        )
    return FiniteMetricSpace(labels, dist, coefficients)


def is_simplex(space: FiniteMetricSpace) -> bool:
    """Whether all off-diagonal distances are exactly equal (trivially true for one point)."""
    if space.size <= 1:
        return True
    off = space.dist[~np.eye(space.size, dtype=bool)]
    return bool(np.all(off == off[0]))


def recognize_polygon(space: FiniteMetricSpace) -> FiniteMetricSpace:
    """Replace a space by the matching regular polygon generator output, if it is one.

    A space read back from a file has lost its exact coefficients; when its matrix equals the
    matrix of P_n within EPS_METRIC, the generator's space (with its labels kept) is returned.
    """
    if space.polygon_order is not None or space.size < 2:
        return space
    candidate = regular_polygon(space.size)
    if np.allclose(space.dist, candidate.dist, rtol=0.0, atol=EPS_METRIC):
        return FiniteMetricSpace(
            space.labels, candidate.dist, candidate.pi_coefficients, polygon_order=space.size
        )
    return space


def random_metric(
    n: int,
    rng: np.random.Generator,
    low: float = 0.1,
    high: float = 1.0,
) -> FiniteMetricSpace:
    """Build a random metric on n points via shortest-path closure.

    A symmetric matrix with entries uniform in [low, high) is replaced by its all-pairs
    shortest-path closure, which forces the triangle inequality.

    Raises:
        DomainError: If n < 1 or the range is not positive.
    """
    if n < 1:
        msg = f"A metric space needs at least one point, got {n}."
        raise DomainError(msg)
    if not 0 < low <= high:
        msg = f"Distance range must satisfy 0 < low <= high, got [{low}, {high})."
        raise DomainError(msg)

    raw = rng.uniform(low, high, size=(n, n))
    lengths = np.triu(raw, 1)
    lengths += lengths.T
    for k in range(n):
        lengths = np.minimum(lengths, lengths[:, k, np.newaxis] + lengths[np.newaxis, k, :])
    np.fill_diagonal(lengths, 0.0)
    return FiniteMetricSpace.from_matrix(lengths, prefix="x")


def _require_nonempty(points: Iterable[int], space: FiniteMetricSpace, name: str) -> list[int]:
    indices = sorted(set(points))
    if not indices:
        msg = f"Point set {name} must be nonempty."
        raise DomainError(msg)
    if indices[0] < 0 or indices[-1] >= space.size:
        msg = f"Point set {name} has indices outside 0..{space.size - 1}."
        raise DomainError(msg)
    return indices


def diam(space: FiniteMetricSpace, points: Iterable[int] | None = None) -> float:
    """The largest pairwise distance of the space, or of a subset of its points."""
    if points is None:
        return float(space.dist.max()) if space.size > 1 else 0.0
    indices = _require_nonempty(points, space, "A")
    return float(space.dist[np.ix_(indices, indices)].max())


def set_distance(a: Iterable[int], b: Iterable[int], space: FiniteMetricSpace) -> float:
    """The smallest distance |ab| between a point of A and a point of B.

    Raises:
        DomainError: If either set is empty.
    """
    rows = _require_nonempty(a, space, "A")
    cols = _require_nonempty(b, space, "B")
    return float(space.dist[np.ix_(rows, cols)].min())


def hausdorff_distance(a: Iterable[int], b: Iterable[int], space: FiniteMetricSpace) -> float:
    """The Hausdorff distance between two nonempty subsets of one space.

    Raises:
        DomainError: If either set is empty.
    """
    rows = _require_nonempty(a, space, "A")
    cols = _require_nonempty(b, space, "B")
    block = space.dist[np.ix_(rows, cols)]
    return float(max(block.min(axis=1).max(), block.min(axis=0).max()))


@dataclass(frozen=True)
class Partition:
    """An assignment of n points into exactly m nonempty blocks.

    The assignment is stored as a restricted-growth string: block ids first appear in increasing
    order, so two partitions differing only by block renaming compare equal.

    Attributes:
        block_of: The block index of every point.
        m: The number of blocks.
    """

    block_of: tuple[int, ...]
    m: int

    def __post_init__(self):
        relabel: dict[int, int] = {}
        canonical = []
        for block in self.block_of:
            if block not in relabel:
                relabel[block] = len(relabel)
            canonical.append(relabel[block])

        if len(relabel) != self.m:
            msg = f"Partition uses {len(relabel)} nonempty blocks but declares m = {self.m}."
            raise DomainError(msg)
        object.__setattr__(self, "block_of", tuple(canonical))

    @classmethod
    def from_blocks(cls, blocks: Sequence[Iterable[int]], n: int) -> Partition:
        """Build a partition from explicit blocks of point indices.

        Raises:
            DomainError: If the blocks are empty, overlap, or do not cover 0..n-1.
        """
        block_of = [-1] * n
        for b, members in enumerate(blocks):
            members = list(members)
            if not members:
                msg = f"Block {b} of the partition is empty."
                raise DomainError(msg)
            for i in members:
                if not 0 <= i < n or block_of[i] != -1:
                    msg = f"Point {i} is out of range or assigned to more than one block."
                    raise DomainError(msg)
                block_of[i] = b
        if -1 in block_of:
            msg = f"Point {block_of.index(-1)} is not assigned to any block."
            raise DomainError(msg)
        return cls(tuple(block_of), len(blocks))

    @property
    def n(self) -> int:
        """The number of points partitioned."""
        return len(self.block_of)

    def blocks(self) -> list[list[int]]:
        """The blocks as lists of point indices, in block order."""
        result: list[list[int]] = [[] for _ in range(self.m)]
        for i, block in enumerate(self.block_of):
            result[block].append(i)
        return result

    def check_for(self, space: FiniteMetricSpace) -> None:
        """Ensure the partition is over exactly the points of the space.

        Raises:
            DomainError: If the point counts differ.
        """
        if self.n != space.size:
            msg = f"Partition covers {self.n} points but the space has {space.size}."
            raise DomainError(msg)


def partition_diam(partition: Partition, space: FiniteMetricSpace) -> float:
    """diam D: the largest diameter of any block."""
    partition.check_for(space)
    return max(diam(space, block) for block in partition.blocks())


def partition_alpha(partition: Partition, space: FiniteMetricSpace) -> float:
    """alpha(D): the smallest distance between two distinct blocks (+inf for a single block)."""
    partition.check_for(space)
    if partition.m == 1:
        return float("inf")
    labels = np.asarray(partition.block_of)
    between = labels[:, np.newaxis] != labels[np.newaxis, :]
    return float(space.dist[between].min())
