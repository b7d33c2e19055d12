"""Closed-form Gromov-Hausdorff distances between vertex sets of regular polygons.

P_n is the vertex set of the regular n-gon on the unit circle with the arc metric, and
p_{n,m} = d_GH(P_n, P_m). Known closed forms, for 2 <= n <= m:

- m divisible by n: p_{n,m} = pi/n - pi/m.
- n = 2: pi/2 - pi/(2m) for odd m, pi/2 - pi/m for even m.
- n = 3, r = m mod 3: pi/3 - pi/m for r = 0, pi/3 - r pi/(3m) otherwise.
- m = n + 1: pi/(n + 1).

Every answer is an exact PiRational. Vertex labels are 1-based (v1..vn) while indices are 0-based.

Note that diam P_m = pi - pi/m for odd m. Some write-ups of the n = 2 case state pi - pi/(2m);
the computed value is what the code and tests use, and the closed form for p_{2,m} agrees with the
exact search either way.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from ghdist.gh_exact import Correspondence
from ghdist.metric_core import Partition
from ghdist.pi_rational import PiRational
from ghdist.types import BoundKind, DomainError, GHDistError, GHResult, Method, Theorem


@dataclass(frozen=True)
class ClosedFormAnswer:
    """A closed-form value of p_{n,m}, or the fact that none applies.

    Attributes:
        n: The smaller polygon size.
        m: The larger polygon size.
        applicable: Whether some closed form covers (n, m).
        theorem: The rule that produced the value.
        value: The exact value, present only when applicable.
    """

    n: int
    m: int
    applicable: bool
    theorem: Theorem | None = None
    value: PiRational | None = None

    @property
    def parameters(self) -> tuple[int, int]:
        """The normalized (n, m) pair."""
        return self.n, self.m

    def __str__(self) -> str:
        if not self.applicable:
            return "no closed form"
        return f"{self.value}"


def _require_size(*sizes: int) -> None:
    for size in sizes:
        if size < 2:
            msg = f"Polygon sizes must be at least 2, got {size}."
            raise DomainError(msg)


def _applicable_rules(n: int, m: int) -> list[tuple[Theorem, Fraction]]:
    """Every rule whose hypotheses hold for n <= m, in dispatch priority order."""
    rules = []
    if m % n == 0:
        rules.append((Theorem.DIVISIBLE, Fraction(1, n) - Fraction(1, m)))
    if n == 2:
        if m % 2:
            rules.append((Theorem.P2, Fraction(1, 2) - Fraction(1, 2 * m)))
        else:
            rules.append((Theorem.P2, Fraction(1, 2) - Fraction(1, m)))
    if n == 3:
        r = m % 3
        if r == 0:
            rules.append((Theorem.P3, Fraction(1, 3) - Fraction(1, m)))
        else:
            rules.append((Theorem.P3, Fraction(1, 3) - Fraction(r, 3 * m)))
    if m == n + 1:
        rules.append((Theorem.CONSECUTIVE, Fraction(1, n + 1)))
    return rules


def closed_form(n: int, m: int) -> ClosedFormAnswer:
    """Look up p_{n,m} among the known closed forms.

    The pair is normalized so that n <= m. When several rules apply they are checked to agree.

    Raises:
        DomainError: If n or m is below 2.
        GHDistError: If two applicable rules disagree.
    """
    _require_size(n, m)
    n, m = min(n, m), max(n, m)
    rules = _applicable_rules(n, m)
    if not rules:
        return ClosedFormAnswer(n, m, applicable=False)

    theorem, value = rules[0]
    for other, other_value in rules[1:]:
        if other_value != value:
            msg = f"Closed forms disagree for ({n}, {m}): {theorem} and {other}."
            raise GHDistError(msg)
    return ClosedFormAnswer(n, m, True, theorem, PiRational.from_fraction(value))


def circle_distance(m: int) -> PiRational:
    """d_GH(S^1, P_m) = pi/m, a known constant (the circle itself is never computed with).

    Raises:
        DomainError: If m is below 2.
    """
    _require_size(m)
    return PiRational(1, m)


def ultrametric_polygon_bound(n: int, m: int) -> PiRational:
    """d_GH(U(P_n), U(P_m)), the distance between the simplices (2pi/n) Delta_n and (2pi/m) Delta_m.

    Raises:
        DomainError: If n or m is below 2.
    """
    _require_size(n, m)
    n, m = min(n, m), max(n, m)
    if n == m:
        return PiRational(0)
    lam, mu = Fraction(2, n), Fraction(2, m)
    return PiRational.from_fraction(max(mu, lam - mu) / 2)


def divisible_correspondence(n: int, p: int) -> Correspondence:
    """The correspondence between P_n and P_{pn} pairing u_i with v_{pi-k}, k = 0..p-1.

    Its distortion is 2(p - 1)pi/(pn), matching p_{n,pn} = pi/n - pi/(pn).

    Raises:
        DomainError: If n < 2 or p < 1.
    """
    if n < 2 or p < 1:
        msg = f"Need n >= 2 and p >= 1, got n = {n}, p = {p}."
        raise DomainError(msg)
    pairs = [(i - 1, p * i - k - 1) for i in range(1, n + 1) for k in range(p)]
    return Correspondence.from_pairs(pairs, n, p * n)


def rounding_correspondence(n: int, m: int) -> Correspondence:
    """Relate each vertex of P_n and of P_m to the angularly nearest vertex of the other.

    Raises:
        DomainError: If n or m is below 2.
    """
    _require_size(n, m)
    f = [((2 * i * m + n) // (2 * n)) % m for i in range(n)]
    g = [((2 * j * n + m) // (2 * m)) % n for j in range(m)]
    return Correspondence.from_maps(f, g)


def lemma_gap_scaled(n: int, p: int, i: int, j: int, k: int, l: int) -> int:  # noqa: E741
    """p times the circular index gap difference; see lemma_gap().

    Raises:
        DomainError: If any index is out of range.
    """
    if n < 2 or p < 1:
        msg = f"Need n >= 2 and p >= 1, got n = {n}, p = {p}."
        raise DomainError(msg)
    if not (1 <= i <= n and 1 <= j <= n):
        msg = f"Vertex indices must lie in 1..{n}, got i = {i}, j = {j}."
        raise DomainError(msg)
    if not (0 <= k < p and 0 <= l < p):
        msg = f"Offsets must lie in 0..{p - 1}, got k = {k}, l = {l}."
        raise DomainError(msg)

    steps = p * abs(i - j)
    shifted = abs(p * (i - j) + (k - l))
    return abs(min(steps, p * n - steps) - min(shifted, p * n - shifted))


def lemma_gap(n: int, p: int, i: int, j: int, k: int, l: int) -> float:  # noqa: E741
    """|min(|i-j|, n-|i-j|) - min(|i-j+(k-l)/p|, n-|i-j+(k-l)/p|)|.

    The circular index distance moves by at most |k - l|/p when one endpoint is shifted by
    (k - l)/p. Offsets k and l range over 0..p-1, the range the divisible-case correspondence
    needs. Some statements of this bound give 1..p-1, which would leave out the offset 0 that the
    correspondence uses for the first point of every block.

    Raises:
        DomainError: If any index is out of range.
    """
    return lemma_gap_scaled(n, p, i, j, k, l) / p


def lemma_counterexamples(n_max: int, p_max: int) -> Iterator[tuple[int, int, int, int, int, int]]:
    """Yield every (n, p, i, j, k, l) with n <= n_max, p <= p_max where the gap exceeds |k-l|/p."""
    for n in range(2, n_max + 1):
        for p in range(1, p_max + 1):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    for k in range(p):
                        for l in range(p):  # noqa: E741
                            if lemma_gap_scaled(n, p, i, j, k, l) > abs(k - l):
                                yield n, p, i, j, k, l


def _runs(sizes: list[int]) -> Partition:
    block_of = [block for block, size in enumerate(sizes) for _ in range(size)]
    return Partition(tuple(block_of), len(sizes))


def p2_optimal_partition(m: int) -> Partition:
    """An optimal partition of P_m for the simplex P_2: two consecutive halves.

    Raises:
        DomainError: If m is below 2.
    """
    _require_size(m)
    return _runs([(m + 1) // 2, m // 2])


def p3_optimal_partition(m: int) -> Partition:
    """An optimal partition of P_m for the simplex P_3: three consecutive runs.

    With q = m // 3 the runs have q, q, q vertices (r = 0), q, q, q + 1 (r = 1), or q, q + 1, q + 1
    (r = 2), the last being v_{2q+2}..v_m.

    Raises:
        DomainError: If m is below 3.
    """
    if m < 3:
        msg = f"Need at least 3 vertices to split into 3 runs, got {m}."
        raise DomainError(msg)
    q, r = divmod(m, 3)
    sizes = {0: [q, q, q], 1: [q, q, q + 1], 2: [q, q + 1, q + 1]}[r]
    return _runs(sizes)


def closed_form_result(n: int, m: int) -> GHResult | None:
    """The closed form as a GHResult with the witness its proof provides, or None if uncovered.

    Divisible pairs come with the explicit correspondence (oriented from P_n to P_m as given);
    n = 2 and n = 3 pairs with the optimal partition of the larger polygon.
    """
    answer = closed_form(n, m)
    if not answer.applicable or answer.value is None:
        return None

    small, large = answer.parameters
    witness: Correspondence | Partition | None = None
    if answer.theorem is Theorem.DIVISIBLE:
        witness = divisible_correspondence(small, large // small)
        if n > m:
            witness = witness.transposed()
    elif answer.theorem is Theorem.P2:
        witness = p2_optimal_partition(large)
    elif answer.theorem is Theorem.P3:
        witness = p3_optimal_partition(large)

    return GHResult(
        answer.value.value(),
        BoundKind.EXACT,
        Method.CLOSED_FORM,
        witness=witness,
        exact=answer.value,
    )
