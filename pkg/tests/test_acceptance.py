"""End-to-end checks of the polygon distance tables against exhaustive search."""

from __future__ import annotations

from unittest import TestCase

from ghdist.gh_exact import distortion, gh_bruteforce, seed_correspondence
from ghdist.metric_core import EPS_METRIC, regular_polygon
from ghdist.pi_rational import PI, PiRational
from ghdist.polygon_formulas import divisible_correspondence, lemma_gap
from ghdist.simplex_dist import SimplexSpec, simplex_distance
from ghdist.types import GHResult
from ghdist.ultrametric import gh_lower_ultrametric

DIVISIBLE_PAIRS = [(2, 2), (2, 4), (2, 6), (3, 3), (3, 6), (3, 9), (4, 8)]
P2_SIZES = range(3, 11)
P3_SEARCH_SIZES = range(4, 8)
CONSECUTIVE_SIZES = range(2, 7)

_cache: dict[tuple[int, int], GHResult] = {}


def bruteforce(n: int, m: int) -> GHResult:
    """The exact search result for (P_n, P_m), computed once per test run."""
    if (n, m) not in _cache:
        _cache[n, m] = gh_bruteforce(regular_polygon(n), regular_polygon(m))
    return _cache[n, m]


def p2_expected(m: int) -> PiRational:
    if m % 2:
        return PiRational(1, 2) - PiRational(1, 2 * m)
    return PiRational(1, 2) - PiRational(1, m)


def p3_expected(m: int) -> PiRational:
    r = m % 3
    if r == 0:
        return PiRational(1, 3) - PiRational(1, m)
    return PiRational(1, 3) - PiRational(r, 3 * m)


class TestDivisibleTable(TestCase):
    def test_divisible_pairs(self):
        for n, m in DIVISIBLE_PAIRS:
            with self.subTest(n=n, m=m):
                expected = PiRational(1, n) - PiRational(1, m)
                self.assertAlmostEqual(bruteforce(n, m).value, expected.value(), delta=1e-9)

    def test_explicit_correspondence_bound(self):
        for n in range(2, 9):
            for p in range(1, 7):
                with self.subTest(n=n, p=p):
                    x, y = regular_polygon(n), regular_polygon(n * p)
                    bound = PiRational(2 * (p - 1), p * n)
                    dis = distortion(divisible_correspondence(n, p), x, y)
                    self.assertLessEqual(dis, bound.value() + 1e-12)


class TestTwoPointTable(TestCase):
    def test_bruteforce(self):
        for m in P2_SIZES:
            with self.subTest(m=m):
                self.assertAlmostEqual(bruteforce(2, m).value, p2_expected(m).value(), delta=1e-9)

    def test_partition_formula(self):
        for m in range(2, 17):
            with self.subTest(m=m):
                result = simplex_distance(SimplexSpec.from_pi(2, PI), regular_polygon(m))
                self.assertAlmostEqual(result.value, p2_expected(m).value(), delta=1e-9)


class TestThreePointTable(TestCase):
    def test_partition_formula(self):
        spec = SimplexSpec.from_pi(3, PiRational(2, 3))
        for m in range(4, 16):
            with self.subTest(m=m):
                result = simplex_distance(spec, regular_polygon(m))
                self.assertAlmostEqual(result.value, p3_expected(m).value(), delta=1e-9)

    def test_bruteforce(self):
        for m in P3_SEARCH_SIZES:
            with self.subTest(m=m):
                self.assertAlmostEqual(bruteforce(3, m).value, p3_expected(m).value(), delta=1e-9)


class TestConsecutiveTable(TestCase):
    def test_bruteforce(self):
        for m in CONSECUTIVE_SIZES:
            with self.subTest(m=m):
                expected = PiRational(1, m + 1).value()
                self.assertAlmostEqual(bruteforce(m, m + 1).value, expected, delta=1e-9)


class TestIndexGapLemma(TestCase):
    def test_exhaustive(self):
        violations = 0
        for n in range(2, 13):
            for p in range(1, 13):
                for i in range(1, n + 1):
                    for j in range(1, n + 1):
                        for k in range(p):
                            for l in range(p):  # noqa: E741
                                if lemma_gap(n, p, i, j, k, l) > abs(k - l) / p + 1e-12:
                                    violations += 1
        self.assertEqual(violations, 0)


class TestSandwich(TestCase):
    def test_lower_exact_upper(self):
        pairs = [
            *DIVISIBLE_PAIRS,
            *((2, m) for m in P2_SIZES),
            *((3, m) for m in P3_SEARCH_SIZES),
            *((m, m + 1) for m in CONSECUTIVE_SIZES),
        ]

        for n, m in dict.fromkeys(pairs):
            with self.subTest(n=n, m=m):
                x, y = regular_polygon(n), regular_polygon(m)
                exact = bruteforce(n, m).value
                upper = distortion(seed_correspondence(x, y), x, y) / 2
                self.assertLessEqual(gh_lower_ultrametric(x, y).value, exact + EPS_METRIC)
                self.assertLessEqual(exact, upper + EPS_METRIC)
