# Test methods with long descriptive names can omit docstrings

from __future__ import annotations

from unittest import TestCase

from ghdist.gh_exact import Correspondence, distortion, distortion_pi, gh_bruteforce
from ghdist.metric_core import EPS_METRIC, Partition, regular_polygon
from ghdist.pi_rational import PI, ZERO, PiRational
from ghdist.polygon_formulas import (
    circle_distance,
    closed_form,
    closed_form_result,
    divisible_correspondence,
    lemma_counterexamples,
    lemma_gap,
    p2_optimal_partition,
    p3_optimal_partition,
    rounding_correspondence,
    ultrametric_polygon_bound,
)
from ghdist.simplex_dist import SimplexSpec, partition_objective_pi, simplex_distance
from ghdist.types import BoundKind, DomainError, Method, Theorem


class TestClosedForm(TestCase):
    def test_examples(self):
        self.assertEqual(closed_form(4, 12).value, PiRational(1, 6))
        self.assertEqual(closed_form(4, 12).theorem, Theorem.DIVISIBLE)
        self.assertEqual(closed_form(3, 5).value, PiRational(1, 5))
        self.assertEqual(closed_form(3, 5).theorem, Theorem.P3)
        self.assertEqual(closed_form(2, 2).value, ZERO)
        self.assertEqual(closed_form(2, 3).value, PiRational(1, 3))
        self.assertEqual(closed_form(6, 7).theorem, Theorem.CONSECUTIVE)
        self.assertEqual(closed_form(6, 7).value, PiRational(1, 7))

    def test_not_applicable(self):
        answer = closed_form(5, 7)
        self.assertFalse(answer.applicable)
        self.assertIsNone(answer.value)
        self.assertEqual(str(answer), "no closed form")
        self.assertIsNone(closed_form_result(5, 7))

    def test_order_is_normalized(self):
        self.assertEqual(closed_form(12, 4), closed_form(4, 12))
        self.assertEqual(closed_form(12, 4).parameters, (4, 12))

    def test_rules_never_disagree(self):
        for n in range(2, 31):
            for m in range(n, 31):
                with self.subTest(n=n, m=m):
                    answer = closed_form(n, m)
                    if answer.value is None:
                        continue
                    self.assertLessEqual(ZERO, answer.value)
                    self.assertLessEqual(answer.value, PiRational(1, 2))
                    self.assertEqual(answer.value.is_zero(), n == m)

    def test_too_small(self):
        for n, m in [(1, 4), (4, 1), (0, 0)]:
            with self.assertRaises(DomainError):
                closed_form(n, m)

    def test_matches_exact_search(self):
        for n in range(2, 6):
            for m in range(n, 8):
                answer = closed_form(n, m)
                if answer.value is None:
                    continue
                with self.subTest(n=n, m=m):
                    brute = gh_bruteforce(regular_polygon(n), regular_polygon(m))
                    self.assertAlmostEqual(brute.value, answer.value.value(), delta=1e-9)


class TestConstants(TestCase):
    def test_circle_distance(self):
        self.assertEqual(circle_distance(6), PiRational(1, 6))
        with self.assertRaises(DomainError):
            circle_distance(1)

    def test_ultrametric_polygon_bound(self):
        self.assertEqual(ultrametric_polygon_bound(5, 5), ZERO)
        self.assertEqual(ultrametric_polygon_bound(2, 6), PiRational(1, 3))
        self.assertEqual(ultrametric_polygon_bound(6, 2), PiRational(1, 3))
        self.assertEqual(ultrametric_polygon_bound(4, 5), PiRational(1, 5))

    def test_bound_stays_below_closed_form(self):
        for n in range(2, 20):
            for m in range(n, 20):
                value = closed_form(n, m).value
                if value is not None:
                    self.assertLessEqual(ultrametric_polygon_bound(n, m), value)


class TestIndexGapLemma(TestCase):
    def test_examples(self):
        self.assertEqual(lemma_gap(4, 2, 1, 3, 0, 1), 0.5)
        self.assertEqual(lemma_gap(4, 3, 1, 1, 2, 0), 2 / 3)
        self.assertEqual(lemma_gap(5, 1, 2, 4, 0, 0), 0.0)

    def test_no_counterexamples(self):
        self.assertEqual(list(lemma_counterexamples(12, 12)), [])

    def test_out_of_range(self):
        with self.assertRaises(DomainError):
            lemma_gap(4, 2, 0, 1, 0, 0)
        with self.assertRaises(DomainError):
            lemma_gap(4, 2, 1, 1, 2, 0)
        with self.assertRaises(DomainError):
            lemma_gap(1, 2, 1, 1, 0, 0)


class TestDivisibleCorrespondence(TestCase):
    def test_shape(self):
        r = divisible_correspondence(3, 2)
        self.assertEqual((r.n, r.m), (3, 6))
        self.assertEqual(r.sorted_pairs(), [(0, 0), (0, 1), (1, 2), (1, 3), (2, 4), (2, 5)])
        self.assertTrue(r.is_valid())

    def test_distortion_is_optimal(self):
        for n in range(2, 9):
            for p in range(1, 7):
                with self.subTest(n=n, p=p):
                    r = divisible_correspondence(n, p)
                    x, y = regular_polygon(n), regular_polygon(n * p)
                    dis = distortion_pi(r, x, y)
                    self.assertEqual(dis, PiRational(2 * (p - 1), p * n))
                    self.assertEqual(dis / 2, closed_form(n, n * p).value)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            divisible_correspondence(1, 3)
        with self.assertRaises(DomainError):
            divisible_correspondence(3, 0)


class TestRoundingCorrespondence(TestCase):
    def test_valid_and_bounded(self):
        for n in range(2, 7):
            for m in range(2, 7):
                with self.subTest(n=n, m=m):
                    x, y = regular_polygon(n), regular_polygon(m)
                    r = rounding_correspondence(n, m)
                    self.assertTrue(r.is_valid())
                    self.assertLessEqual(
                        gh_bruteforce(x, y).value, distortion(r, x, y) / 2 + EPS_METRIC
                    )

    def test_identity_for_equal_sizes(self):
        r = rounding_correspondence(5, 5)
        self.assertEqual(distortion(r, regular_polygon(5), regular_polygon(5)), 0.0)


class TestOptimalPartitions(TestCase):
    def test_p2_runs(self):
        self.assertEqual(p2_optimal_partition(5).block_of, (0, 0, 0, 1, 1))
        self.assertEqual(p2_optimal_partition(2).block_of, (0, 1))

    def test_p3_runs(self):
        self.assertEqual(p3_optimal_partition(6).block_of, (0, 0, 1, 1, 2, 2))
        self.assertEqual(p3_optimal_partition(7).block_of, (0, 0, 1, 1, 2, 2, 2))
        self.assertEqual(p3_optimal_partition(8).block_of, (0, 0, 1, 1, 1, 2, 2, 2))
        with self.assertRaises(DomainError):
            p3_optimal_partition(2)

    def test_p2_partition_attains_closed_form(self):
        for m in range(2, 17):
            with self.subTest(m=m):
                objective = partition_objective_pi(p2_optimal_partition(m), regular_polygon(m), PI)
                self.assertEqual(objective / 2, closed_form(2, m).value)

    def test_p3_partition_attains_closed_form(self):
        lam = PiRational(2, 3)
        for m in range(3, 16):
            with self.subTest(m=m):
                objective = partition_objective_pi(p3_optimal_partition(m), regular_polygon(m), lam)
                self.assertEqual(objective / 2, closed_form(3, m).value)

    def test_simplex_search_confirms_p2_and_p3(self):
        for m in range(2, 17):
            with self.subTest(n=2, m=m):
                result = simplex_distance(SimplexSpec.from_pi(2, PI), regular_polygon(m))
                self.assertEqual(result.exact, closed_form(2, m).value)
        for m in range(4, 16):
            with self.subTest(n=3, m=m):
                spec = SimplexSpec.from_pi(3, PiRational(2, 3))
                result = simplex_distance(spec, regular_polygon(m))
                self.assertEqual(result.exact, closed_form(3, m).value)


class TestClosedFormResult(TestCase):
    def test_divisible_witness(self):
        result = closed_form_result(3, 6)
        assert result is not None
        self.assertEqual(result.bound_kind, BoundKind.EXACT)
        self.assertEqual(result.method, Method.CLOSED_FORM)
        self.assertEqual(result.exact, PiRational(1, 6))
        self.assertEqual(result.witness, divisible_correspondence(3, 2))

    def test_transposed_witness(self):
        result = closed_form_result(4, 2)
        assert result is not None
        assert isinstance(result.witness, Correspondence)
        self.assertEqual((result.witness.n, result.witness.m), (4, 2))
        dis = distortion_pi(result.witness, regular_polygon(4), regular_polygon(2))
        self.assertEqual(dis / 2, result.exact)

    def test_partition_witnesses(self):
        result = closed_form_result(2, 7)
        assert result is not None
        self.assertEqual(result.witness, p2_optimal_partition(7))

        result = closed_form_result(3, 4)
        assert result is not None
        self.assertIsInstance(result.witness, Partition)

    def test_consecutive_has_no_witness(self):
        result = closed_form_result(5, 6)
        assert result is not None
        self.assertIsNone(result.witness)
        self.assertEqual(result.exact, PiRational(1, 6))
