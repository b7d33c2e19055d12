# Test methods with long descriptive names can omit docstrings

from __future__ import annotations

from unittest import TestCase

import numpy as np

from ghdist.gh_exact import gh_bruteforce
from ghdist.metric_core import (
    EPS_METRIC,
    FiniteMetricSpace,
    Partition,
    random_metric,
    regular_polygon,
    simplex_space,
)
from ghdist.pi_rational import PI, PiRational
from ghdist.simplex_dist import (
    SimplexSpec,
    consecutive_partitions,
    enumerate_partitions,
    partition_objective,
    partition_objective_pi,
    simplex_distance,
    stirling2,
)
from ghdist.types import BoundKind, DomainError, Method

LAMBDAS = (PI, PiRational(2, 3), PiRational(1, 2))


class TestSimplexSpec(TestCase):
    def test_invalid(self):
        with self.assertRaises(DomainError):
            SimplexSpec(1, 1.0)
        with self.assertRaises(DomainError):
            SimplexSpec(3, 0.0)

    def test_as_space(self):
        spec = SimplexSpec.from_pi(3, PiRational(2, 3))
        np.testing.assert_array_equal(spec.as_space().dist, regular_polygon(3).dist)
        self.assertEqual(spec.exact, PiRational(2, 3))


class TestEnumeratePartitions(TestCase):
    def test_small_counts(self):
        self.assertEqual(len(list(enumerate_partitions(3, 2))), 3)
        self.assertEqual(len(list(enumerate_partitions(5, 5))), 1)
        self.assertEqual(list(enumerate_partitions(5, 1)), [Partition((0,) * 5, 1)])

    def test_order_and_uniqueness(self):
        partitions = [p.block_of for p in enumerate_partitions(6, 3)]
        self.assertEqual(partitions, sorted(partitions))
        self.assertEqual(len(set(partitions)), len(partitions))
        self.assertEqual(partitions[0], (0, 0, 0, 0, 1, 2))

    def test_counts_match_stirling_numbers(self):
        for n in range(1, 11):
            for m in range(1, n + 1):
                with self.subTest(n=n, m=m):
                    count = sum(1 for _ in enumerate_partitions(n, m))
                    self.assertEqual(count, stirling2(n, m))

    def test_stirling_numbers(self):
        self.assertEqual(stirling2(0, 0), 1)
        self.assertEqual(stirling2(12, 1), 1)
        self.assertEqual(stirling2(12, 2), 2047)
        self.assertEqual(stirling2(12, 3), 86526)
        self.assertEqual(stirling2(12, 11), 66)
        self.assertEqual(stirling2(12, 12), 1)
        self.assertEqual(sum(stirling2(12, k) for k in range(13)), 4213597)
        self.assertEqual(stirling2(3, 5), 0)

    def test_out_of_range(self):
        for n, m in [(3, 0), (3, 4), (0, 0)]:
            with self.assertRaises(DomainError):
                list(enumerate_partitions(n, m))


class TestConsecutivePartitions(TestCase):
    def test_runs(self):
        runs = list(consecutive_partitions(4, 2))
        self.assertEqual(len(runs), 6)
        for partition in runs:
            for block in partition.blocks():
                # A run on the cycle has at most one wrap-around gap
                gaps = sum((b - a) % 4 != 1 for a, b in zip(block, block[1:] + block[:1]))
                self.assertLessEqual(gaps, 1 if len(block) < 4 else 0)

    def test_counts(self):
        for n in range(2, 9):
            distinct = {p.block_of for p in consecutive_partitions(n, 2)}
            self.assertEqual(len(distinct), n * (n - 1) // 2)
        self.assertEqual(len(list(consecutive_partitions(5, 1))), 1)
        self.assertEqual(len(set(consecutive_partitions(5, 5))), 1)


class TestSimplexDistance(TestCase):
    def test_p2_and_p5(self):
        result = simplex_distance(SimplexSpec.from_pi(2, PI), regular_polygon(5))
        expected = PiRational(1, 2) - PiRational(1, 10)
        self.assertAlmostEqual(result.value, expected.value(), delta=1e-12)
        self.assertEqual(result.exact, PiRational(2, 5))
        self.assertEqual(result.bound_kind, BoundKind.EXACT)
        self.assertEqual(result.method, Method.SIMPLEX)

    def test_p3_and_p7(self):
        result = simplex_distance(SimplexSpec.from_pi(3, PiRational(2, 3)), regular_polygon(7))
        self.assertEqual(result.exact, PiRational(1, 3) - PiRational(1, 21))

    def test_simplex_against_itself(self):
        spec = SimplexSpec(4, 1.5)
        self.assertEqual(simplex_distance(spec, spec.as_space()).value, 0.0)

    def test_preconditions(self):
        with self.assertRaises(DomainError):
            simplex_distance(SimplexSpec(2, 1.0), FiniteMetricSpace(("a",), [[0.0]]))
        with self.assertRaises(DomainError):
            simplex_distance(SimplexSpec(5, 1.0), regular_polygon(4))

    def test_witness_reproduces_value(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            x = random_metric(int(rng.integers(2, 9)), rng)
            spec = SimplexSpec(int(rng.integers(2, x.size + 1)), float(rng.uniform(0.1, 1.5)))
            result = simplex_distance(spec, x)
            assert isinstance(result.witness, Partition)
            self.assertEqual(result.witness.m, spec.m)
            self.assertAlmostEqual(
                partition_objective(result.witness, x, spec.lam) / 2, result.value, delta=1e-12
            )

    def test_matches_enumeration(self):
        rng = np.random.default_rng(37)
        for _ in range(20):
            x = random_metric(int(rng.integers(2, 8)), rng)
            spec = SimplexSpec(int(rng.integers(2, x.size + 1)), float(rng.uniform(0.1, 1.5)))
            brute = min(
                partition_objective(p, x, spec.lam) for p in enumerate_partitions(x.size, spec.m)
            )
            self.assertAlmostEqual(simplex_distance(spec, x).value, brute / 2, delta=1e-12)

    def test_without_arc_seed(self):
        spec = SimplexSpec.from_pi(3, PiRational(2, 3))
        with_seed = simplex_distance(spec, regular_polygon(8))
        without = simplex_distance(spec, regular_polygon(8), arc_seed=False)
        self.assertAlmostEqual(with_seed.value, without.value, delta=EPS_METRIC)

    def test_exact_objective_needs_coefficients(self):
        x = random_metric(4, np.random.default_rng(0))
        with self.assertRaises(DomainError):
            partition_objective_pi(Partition((0, 0, 1, 1), 2), x, PI)

    def test_lipschitz_in_lambda(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            x = random_metric(int(rng.integers(3, 8)), rng)
            m = int(rng.integers(2, x.size + 1))
            lam = float(rng.uniform(0.1, 1.5))
            delta = float(rng.uniform(0.0, 0.5))
            low = simplex_distance(SimplexSpec(m, lam), x).value
            high = simplex_distance(SimplexSpec(m, lam + delta), x).value
            self.assertLessEqual(abs(high - low), delta + 1e-9)

    def test_agrees_with_bruteforce(self):
        for lam in LAMBDAS:
            for m in range(2, 5):
                for k in range(m, 7):
                    with self.subTest(lam=str(lam), m=m, k=k):
                        spec = SimplexSpec.from_pi(m, lam)
                        target = regular_polygon(k)
                        value = simplex_distance(spec, target).value
                        brute = gh_bruteforce(simplex_space(m, lam.value()), target).value
                        self.assertAlmostEqual(value, brute, delta=1e-9)
