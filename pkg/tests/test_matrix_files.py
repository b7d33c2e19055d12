# Test methods with long descriptive names can omit docstrings

from __future__ import annotations

import json
import math
import tempfile
from pathlib import Path
from unittest import TestCase

import numpy as np

from ghdist.matrix_files import (
    detect_format,
    format_space,
    parse_descriptor,
    parse_pi_expression,
    read_correspondence,
    read_space,
    write_correspondence,
    write_space,
)
from ghdist.metric_core import random_metric, regular_polygon
from ghdist.pi_rational import PiRational
from ghdist.polygon_formulas import divisible_correspondence
from ghdist.types import Axiom, DomainError, FileFormat, MetricValidationError


class FileTestCase(TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.tmp = Path(self._tmp.name)


class TestPiExpressions(TestCase):
    def test_multiples_of_pi(self):
        self.assertEqual(parse_pi_expression("pi"), math.pi)
        self.assertEqual(parse_pi_expression("2pi/3"), PiRational(2, 3).value())
        self.assertEqual(parse_pi_expression("π/4"), math.pi / 4)
        self.assertEqual(parse_pi_expression(" 3*PI "), PiRational(3).value())

    def test_plain_numbers(self):
        self.assertEqual(parse_pi_expression("1.5"), 1.5)
        self.assertEqual(parse_pi_expression("2"), 2.0)

    def test_invalid(self):
        for text in ("two", "pi/0", "pi/"):
            with self.subTest(text=text), self.assertRaises(DomainError):
                parse_pi_expression(text)


class TestDescriptors(TestCase):
    def test_polygon(self):
        space = parse_descriptor("polygon:6")
        assert space is not None
        self.assertTrue(space.same_as(regular_polygon(6)))
        self.assertEqual(space.polygon_order, 6)

    def test_simplex(self):
        space = parse_descriptor("simplex:3:2pi/3")
        assert space is not None
        np.testing.assert_array_equal(space.dist, regular_polygon(3).dist)
        self.assertIsNotNone(space.pi_coefficients)

    def test_not_a_descriptor(self):
        self.assertIsNone(parse_descriptor("space.csv"))
        self.assertIsNone(parse_descriptor("polygon:"))

    def test_malformed(self):
        for text in ("polygon:x", "polygon:3:4", "simplex:3", "polygon:1", "simplex:3:-1"):
            with self.subTest(text=text), self.assertRaises(DomainError):
                parse_descriptor(text)

    def test_read_space_accepts_descriptors(self):
        self.assertEqual(read_space("polygon:4").polygon_order, 4)


class TestSpaceFiles(FileTestCase):
    def test_detect_format(self):
        self.assertIs(detect_format(Path("a.JSON")), FileFormat.JSON)
        self.assertIs(detect_format(Path("a.csv")), FileFormat.CSV)
        self.assertIs(detect_format(Path("a.txt")), FileFormat.CSV)

    def test_round_trip_is_bit_exact(self):
        rng = np.random.default_rng(99)
        space = random_metric(7, rng)
        for name in ("space.csv", "space.json"):
            with self.subTest(name=name):
                path = self.tmp / name
                write_space(space, path)
                self.assertTrue(read_space(path).same_as(space))

    def test_polygon_files_regain_exact_coefficients(self):
        path = self.tmp / "p5.csv"
        write_space(regular_polygon(5), path)
        space = read_space(path)
        self.assertEqual(space.polygon_order, 5)
        self.assertIsNotNone(space.pi_coefficients)
        self.assertEqual(space.labels, ("v1", "v2", "v3", "v4", "v5"))

    def test_explicit_format_overrides_extension(self):
        path = self.tmp / "space.txt"
        write_space(regular_polygon(3), path, FileFormat.JSON)
        self.assertEqual(json.loads(path.read_text(encoding="utf-8"))["labels"], ["v1", "v2", "v3"])

    def test_csv_layout(self):
        text = format_space(regular_polygon(2), FileFormat.CSV)
        self.assertEqual(text.splitlines()[0], "v1,v2")
        self.assertEqual(text.splitlines()[1], f"0.0,{math.pi!r}")

    def test_json_without_labels(self):
        path = self.tmp / "plain.json"
        path.write_text(json.dumps({"dist": [[0, 1], [1, 0]]}), encoding="utf-8")
        self.assertEqual(read_space(path).labels, ("x1", "x2"))

    def test_invalid_matrix(self):
        path = self.tmp / "bad.csv"
        path.write_text("a,b,c\n0,1,3\n1,0,1\n3,1,0\n", encoding="utf-8")
        with self.assertRaises(MetricValidationError) as ctx:
            read_space(path)
        self.assertEqual(ctx.exception.report.axioms(), {Axiom.TRIANGLE})

    def test_pseudo_metric_needs_permission(self):
        path = self.tmp / "pseudo.csv"
        path.write_text("a,b\n0,0\n0,0\n", encoding="utf-8")
        with self.assertRaises(MetricValidationError):
            read_space(path)
        self.assertTrue(read_space(path, allow_pseudo=True).pseudo)

    def test_malformed_files(self):
        cases = {
            "empty.csv": "",
            "words.csv": "a,b\n0,x\nx,0\n",
            "list.json": "[[0, 1], [1, 0]]",
        }
        for name, content in cases.items():
            with self.subTest(name=name):
                path = self.tmp / name
                path.write_text(content, encoding="utf-8")
                with self.assertRaises(DomainError):
                    read_space(path)

    def test_ragged_rows(self):
        path = self.tmp / "ragged.csv"
        path.write_text("a,b\n0,1\n1\n", encoding="utf-8")
        with self.assertRaises(MetricValidationError) as ctx:
            read_space(path)
        self.assertEqual(ctx.exception.report.axioms(), {Axiom.NON_SQUARE})

    def test_missing_file(self):
        with self.assertRaises(OSError):
            read_space(self.tmp / "missing.csv")


class TestCorrespondenceFiles(FileTestCase):
    def test_round_trip(self):
        x, y = regular_polygon(2), regular_polygon(4)
        r = divisible_correspondence(2, 2)
        path = self.tmp / "r.json"
        write_correspondence(r, x, y, path)
        self.assertEqual(read_correspondence(path, x, y), r)
        self.assertEqual(json.loads(path.read_text(encoding="utf-8"))[0], ["v1", "v1"])

    def test_malformed(self):
        x, y = regular_polygon(2), regular_polygon(4)
        cases = {
            "object.json": '{"pairs": []}',
            "triple.json": '[["v1", "v1", "v1"]]',
            "unknown.json": '[["v1", "v9"]]',
        }
        for name, content in cases.items():
            with self.subTest(name=name):
                path = self.tmp / name
                path.write_text(content, encoding="utf-8")
                with self.assertRaises(DomainError):
                    read_correspondence(path, x, y)
