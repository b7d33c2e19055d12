"""Collecting, cross-checking and rendering the results of one command-line run."""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field
from typing import Any

from ghdist.metric_core import EPS_METRIC
from ghdist.types import BoundKind, FileFormat, GHResult, Method

NO_VALUE = "—"


def format_number(value: float | None, digits: int = 12) -> str:
    """Render a decimal with the given number of significant digits."""
    if value is None:
        return NO_VALUE
    return f"{value:.{digits}g}"


def format_result(result: GHResult, digits: int = 12) -> str:
    """Render a value exactly ("π/6") when known, otherwise as a decimal."""
    if result.exact is not None:
        return str(result.exact)
    return format_number(result.value, digits)


@dataclass(frozen=True)
class CrossCheck:
    """The verdict of comparing two methods on the same pair of spaces.

    Attributes:
        method_a: The first method.
        method_b: The second method.
        discrepancy: The absolute difference of the two values.
        consistent: Whether the two values are compatible given their bound kinds.
    """

    method_a: Method
    method_b: Method
    discrepancy: float
    consistent: bool

    def to_dict(self) -> dict[str, Any]:
        """The verdict in the JSON schema."""
        return {
            "method_a": str(self.method_a),
            "method_b": str(self.method_b),
            "discrepancy": self.discrepancy,
            "consistent": self.consistent,
        }


def cross_check(a: GHResult, b: GHResult, tolerance: float = EPS_METRIC) -> CrossCheck:
    """Compare two results according to what their bound kinds promise.

    Two exact values must agree within tolerance. A lower bound must not exceed an exact value or an
    upper bound, and an exact value must not exceed an upper bound. Two bounds of the same kind are
    always compatible.
    """
    discrepancy = abs(a.value - b.value)
    kinds = (a.bound_kind, b.bound_kind)
    if kinds == (BoundKind.EXACT, BoundKind.EXACT):
        consistent = discrepancy <= tolerance
    elif a.bound_kind == b.bound_kind:
        consistent = True
    else:
        low, high = sorted((a, b), key=lambda r: _bound_rank(r.bound_kind))
        consistent = low.value <= high.value + tolerance
    return CrossCheck(a.method, b.method, discrepancy, consistent)


def _bound_rank(kind: BoundKind) -> int:
    return {BoundKind.LOWER: 0, BoundKind.EXACT: 1, BoundKind.UPPER: 2}[kind]


@dataclass
class RunReport:
    """Everything one `gh` invocation computed.

    Attributes:
        inputs: The descriptors or paths of the two spaces.
        results: The results, in the order they were computed.
        timing: The wall-clock seconds of every result.
        witnesses: The rendered witness of every result (label pairs or blocks), when requested.
        skipped: Methods that did not apply, with the reason.
        agreement: Pairwise cross-check verdicts.
    """

    inputs: list[str]
    results: list[GHResult] = field(default_factory=list)
    timing: list[float] = field(default_factory=list)
    witnesses: list[dict[str, Any] | None] = field(default_factory=list)
    skipped: dict[str, str] = field(default_factory=dict)
    agreement: list[CrossCheck] = field(default_factory=list)

    def add(
        self, result: GHResult, seconds: float, witness: dict[str, Any] | None = None
    ) -> None:
        """Record one result."""
        self.results.append(result)
        self.timing.append(seconds)
        self.witnesses.append(witness)

    def skip(self, method: Method, reason: str) -> None:
        """Record a method that does not apply."""
        self.skipped[str(method)] = reason

    def cross_check(self, tolerance: float = EPS_METRIC) -> list[CrossCheck]:
        """Compare every pair of results and store the verdicts."""
        self.agreement = [
            cross_check(a, b, tolerance) for a, b in itertools.combinations(self.results, 2)
        ]
        return self.agreement

    @property
    def consistent(self) -> bool:
        """Whether every cross-check passed."""
        return all(check.consistent for check in self.agreement)

    @property
    def exhausted(self) -> bool:
        """Whether any search ran out of budget."""
        return any(result.bound_kind is BoundKind.UPPER for result in self.results)

    def to_dict(self, digits: int = 12) -> dict[str, Any]:
        """The report in the JSON schema."""
        rows = []
        for result, seconds, witness in zip(
            self.results, self.timing, self.witnesses, strict=True
        ):
            row: dict[str, Any] = {
                "method": str(result.method),
                "bound_kind": str(result.bound_kind),
                "value": result.value,
                "display": format_result(result, digits),
                "exact": str(result.exact) if result.exact is not None else None,
                "lower_bound": result.lower_bound,
                "nodes": result.nodes,
                "seconds": seconds,
            }
            if witness is not None:
                row["witness"] = witness
            rows.append(row)
        return {
            "inputs": self.inputs,
            "results": rows,
            "skipped": self.skipped,
            "agreement": [check.to_dict() for check in self.agreement],
        }

    def to_json(self, digits: int = 12) -> str:
        """The report as indented JSON."""
        return json.dumps(self.to_dict(digits), indent=2, ensure_ascii=False)

    def to_table(self, digits: int = 12) -> str:
        """The report as a human-readable table."""
        header = ["method", "bound", "value", "decimal", "seconds"]
        body = []
        for result, seconds in zip(self.results, self.timing, strict=True):
            value = format_result(result, digits)
            if result.lower_bound is not None:
                value = f"{format_number(result.lower_bound, digits)} .. {value}"
            body.append([
                str(result.method),
                str(result.bound_kind),
                value,
                format_number(result.value, digits),
                f"{seconds:.3f}",
            ])
        for method, reason in self.skipped.items():
            body.append([method, NO_VALUE, reason, NO_VALUE, NO_VALUE])

        lines = [f"{self.inputs[0]}  vs  {self.inputs[1]}", *_align([header, *body])]
        for result, witness in zip(self.results, self.witnesses, strict=True):
            if witness is not None:
                lines.append(f"witness ({result.method}): {_witness_text(witness)}")
        for check in self.agreement:
            verdict = "pass" if check.consistent else "FAIL"
            lines.append(
                f"{check.method_a} vs {check.method_b}: "
                f"discrepancy {format_number(check.discrepancy, 3)} ({verdict})"
            )
        return "\n".join(lines)


def _witness_text(witness: dict[str, Any]) -> str:
    if "pairs" in witness:
        return " ".join(f"{a}~{b}" for a, b in witness["pairs"])
    return " | ".join("{" + ", ".join(block) + "}" for block in witness["blocks"])


def _align(rows: list[list[str]]) -> list[str]:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return [
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths, strict=True)).rstrip()
        for row in rows
    ]


@dataclass
class DistanceTable:
    """The values p_{n,m} for 2 <= n <= m <= n_max.

    Attributes:
        n_max: The largest polygon size.
        method: The method that filled the cells.
        cells: The rendered value of every (n, m), with NO_VALUE where nothing applies.
    """

    n_max: int
    method: str
    cells: dict[tuple[int, int], str] = field(default_factory=dict)

    def sizes(self) -> range:
        """The polygon sizes along both axes."""
        return range(2, self.n_max + 1)

    def rows(self) -> list[list[str]]:
        """The table as a header row plus one row per n; cells with n > m are blank."""
        header = ["n\\m", *(str(m) for m in self.sizes())]
        body = [
            [str(n), *(self.cells.get((n, m), "") if n <= m else "" for m in self.sizes())]
            for n in self.sizes()
        ]
        return [header, *body]

    def render(self, file_format: FileFormat | None = None) -> str:
        """Render as aligned text, or as CSV or JSON when a file format is given."""
        if file_format is FileFormat.JSON:
            cells = [
                {"n": n, "m": m, "value": value} for (n, m), value in sorted(self.cells.items())
            ]
            return json.dumps(
                {"n_max": self.n_max, "method": self.method, "cells": cells},
                indent=2,
                ensure_ascii=False,
            )
        if file_format is FileFormat.CSV:
            buffer = io.StringIO()
            csv.writer(buffer, lineterminator="\n").writerows(self.rows())
            return buffer.getvalue().rstrip("\n")
        return "\n".join(_align(self.rows()))
