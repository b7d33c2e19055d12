"""Reading and writing distance matrices and correspondences.

Two matrix formats are supported:

- CSV: the first row holds the point labels, every following row one row of the matrix.
- JSON: an object {"labels": [...], "dist": [[...], ...]}.

Floats are written with their shortest round-trip representation, so reading back a written space
reproduces the matrix bit for bit. Every reader validates what it loads.

Anywhere a space is expected, a descriptor can stand in for a file: "polygon:N" for P_N and
"simplex:M:LAMBDA" for LAMBDA * Delta_M, where LAMBDA is a number or a multiple of pi such as "pi",
"2pi/3" or "π/4".
"""

from __future__ import annotations

import csv
import json
import re
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Any

from ghdist.gh_exact import Correspondence
from ghdist.metric_core import FiniteMetricSpace, recognize_polygon, regular_polygon, simplex_space
from ghdist.pi_rational import PiRational
from ghdist.types import DomainError, FileFormat

if TYPE_CHECKING:
    from collections.abc import Sequence

PI_PATTERN = re.compile(r"^(?P<num>\d+)?\s*\*?\s*(?:pi|π)\s*(?:/\s*(?P<den>\d+))?$", re.IGNORECASE)


def parse_pi_expression(text: str) -> float:
    """Parse a plain number or a rational multiple of pi ("pi", "2pi/3", "π/4").

    Raises:
        DomainError: If the text is neither.
    """
    text = text.strip()
    if match := PI_PATTERN.match(text):
        num = int(match["num"] or 1)
        den = int(match["den"] or 1)
        if den == 0:
            msg = f"Zero denominator in {text!r}."
            raise DomainError(msg)
        return PiRational.from_fraction(Fraction(num, den)).value()
    try:
        return float(text)
    except ValueError:
        msg = f"Cannot read {text!r} as a number or a multiple of pi."
        raise DomainError(msg) from None


def parse_descriptor(text: str, prefix: str = "v") -> FiniteMetricSpace | None:
    """Build the space named by a "polygon:N" or "simplex:M:LAMBDA" descriptor.

    Returns:
        The space, or None when the text is not a descriptor.

    Raises:
        DomainError: If the descriptor is malformed or its parameters are out of range.
    """
    kind, _, rest = text.partition(":")
    if kind not in {"polygon", "simplex"} or not rest:
        return None

    parts = rest.split(":")
    try:
        if kind == "polygon" and len(parts) == 1:
            return regular_polygon(int(parts[0]), prefix=prefix)
        if kind == "simplex" and len(parts) == 2:
            return simplex_space(int(parts[0]), parse_pi_expression(parts[1]))
    except ValueError as e:
        if isinstance(e, DomainError):
            raise
        msg = f"Malformed descriptor {text!r}: {e}"
        raise DomainError(msg) from e

    msg = f"Malformed descriptor {text!r}; expected polygon:N or simplex:M:LAMBDA."
    raise DomainError(msg)


def detect_format(path: Path) -> FileFormat:
    """Pick the file format from the extension, defaulting to CSV."""
    return FileFormat.JSON if path.suffix.lower() == ".json" else FileFormat.CSV


def read_space(source: str | Path, allow_pseudo: bool = False) -> FiniteMetricSpace:
    """Load a space from a descriptor or a CSV/JSON file and validate it.

    Spaces that turn out to be regular polygons regain their exact coefficients.

    Raises:
        DomainError: If a descriptor is malformed or the file content has the wrong shape.
        MetricValidationError: If the matrix violates a metric axiom.
        OSError: If the file cannot be read.
    """
    if isinstance(source, str) and (space := parse_descriptor(source)) is not None:
        return space

    path = Path(source)
    with path.open(encoding="utf-8", newline="") as f:
        if detect_format(path) is FileFormat.JSON:
            labels, dist = _parse_json(json.load(f), path)
        else:
            labels, dist = _parse_csv(list(csv.reader(f)), path)

    space = FiniteMetricSpace.from_matrix(dist, labels, allow_pseudo=allow_pseudo)
    return recognize_polygon(space)


def _parse_json(data: Any, path: Path) -> tuple[list[str], list[list[float]]]:
    if not isinstance(data, dict) or "dist" not in data:
        msg = f"{path} must hold an object with a 'dist' matrix."
        raise DomainError(msg)
    dist = data["dist"]
    labels = data.get("labels") or [f"x{i + 1}" for i in range(len(dist))]
    return [str(label) for label in labels], dist


def _parse_csv(rows: list[list[str]], path: Path) -> tuple[list[str], list[list[float]]]:
    rows = [row for row in rows if row]
    if not rows:
        msg = f"{path} is empty."
        raise DomainError(msg)
    labels = [label.strip() for label in rows[0]]
    try:
        dist = [[float(cell) for cell in row] for row in rows[1:]]
    except ValueError as e:
        msg = f"{path} holds a non-numeric entry: {e}"
        raise DomainError(msg) from e
    return labels, dist


def write_space(
    space: FiniteMetricSpace, path: Path, file_format: FileFormat | None = None
) -> None:
    """Write a space as CSV or JSON, picking the format from the extension unless given.

    Raises:
        OSError: If the file cannot be written.
    """
    file_format = file_format or detect_format(path)
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write(format_space(space, file_format))


def format_space(space: FiniteMetricSpace, file_format: FileFormat) -> str:
    """Render a space in the given file format."""
    rows = space.dist.tolist()
    if file_format is FileFormat.JSON:
        return json.dumps({"labels": list(space.labels), "dist": rows}, indent=2) + "\n"

    lines = [",".join(space.labels)]
    lines.extend(",".join(repr(value) for value in row) for row in rows)
    return "\n".join(lines) + "\n"


def read_correspondence(
    path: Path, x: FiniteMetricSpace, y: FiniteMetricSpace
) -> Correspondence:
    """Load a correspondence stored as a JSON list of [label in X, label in Y] pairs.

    Raises:
        DomainError: If the content is not a list of label pairs or names an unknown label.
    """
    with path.open(encoding="utf-8") as f:
        data = json.load(f)

    if not isinstance(data, list) or not all(_is_label_pair(item) for item in data):
        msg = f"{path} must hold a list of [label, label] pairs."
        raise DomainError(msg)
    return Correspondence.from_label_pairs([(str(a), str(b)) for a, b in data], x, y)


def _is_label_pair(item: Any) -> bool:
    return isinstance(item, list | tuple) and len(item) == 2


def write_correspondence(
    r: Correspondence, x: FiniteMetricSpace, y: FiniteMetricSpace, path: Path
) -> None:
    """Write a correspondence as a JSON list of label pairs, in index order."""
    pairs: Sequence[tuple[str, str]] = r.label_pairs(x, y)
    with path.open("w", encoding="utf-8") as f:
        json.dump([list(pair) for pair in pairs], f, indent=2)
        f.write("\n")
