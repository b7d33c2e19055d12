# ruff: noqa: T201

"""Command-line front end for computing Gromov-Hausdorff distances between finite metric spaces.

Spaces are given as CSV or JSON distance matrix files, or as descriptors: "polygon:N" for the
vertex set of a regular N-gon with the arc metric, and "simplex:M:LAMBDA" for M points at mutual
distance LAMBDA.

Exit codes: 0 on success, 1 when methods disagree or an unexpected error occurs, 2 for invalid
input, 3 when a search runs out of budget.
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path
from typing import TYPE_CHECKING, Any

import toml
from polykit import PolyLog
from polykit.core import polykit_setup

from ghdist.config_loader import ConfigLoader, GHConfig
from ghdist.gh_exact import (
    Correspondence,
    distortion,
    distortion_pi,
    gh_bruteforce,
    gh_lower_diameter,
)
from ghdist.matrix_files import (
    format_space,
    parse_pi_expression,
    read_correspondence,
    read_space,
    write_correspondence,
    write_space,
)
from ghdist.metric_core import (
    FiniteMetricSpace,
    Partition,
    is_simplex,
    regular_polygon,
    simplex_space,
)
from ghdist.pi_rational import PiRational
from ghdist.polygon_formulas import closed_form, closed_form_result
from ghdist.report import NO_VALUE, DistanceTable, RunReport, format_number
from ghdist.simplex_dist import SimplexSpec, simplex_distance
from ghdist.types import (
    BoundKind,
    BudgetExhaustedError,
    DomainError,
    FileFormat,
    GHResult,
    Method,
    MetricValidationError,
)
from ghdist.ultrametric import gh_lower_ultrametric, quotient

if TYPE_CHECKING:
    from logging import Logger

polykit_setup()

logger = PolyLog.get_logger("ghdist")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3

ALL_METHODS = "all"
TABLE_AUTO = "auto"


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per operation."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML file with [search], [output], [logging]")
    common.add_argument("--budget", type=int, help="search-tree node limit (default 10^9)")
    common.add_argument("--workers", type=int, help="worker processes, 0 for one per core")
    common.add_argument(
        "--check-coverage",
        action="store_true",
        default=None,
        help="verify coverage at every accepted search leaf",
    )
    common.add_argument("--debug", action="store_true", default=None, help="enable debug logging")
    common.add_argument("--out", type=Path, help="write output to a file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="ghdist", description="Gromov-Hausdorff distances between finite metric spaces."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", parents=[common], help="generate a distance matrix")
    gen.add_argument("kind", choices=["polygon", "simplex"])
    gen.add_argument("n", type=int, help="number of points")
    gen.add_argument("--lam", default="pi", help="simplex distance, e.g. 1.5 or 2pi/3")
    gen.add_argument("--format", type=FileFormat, choices=list(FileFormat), default=None)
    gen.add_argument("--prefix", default="v", help="polygon label prefix, v or u")

    check = commands.add_parser("validate", parents=[common], help="check the metric axioms")
    check.add_argument("space")
    check.add_argument("--allow-pseudo", action="store_true", help="permit zero distances")

    gh = commands.add_parser("gh", parents=[common], help="compute d_GH(X, Y)")
    gh.add_argument("x")
    gh.add_argument("y")
    gh.add_argument(
        "--method", choices=[*(str(m) for m in Method), ALL_METHODS], default=str(Method.EXACT)
    )
    gh.add_argument("--witness", action="store_true", help="print the optimal witness")
    gh.add_argument("--json", action="store_true", help="print the machine-readable report")
    gh.add_argument(
        "--save-witness", type=Path, help="write the exact-search correspondence as JSON"
    )

    dis = commands.add_parser("dis", parents=[common], help="distortion of a correspondence")
    dis.add_argument("x")
    dis.add_argument("y")
    dis.add_argument("correspondence", type=Path, help="JSON list of [label, label] pairs")

    ultra = commands.add_parser("ultra", parents=[common], help="print the quotient U(X)")
    ultra.add_argument("space")
    ultra.add_argument("--json", action="store_true", help="print as JSON")

    table = commands.add_parser("table", parents=[common], help="tabulate p_{n,m}")
    table.add_argument("n_max", type=int)
    table.add_argument(
        "--method",
        choices=[str(Method.CLOSED_FORM), str(Method.EXACT), TABLE_AUTO],
        default=str(Method.CLOSED_FORM),
    )
    table.add_argument("--format", type=FileFormat, choices=list(FileFormat), default=None)

    commands.add_parser("config", parents=[common], help="print the effective configuration")
    return parser


def load_config(args: argparse.Namespace) -> GHConfig:
    """Load the config file, if any, and apply the flags on top of it."""
    config = ConfigLoader.load(args.config)
    return config.with_overrides(
        budget=args.budget,
        workers=args.workers,
        check_coverage=args.check_coverage,
        enable_debug=args.debug,
    )


def emit(text: str, out: Path | None) -> None:
    """Print the text, or write it to a file."""
    if out is None:
        print(text)
        return
    out.write_text(text if text.endswith("\n") else f"{text}\n", encoding="utf-8")
    logger.info("Wrote %s.", out)


def witness_dict(
    witness: Correspondence | Partition | None, x: FiniteMetricSpace, y: FiniteMetricSpace
) -> dict[str, Any] | None:
    """Render a witness with point labels: pairs for correspondences, blocks for partitions."""
    if isinstance(witness, Correspondence):
        if (witness.n, witness.m) != (x.size, y.size):
            return {"pairs": [[str(i), str(j)] for i, j in witness.sorted_pairs()]}
        return {"pairs": [list(pair) for pair in witness.label_pairs(x, y)]}
    if isinstance(witness, Partition):
        space = x if x.size == witness.n else y
        if space.size != witness.n:
            return {"blocks": [[str(i) for i in block] for block in witness.blocks()]}
        return {"blocks": [[space.labels[i] for i in block] for block in witness.blocks()]}
    return None


def simplex_side(
    x: FiniteMetricSpace, y: FiniteMetricSpace
) -> tuple[SimplexSpec, FiniteMetricSpace] | None:
    """Find a simplex among the inputs that the partition formula can compare with the other."""
    for simplex, other in ((x, y), (y, x)):
        if 2 <= simplex.size <= other.size and is_simplex(simplex):
            if simplex.pi_coefficients is not None:
                lam = PiRational.from_fraction(simplex.pi_coefficients[0][1])
                return SimplexSpec.from_pi(simplex.size, lam), other
            return SimplexSpec(simplex.size, float(simplex.dist[0, 1])), other
    return None


def run_method(
    method: Method, x: FiniteMetricSpace, y: FiniteMetricSpace, config: GHConfig, logger: Logger
) -> GHResult | str:
    """Run one method, returning its result or the reason it does not apply."""
    if method is Method.EXACT:
        return gh_bruteforce(
            x,
            y,
            budget=config.budget,
            workers=config.resolved_workers,
            check_coverage=config.check_coverage,
            tolerance=config.tolerance,
            logger=logger,
        )
    if method is Method.DIAM_LOWER:
        return gh_lower_diameter(x, y)
    if method is Method.ULTRA_LOWER:
        return gh_lower_ultrametric(x, y, budget=config.budget, logger=logger)
    if method is Method.SIMPLEX:
        if (found := simplex_side(x, y)) is None:
            return "neither input is a simplex no larger than the other"
        spec, other = found
        return simplex_distance(spec, other, tolerance=config.tolerance, logger=logger)

    n, m = x.polygon_order, y.polygon_order
    if n is None or m is None:
        return "inputs are not both regular polygons"
    result = closed_form_result(n, m)
    return result if result is not None else "no closed form"


def cmd_gen(args: argparse.Namespace) -> int:
    """Write the distance matrix of a generated space."""
    if args.kind == "polygon":
        space = regular_polygon(args.n, prefix=args.prefix)
    else:
        space = simplex_space(args.n, parse_pi_expression(args.lam))

    if args.out is not None:
        write_space(space, args.out, args.format)
        logger.info("Wrote %s-point %s to %s.", space.size, args.kind, args.out)
    else:
        print(format_space(space, args.format or FileFormat.CSV), end="")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    """Report whether a matrix satisfies the metric axioms."""
    try:
        space = read_space(args.space, allow_pseudo=args.allow_pseudo)
    except MetricValidationError as e:
        emit(e.report.summary(), args.out)
        return EXIT_INVALID

    kind = "pseudometric" if args.allow_pseudo else "metric"
    polygon = f" (regular polygon P_{space.polygon_order})" if space.polygon_order else ""
    emit(f"valid {kind} on {space.size} point{'s' if space.size != 1 else ''}{polygon}", args.out)
    return EXIT_OK


def cmd_gh(args: argparse.Namespace, config: GHConfig) -> int:
    """Compute the distance between two spaces by one or all methods."""
    x, y = read_space(args.x), read_space(args.y)
    methods = list(Method) if args.method == ALL_METHODS else [Method(args.method)]

    report = RunReport([args.x, args.y])
    budget_hit = False
    for method in methods:
        start = time.perf_counter()
        try:
            outcome = run_method(method, x, y, config, logger)
        except BudgetExhaustedError as e:
            logger.warning("%s ran out of budget: %s", method, e)
            report.skip(method, "budget exhausted")
            budget_hit = True
            continue
        if isinstance(outcome, str):
            report.skip(method, outcome)
            continue

        seconds = time.perf_counter() - start
        found = outcome.witness
        if args.save_witness and method is Method.EXACT and isinstance(found, Correspondence):
            write_correspondence(found, x, y, args.save_witness)
            logger.info("Saved the correspondence to %s.", args.save_witness)
        witness = witness_dict(outcome.witness, x, y) if args.witness else None
        report.add(outcome, seconds, witness)
        logger.info(
            "%s: %s (%s) in %.3fs.",
            method,
            format_number(outcome.value),
            outcome.bound_kind,
            seconds,
        )

    if len(report.results) > 1:
        report.cross_check(config.tolerance)
        if not report.consistent:
            logger.error("Methods disagree beyond %s.", config.tolerance)

    digits = config.significant_digits
    emit(report.to_json(digits) if args.json else report.to_table(digits), args.out)
    if budget_hit or report.exhausted:
        return EXIT_BUDGET
    return EXIT_OK if report.consistent else EXIT_ERROR


def cmd_dis(args: argparse.Namespace) -> int:
    """Evaluate the distortion of a given correspondence."""
    x, y = read_space(args.x), read_space(args.y)
    r = read_correspondence(args.correspondence, x, y)
    value = distortion(r, x, y)

    lines = [f"dis R = {format_number(value)}", f"d_GH <= {format_number(value / 2)}"]
    if x.pi_coefficients is not None and y.pi_coefficients is not None:
        exact = distortion_pi(r, x, y)
        lines = [f"dis R = {exact} = {format_number(value)}", f"d_GH <= {exact / 2}"]
    emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_ultra(args: argparse.Namespace) -> int:
    """Print the quotient U(X) and which points each class merges."""
    x = read_space(args.space, allow_pseudo=True)
    q = quotient(x)

    if args.json:
        data = {
            "labels": list(q.space.labels),
            "dist": q.space.dist.tolist(),
            "class_of": {x.labels[i]: q.space.labels[c] for i, c in enumerate(q.class_of)},
        }
        emit(json.dumps(data, indent=2), args.out)
        return EXIT_OK

    lines = [f"{x.labels[i]} -> {q.space.labels[c]}" for i, c in enumerate(q.class_of)]
    lines.append(format_space(q.space, FileFormat.CSV).rstrip("\n"))
    emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_table(args: argparse.Namespace, config: GHConfig) -> int:
    """Tabulate p_{n,m} for 2 <= n <= m <= n_max."""
    if args.n_max < 2:
        msg = f"The table needs n_max >= 2, got {args.n_max}."
        raise DomainError(msg)

    table = DistanceTable(args.n_max, args.method)
    budget_hit = False
    for n in table.sizes():
        for m in range(n, args.n_max + 1):
            if args.method != str(Method.EXACT):
                answer = closed_form(n, m)
                if answer.applicable:
                    table.cells[n, m] = str(answer.value)
                    continue
                if args.method == str(Method.CLOSED_FORM):
                    table.cells[n, m] = NO_VALUE
                    continue

            result = gh_bruteforce(
                regular_polygon(n),
                regular_polygon(m),
                budget=config.budget,
                workers=config.resolved_workers,
                tolerance=config.tolerance,
                logger=logger,
            )
            if result.bound_kind is BoundKind.EXACT:
                table.cells[n, m] = format_number(result.value, config.significant_digits)
            else:
                table.cells[n, m] = NO_VALUE
                budget_hit = True
            logger.debug("p_{%s,%s} = %s.", n, m, table.cells[n, m])

    emit(table.render(args.format), args.out)
    return EXIT_BUDGET if budget_hit else EXIT_OK


def cmd_config(args: argparse.Namespace, config: GHConfig) -> int:
    """Print or save the effective configuration."""
    if args.out is not None:
        ConfigLoader.save(config, args.out)
        logger.info("Saved configuration to %s.", args.out)
    else:
        sections = {
            section: {k: getattr(config, k) for k in keys}
            for section, keys in GHConfig.config_structure.items()
        }
        print(toml.dumps(sections), end="")
    return EXIT_OK


def run(argv: list[str] | None = None) -> int:
    """Parse the arguments and dispatch to the subcommand, returning the exit code."""
    args = build_parser().parse_args(argv)
    config = load_config(args)
    ConfigLoader.update_logger_level(logger, config.enable_debug)

    if args.command == "gen":
        return cmd_gen(args)
    if args.command == "validate":
        return cmd_validate(args)
    if args.command == "gh":
        return cmd_gh(args, config)
    if args.command == "dis":
        return cmd_dis(args)
    if args.command == "ultra":
        return cmd_ultra(args)
    if args.command == "table":
        return cmd_table(args, config)
    return cmd_config(args, config)


def main(argv: list[str] | None = None) -> int:
    """Main function to run the command-line tool."""
    try:
        return run(argv)
    except (MetricValidationError, DomainError) as e:
        logger.error("Invalid input: %s", e)
        return EXIT_INVALID
    except (OSError, json.JSONDecodeError, toml.TomlDecodeError) as e:
        logger.error("Could not read or write a file: %s", e)
        return EXIT_INVALID
    except BudgetExhaustedError as e:
        logger.error("Search budget exhausted: %s", e)
        return EXIT_BUDGET
    except Exception as e:
        logger.error("An error occurred while running the command: %s", e)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
