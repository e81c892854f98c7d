"""Command-line interface for tree subcone.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

import json
from collections.abc import Iterator
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import click
from pydantic import ValidationError
from rich.markup import escape
from rich.table import Table

from . import __version__
from .core_tree import (
    DiscreteFunction,
    PLFunction,
    SegregationResult,
    distance,
    distance_discrete,
    geodesic_point,
    geodesic_point_discrete,
    segregation_moment,
    segregation_moment_discrete,
)
from .embedding import TreeMetric, brush, check_tree_metric, verify_embedding
from .errors import OverflowRegimeError, ScheduleExhaustedError, SubconeError
from .homogeneity import homogenize, homogenize_inverse
from .hyperbolic import (
    convergence_report,
    parse_polar_literal,
    polar_distance,
    polar_distance_logdomain,
    witness_distance_oracle,
)
from .selftest import run_selftest
from .serialization import (
    convergence_csv,
    discrete_function_to_doc,
    format_float,
    load_discrete_function,
    load_pl_function,
    load_tree_metric,
    pl_function_to_doc,
    save_discrete_function,
    save_pl_function,
    stages_csv,
    write_text,
)
from .settings import Settings, load_settings
from .types import (
    ConvergenceReport,
    EmbeddingReport,
    EpsilonSchedule,
    SlopeSchedule,
    StageRecord,
    parse_rational,
)
from .utils.file_ops import ensure_dir, save_json
from .utils.logger import console, error, set_level, warn
from .utils.validators import validate_output_dir, validate_stage
from .verification import (
    CauchySpec,
    cauchy_distances,
    demo_chains,
    run_all_stages,
    run_completion,
)

EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2
ORACLE_TOLERANCE = 1e-9


@contextmanager
def exit_codes() -> Iterator[None]:
    """Turn library exceptions into an error message and an exit code."""
    try:
        yield
    except ScheduleExhaustedError as e:
        error(str(e))
        raise click.exceptions.Exit(EXIT_VERIFICATION_FAILED)
    except (FileNotFoundError, SubconeError, ValueError, json.JSONDecodeError) as e:
        error(str(e))
        raise click.exceptions.Exit(EXIT_INPUT_ERROR)


def _emit_function(point: PLFunction | DiscreteFunction, out: Path | None) -> None:
    if out is None:
        if isinstance(point, DiscreteFunction):
            console.print_json(data=discrete_function_to_doc(point))
        else:
            console.print_json(data=pl_function_to_doc(point))
        return
    if isinstance(point, DiscreteFunction):
        save_discrete_function(point, out)
    else:
        save_pl_function(point, out)
    console.print(f"[green]✓[/green] Wrote {escape(str(out))}")


def _print_segregation(result: SegregationResult) -> None:
    console.print(f"segregation: {result.s} ({result.relation})")


@click.group()
@click.option(
    "--settings",
    "settings_path",
    type=click.Path(path_type=Path),
    default=None,
    help="Settings JSON (default: $TREE_SUBCONE_SETTINGS or config/settings.json)",
)
@click.version_option(__version__, prog_name="tree-subcone")
@click.pass_context
def main(ctx: click.Context, settings_path: Path | None) -> None:
    """Functional real trees and their witness points in the hyperbolic plane."""
    try:
        settings = load_settings(settings_path)
    except (FileNotFoundError, ValidationError, json.JSONDecodeError) as e:
        error(str(e))
        raise click.exceptions.Exit(EXIT_INPUT_ERROR)
    set_level(settings.logging.level)
    ctx.obj = settings


@main.command()
@click.option("--a", "path_a", required=True, type=click.Path(path_type=Path), help="First file")
@click.option("--b", "path_b", required=True, type=click.Path(path_type=Path), help="Second file")
@click.option("--discrete", is_flag=True, help="Read DiscreteFunction documents")
@click.pass_obj
def dist(settings: Settings, path_a: Path, path_b: Path, discrete: bool) -> None:
    """Exact distance and moment of segregation of two functions."""
    with exit_codes():
        if discrete:
            g1, g2 = load_discrete_function(path_a), load_discrete_function(path_b)
            value, result = distance_discrete(g1, g2), segregation_moment_discrete(g1, g2)
        else:
            f1, f2 = load_pl_function(path_a), load_pl_function(path_b)
            value, result = distance(f1, f2), segregation_moment(f1, f2)
    console.print(f"distance: {value}")
    console.print(f"decimal: {format_float(float(value), settings.output.float_digits)}")
    _print_segregation(result)


@main.command()
@click.option("--a", "path_a", required=True, type=click.Path(path_type=Path), help="Start")
@click.option("--b", "path_b", required=True, type=click.Path(path_type=Path), help="End")
@click.option("--x", "x_text", required=True, type=str, help="Distance from the start, as p/q")
@click.option("--discrete", is_flag=True, help="Read DiscreteFunction documents")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Output JSON")
def geodesic(path_a: Path, path_b: Path, x_text: str, discrete: bool, out: Path | None) -> None:
    """Point at distance x from a on the geodesic from a to b."""
    with exit_codes():
        x = parse_rational(x_text)
        point: PLFunction | DiscreteFunction
        if discrete:
            point = geodesic_point_discrete(
                load_discrete_function(path_a), load_discrete_function(path_b), x
            )
        else:
            point = geodesic_point(load_pl_function(path_a), load_pl_function(path_b), x)
        _emit_function(point, out)


@main.command()
@click.option("--matrix", required=True, type=click.Path(path_type=Path), help="Tree metric CSV")
@click.option("--out", required=True, type=click.Path(path_type=Path), help="Output directory")
@click.option("--slopes", default=None, type=str, help="Comma separated slopes k_1 < k_2 < ...")
def embed(matrix: Path, out: Path, slopes: str | None) -> None:
    """Brush a finite tree metric into S."""
    with exit_codes():
        metric = load_tree_metric(matrix)
        validate_output_dir(out)
        schedule = SlopeSchedule.parse(slopes) if slopes else SlopeSchedule()
        console.print(f"[blue]Checking tree metric:[/blue] {metric.n} vertices")
        check_tree_metric(metric).raise_if_rejected()
        functions = brush(metric, schedule)
        max_error = verify_embedding(metric, functions)
        ensure_dir(out)
        width = len(str(max(metric.n - 1, 0)))
        for index, function in enumerate(functions):
            save_pl_function(function, out / f"vertex_{index:0{width}d}.json")
        report = EmbeddingReport(
            max_error=max_error,
            n=metric.n,
            schedule=[schedule.slope(m) for m in range(1, metric.n)],
        )
        save_json(report.model_dump(mode="json"), out / "report.json")
    console.print(f"[green]✓[/green] Embedded {metric.n} vertices, max_error {max_error}")
    console.print(f"[blue]Output:[/blue] {escape(str(out))}")
    if max_error != 0:
        raise click.exceptions.Exit(EXIT_VERIFICATION_FAILED)


@main.command(name="homogenize")
@click.option("--base", required=True, type=click.Path(path_type=Path), help="Base function f0")
@click.option("--f", "path_f", required=True, type=click.Path(path_type=Path), help="Function")
@click.option("--inverse", is_flag=True, help="Apply the inverse map")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Output JSON")
def homogenize_command(base: Path, path_f: Path, inverse: bool, out: Path | None) -> None:
    """Move f by the isometry of S that sends the base function to zero."""
    with exit_codes():
        f0, f = load_pl_function(base), load_pl_function(path_f)
        image = homogenize_inverse(f0, f) if inverse else homogenize(f0, f)
        _emit_function(image, out)
    if out is not None and not inverse:
        console.print(f"distance to base: {image.rho}")


@main.command()
@click.option("--p1", required=True, type=str, help='"rho,phi" or "rho,logphi:<sign>,<value>"')
@click.option("--p2", required=True, type=str, help='"rho,phi" or "rho,logphi:<sign>,<value>"')
@click.pass_obj
def hdist(settings: Settings, p1: str, p2: str) -> None:
    """Hyperbolic distance of two points in polar coordinates."""
    digits = settings.output.float_digits
    with exit_codes():
        q1, q2 = parse_polar_literal(p1), parse_polar_literal(p2)
        logdomain = polar_distance_logdomain(q1, q2)
    console.print(f"log-domain: {format_float(logdomain, digits)}")
    try:
        direct = polar_distance(q1, q2, settings.hyperbolic.direct_rho_sum_limit)
    except OverflowRegimeError:
        console.print("direct: out of range")
    else:
        console.print(f"direct: {format_float(direct, digits)}")


def _oracle_deviation(
    gamma1: DiscreteFunction, gamma2: DiscreteFunction, report: ConvergenceReport, dps: int
) -> float:
    deviation = 0.0
    for row in report.rows:
        reference = witness_distance_oracle(gamma1, gamma2, row.eps, dps)
        deviation = max(deviation, abs(row.d_x - reference) / max(1.0, reference))
    return deviation


@main.command(name="verify-asymptotic")
@click.option("--a", "path_a", required=True, type=click.Path(path_type=Path), help="First D file")
@click.option("--b", "path_b", required=True, type=click.Path(path_type=Path), help="Second D file")
@click.option("--eps", "eps_text", default=None, type=str, help='Schedule, e.g. "2^-4:2^-20"')
@click.option("--burn-in", type=int, default=None, help="Rows exempt from the monotonicity check")
@click.option("--oracle", is_flag=True, help="Cross-check d_X against the mpmath oracle")
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None, help="CSV out")
@click.pass_obj
def verify_asymptotic(
    settings: Settings,
    path_a: Path,
    path_b: Path,
    eps_text: str | None,
    burn_in: int | None,
    oracle: bool,
    csv_path: Path | None,
) -> None:
    """Witness-point errors |eps d_X - d_D| along an eps schedule."""
    digits = settings.output.float_digits
    with exit_codes():
        schedule = EpsilonSchedule.parse(eps_text) if eps_text else settings.asymptotic.build()
        burn_in = settings.asymptotic.burn_in if burn_in is None else burn_in
        if burn_in < 0 or len(schedule) <= burn_in + 1:
            raise ValueError(
                f"schedule of {len(schedule)} values is too short for burn-in {burn_in}"
            )
        gamma1, gamma2 = load_discrete_function(path_a), load_discrete_function(path_b)
        console.print(f"[blue]Witness points over {len(schedule)} eps values...[/blue]")
        report = convergence_report(gamma1, gamma2, schedule)
        deviation = (
            _oracle_deviation(gamma1, gamma2, report, settings.hyperbolic.oracle_dps)
            if oracle
            else None
        )
    table = Table(title="Witness convergence")
    for column in ("eps", "d_X", "eps*d_X", "d_D", "error"):
        table.add_column(column, justify="right")
    for row in report.rows:
        table.add_row(
            *(format_float(v, digits) for v in (row.eps, row.d_x, row.eps_d_x, row.d_d, row.error))
        )
    console.print(table)
    if csv_path is not None:
        write_text(convergence_csv(report, digits), csv_path)
        console.print(f"[blue]Output:[/blue] {escape(str(csv_path))}")
    order = report.empirical_order(burn_in)
    if order is None:
        warn("fewer than two non-zero errors after burn-in; no order fitted")
    else:
        console.print(f"empirical order: {order:.3f}")
    if deviation is not None:
        console.print(f"oracle deviation: {format_float(deviation, 3)}")
        if deviation > ORACLE_TOLERANCE:
            error(f"d_X differs from the high-precision oracle by {deviation:.3g}")
            raise click.exceptions.Exit(EXIT_VERIFICATION_FAILED)
    if not report.is_monotone_after(burn_in):
        error(f"errors increase after burn-in {burn_in}")
        raise click.exceptions.Exit(EXIT_VERIFICATION_FAILED)
    console.print("[green]✓[/green] Errors non-increasing after burn-in")


def _print_stages(title: str, records: list[StageRecord], digits: int) -> None:
    table = Table(title=title)
    for column in ("stage", "eps", "pairs", "max error", "bound", "status"):
        table.add_column(column, justify="right")
    for record in records:
        table.add_row(
            str(record.stage),
            format_float(record.eps, digits) or "-",
            str(len(record.pairs)),
            format_float(record.max_error, 6),
            str(record.bound),
            "ok" if record.succeeded else "FAIL",
        )
    console.print(table)


def _finish_stages(records: list[StageRecord], csv_path: Path | None, digits: int) -> None:
    if csv_path is not None:
        write_text(stages_csv(records, digits), csv_path)
        console.print(f"[blue]Output:[/blue] {escape(str(csv_path))}")
    failed = [record.stage for record in records if not record.succeeded]
    if failed:
        error(f"envelope violated at stage {failed[0]}")
        raise click.exceptions.Exit(EXIT_VERIFICATION_FAILED)
    console.print(f"[green]✓[/green] All {len(records)} stages within their bounds")


@main.command(name="verify-subcone")
@click.option(
    "--function",
    "function_paths",
    multiple=True,
    type=click.Path(path_type=Path),
    help="PLFunction file (repeatable)",
)
@click.option("--matrix", type=click.Path(path_type=Path), default=None, help="Tree metric CSV")
@click.option("--max-stage", type=int, default=None, help="Last stage N")
@click.option("--eps", "eps_text", default=None, type=str, help='Schedule, e.g. "2^-1:2^-64"')
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None, help="CSV out")
@click.pass_obj
def verify_subcone(
    settings: Settings,
    function_paths: tuple[Path, ...],
    matrix: Path | None,
    max_stage: int | None,
    eps_text: str | None,
    csv_path: Path | None,
) -> None:
    """Staged discretization of a finite family of S, with the 1/2^(N-1) envelope."""
    if bool(function_paths) == (matrix is not None):
        raise click.UsageError("give either --function (one or more) or --matrix")
    digits = settings.output.float_digits
    with exit_codes():
        max_stage = settings.subcone.max_stage if max_stage is None else max_stage
        validate_stage(max_stage, "max-stage")
        schedule = EpsilonSchedule.parse(eps_text) if eps_text else settings.schedule.build()
        functions: list[PLFunction]
        if matrix is not None:
            metric: TreeMetric = load_tree_metric(matrix)
            functions = brush(metric)
        else:
            functions = [load_pl_function(path) for path in function_paths]
        console.print(f"[blue]Running stages 1..{max_stage} on {len(functions)} functions[/blue]")
        records = run_all_stages(functions, max_stage, schedule)
    _print_stages("Staged discretization", records, digits)
    _finish_stages(records, csv_path, digits)


@main.command(name="cauchy-demo")
@click.option("--max-k", type=int, default=None, help="Largest chain index checked")
@click.option("--max-r", type=int, default=None, help="Last completion stage r")
@click.option("--eps", "eps_text", default=None, type=str, help='Schedule, e.g. "2^-1:2^-64"')
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None, help="CSV out")
@click.pass_obj
def cauchy_demo(
    settings: Settings,
    max_k: int | None,
    max_r: int | None,
    eps_text: str | None,
    csv_path: Path | None,
) -> None:
    """Cauchy chains without a limit in S, and witness points for their limits."""
    digits = settings.output.float_digits
    with exit_codes():
        max_k = settings.cauchy.max_k if max_k is None else max_k
        max_r = settings.cauchy.max_r if max_r is None else max_r
        validate_stage(max_k, "max-k")
        validate_stage(max_r, "max-r")
        schedule = EpsilonSchedule.parse(eps_text) if eps_text else settings.schedule.build()
        chains = demo_chains(settings.cauchy.amplitude)
        spec = CauchySpec(amplitude=settings.cauchy.amplitude)
        mismatches = [
            (k, m)
            for k in range(max_k + 1)
            for m in range(k + 1, max_k + 1)
            if cauchy_distances(spec, k, m) != Fraction(1, 2**k) - Fraction(1, 2**m)
        ]
        pairs = (max_k + 1) * max_k // 2
        records = run_completion(chains, max_r, schedule)
    if mismatches:
        k, m = mismatches[0]
        error(f"d(f_{k}, f_{m}) differs from 2^-{k} - 2^-{m}")
        raise click.exceptions.Exit(EXIT_VERIFICATION_FAILED)
    console.print(
        f"[green]✓[/green] d(f_k, f_m) = 2^-k - 2^-m for all {pairs} pairs k < m <= {max_k}"
    )
    _print_stages("Completion witnesses", records, digits)
    _finish_stages(records, csv_path, digits)


@main.command()
@click.option("--seed", type=int, default=None, help="Seed of the randomized suites")
@click.option("--inject-fault", type=click.Choice(["slopes"]), default=None, hidden=True)
@click.pass_obj
def selftest(settings: Settings, seed: int | None, inject_fault: str | None) -> None:
    """Run the invariant suite with a fixed seed."""
    seed = settings.selftest.seed if seed is None else seed
    slopes = None
    if inject_fault == "slopes":
        slopes = SlopeSchedule.model_construct(slopes=[Fraction(1)] * 64)
    outcomes = run_selftest(seed, slopes)
    table = Table(title=f"Selftest (seed {seed})")
    table.add_column("property")
    table.add_column("cases", justify="right")
    table.add_column("status")
    for outcome in outcomes:
        status = "[green]pass[/green]" if outcome.passed else "[red]FAIL[/red]"
        table.add_row(outcome.name, str(outcome.cases), status)
    console.print(table)
    failures = [outcome for outcome in outcomes if not outcome.passed]
    if failures:
        first = failures[0]
        error(f"property {first.name} failed: {first.detail}")
        raise click.exceptions.Exit(EXIT_VERIFICATION_FAILED)
    console.print(f"[green]✓[/green] All {len(outcomes)} properties passed")


if __name__ == "__main__":
    main()
