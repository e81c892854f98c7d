"""JSON and CSV codecs for functions, tree metrics and reports.

Rationals are written as reduced "p/q" strings, never as floats. Parser errors name
the source and the position of the offending entry.
"""

import csv
import io
import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from .core_tree import DiscreteFunction, PLFunction
from .embedding import TreeMetric
from .errors import InputFormatError, InvariantError, TreeMetricError
from .types import (
    BreakpointDoc,
    ConvergenceReport,
    DiscreteFunctionDoc,
    PLFunctionDoc,
    StageRecord,
    parse_rational,
)
from .utils.file_ops import ensure_dir, load_json, load_text_rows, save_json
from .utils.validators import validate_file_exists

CONVERGENCE_COLUMNS = ["eps", "d_X", "eps_d_X", "d_D", "error"]
STAGE_COLUMNS = [
    "stage",
    "eps",
    "pair",
    "d_S",
    "d_D_discretized",
    "eps_dX",
    "err_vs_D",
    "err_vs_S",
    "bound",
]


def format_float(value: float | None, digits: int = 17) -> str:
    return "" if value is None else f"{value:.{digits}g}"


def _location(loc: Sequence[Any]) -> str:
    text = ""
    for part in loc:
        text += f"[{part}]" if isinstance(part, int) else (f".{part}" if text else str(part))
    return text or "document"


def _validation_message(source: str, error: ValidationError) -> str:
    first = error.errors()[0]
    return f"{source}: {_location(first['loc'])}: {first['msg']}"


def pl_function_to_doc(f: PLFunction) -> dict[str, Any]:
    doc = PLFunctionDoc(breakpoints=[BreakpointDoc(t=t, v=v) for t, v in f.breakpoints])
    return doc.model_dump(mode="json")


def discrete_function_to_doc(g: DiscreteFunction) -> dict[str, Any]:
    doc = DiscreteFunctionDoc(rho=g.rho, support=[BreakpointDoc(t=t, v=v) for t, v in g.support])
    return doc.model_dump(mode="json")


def parse_pl_function(data: Any, source: str = "<input>") -> PLFunction:
    """Validate a PLFunction document and build the function."""
    try:
        doc = PLFunctionDoc.model_validate(data)
    except ValidationError as e:
        raise InputFormatError(_validation_message(source, e)) from e
    try:
        return PLFunction(tuple((point.t, point.v) for point in doc.breakpoints))
    except InvariantError as e:
        where = f"breakpoints[{e.position}]" if e.position is not None else "breakpoints"
        raise InputFormatError(f"{source}: {where}: {_strip_position(e)}") from e


def parse_discrete_function(data: Any, source: str = "<input>") -> DiscreteFunction:
    """Validate a DiscreteFunction document and build the function."""
    try:
        doc = DiscreteFunctionDoc.model_validate(data)
    except ValidationError as e:
        raise InputFormatError(_validation_message(source, e)) from e
    try:
        return DiscreteFunction(doc.rho, tuple((point.t, point.v) for point in doc.support))
    except InvariantError as e:
        where = f"support[{e.position}]" if e.position is not None else "rho"
        raise InputFormatError(f"{source}: {where}: {_strip_position(e)}") from e


def _strip_position(error: InvariantError) -> str:
    text = str(error)
    prefix = f"[{error.position}]: "
    return text[len(prefix) :] if error.position is not None and text.startswith(prefix) else text


def _read_json(path: Path) -> Any:
    validate_file_exists(path)
    try:
        return load_json(path)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from e


def load_pl_function(path: Path) -> PLFunction:
    return parse_pl_function(_read_json(path), str(path))


def load_discrete_function(path: Path) -> DiscreteFunction:
    return parse_discrete_function(_read_json(path), str(path))


def save_pl_function(f: PLFunction, path: Path) -> None:
    save_json(pl_function_to_doc(f), path)


def save_discrete_function(g: DiscreteFunction, path: Path) -> None:
    save_json(discrete_function_to_doc(g), path)


def parse_tree_metric(rows: list[list[str]], source: str = "<input>") -> TreeMetric:
    """Build a TreeMetric from CSV cells; a first row of labels is skipped."""
    if rows and rows[0] and not _is_rational(rows[0][0]):
        rows = rows[1:]
    values = []
    for i, row in enumerate(rows):
        parsed = []
        for j, cell in enumerate(row):
            try:
                parsed.append(parse_rational(cell))
            except ValueError as e:
                raise InputFormatError(f"{source}: row {i + 1}, column {j + 1}: {e}") from e
        values.append(parsed)
    try:
        return TreeMetric.from_rows(values)
    except TreeMetricError as e:
        raise InputFormatError(f"{source}: {e}") from e


def _is_rational(cell: str) -> bool:
    try:
        parse_rational(cell)
    except ValueError:
        return False
    return True


def load_tree_metric(path: Path) -> TreeMetric:
    validate_file_exists(path)
    return parse_tree_metric(load_text_rows(path), str(path))


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def convergence_csv(report: ConvergenceReport, digits: int = 17) -> str:
    return _csv_text(
        CONVERGENCE_COLUMNS,
        [
            [format_float(value, digits) for value in (r.eps, r.d_x, r.eps_d_x, r.d_d, r.error)]
            for r in report.rows
        ],
    )


def stages_csv(records: Sequence[StageRecord], digits: int = 17) -> str:
    rows = []
    for record in records:
        for pair in record.pairs:
            rows.append(
                [
                    str(record.stage),
                    format_float(record.eps, digits),
                    f"{pair.pair[0]}-{pair.pair[1]}",
                    str(pair.d_s),
                    str(pair.d_d),
                    format_float(pair.eps_d_x, digits),
                    format_float(pair.err_vs_d, digits),
                    format_float(pair.err_vs_s, digits),
                    str(record.bound),
                ]
            )
    return _csv_text(STAGE_COLUMNS, rows)


def write_text(text: str, path: Path) -> None:
    ensure_dir(path.parent)
    path.write_text(text)
