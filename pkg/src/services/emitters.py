"""Byte-stable CSV and JSON writers for RunRecord."""

import csv
import io
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, TextIO, Union

from src.services.schemas import UNDEFINED, Cell, RunRecord
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

PathLike = Union[str, Path]


def format_cell(value: Cell) -> str:
    if value is None:
        return UNDEFINED
    if isinstance(value, bool):
        raise TypeError("boolean cells are not part of the schema")
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def _csv_text(columns: List[str], rows: List[Dict[str, Cell]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row[name]) for name in columns])
    return buffer.getvalue()


def render_csv(record: RunRecord) -> str:
    return _csv_text(record.columns, record.points)


def render_summary_csv(record: RunRecord) -> str:
    return _csv_text(list(record.summary), [record.summary])


def render_json(record: RunRecord) -> str:
    payload = record.model_dump(mode="json")
    payload["points"] = [{k: _json_cell(v) for k, v in row.items()} for row in payload["points"]]
    payload["summary"] = {k: _json_cell(v) for k, v in payload["summary"].items()}
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _json_cell(value: Cell):
    return UNDEFINED if value is None else value


def summary_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}_summary{path.suffix}")


def _write(text: str, path: Optional[PathLike], stdout: Optional[TextIO]) -> None:
    if path is None:
        (stdout or sys.stdout).write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def emit_csv(
    record: RunRecord,
    path: Optional[PathLike] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> None:
    """Point table to ``path`` and the summary row to its ``_summary`` sibling.

    Without a path the table goes to stdout and the summary to stderr, so stdout
    holds exactly one CSV table.
    """

    _write(render_csv(record), path, stdout)
    if record.summary:
        if path is None:
            _write(render_summary_csv(record), None, stderr or sys.stderr)
        else:
            _write(render_summary_csv(record), summary_path(path), None)
    logger.info("Wrote %d CSV rows to %s", len(record.points), path or "stdout")


def emit_json(record: RunRecord, path: Optional[PathLike] = None, stdout: Optional[TextIO] = None) -> None:
    _write(render_json(record), path, stdout)
    logger.info("Wrote JSON record to %s", path or "stdout")


def load_json(path: PathLike) -> RunRecord:
    with open(path, encoding="utf-8") as handle:
        return RunRecord.model_validate(json.load(handle))
