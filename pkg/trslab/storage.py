import csv
import json
from collections.abc import Iterable
from pathlib import Path
from typing import TextIO

from trslab.config import settings
from trslab.models import CosetRow, Report

CSV_COLUMNS = ["check", "params", "status", "counts", "detail", "runtime_ms"]
COSET_COLUMNS = ["syndrome", "leader_weight", "is_deep_hole"]


def _mkdir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


def reports_dir() -> Path:
    return _mkdir(settings.data_dir / "reports")


def fields_dir() -> Path:
    return _mkdir(settings.data_dir / "fields")


def report_json(report: Report, timings: bool = True) -> str:
    """Report as written to disk. Without timings the text depends only on the
    config, so runs with different pool sizes compare equal."""
    exclude: dict = {"config": {"workers"}}
    if not timings:
        exclude["rows"] = {"__all__": {"runtime_ms"}}
    return report.model_dump_json(indent=2, by_alias=True, exclude=exclude)


def write_report(report: Report) -> Path:
    """JSON report at config.output (default data/reports/latest.json), plus the CSV if asked."""
    config = report.config
    path = Path(config.output) if config.output else reports_dir() / "latest.json"
    _mkdir(path.parent)
    path.write_text(report_json(report), encoding="utf-8")
    if config.csv:
        write_csv(report, Path(config.csv))
    return path


def write_csv(report: Report, path: Path) -> Path:
    _mkdir(path.parent)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in report.rows:
            writer.writerow(
                [
                    row.check,
                    json.dumps(row.params, sort_keys=True),
                    row.status,
                    json.dumps(row.counts, sort_keys=True),
                    row.detail,
                    row.runtime_ms,
                ]
            )
    return path


def write_coset_csv(rows: Iterable[CosetRow], fh: TextIO) -> int:
    """One line per syndrome; the syndrome is written the way --syndrome takes it."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(COSET_COLUMNS)
    count = 0
    for row in rows:
        writer.writerow([",".join(map(str, row.syndrome)), row.leader_weight, str(row.is_deep_hole).lower()])
        count += 1
    return count
