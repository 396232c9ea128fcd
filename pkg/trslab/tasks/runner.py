"""Expands a RunConfig into grid points, runs the checks and writes the report."""

import asyncio
import functools
import logging
import multiprocessing
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from trslab import __version__
from trslab.config import ConfigError, settings
from trslab.models import CheckRow, Report, ReportSummary, RunConfig
from trslab.services.field_service import FieldSpec, make_field
from trslab.services.trs_core import TrsParams
from trslab.services.verify_service import CHECKS, CheckContext, resolve_check, run_check
from trslab.storage import write_report

logger = logging.getLogger(__name__)

# Process pool shared by every run in this process.
_executor: ProcessPoolExecutor | None = None
_executor_workers = 0


def _get_executor(workers: int) -> ProcessPoolExecutor:
    global _executor, _executor_workers
    if _executor is None or _executor_workers != workers:
        shutdown_executor()
        # numpy and numba start threads at import, so workers must not be forked from this process
        method = "forkserver" if "forkserver" in multiprocessing.get_all_start_methods() else "spawn"
        _executor = ProcessPoolExecutor(
            max_workers=workers,
            mp_context=multiprocessing.get_context(method),
            initializer=_init_worker,
            initargs=(settings.log_level,),
        )
        _executor_workers = workers
    return _executor


def shutdown_executor():
    global _executor
    if _executor is not None:
        _executor.shutdown(wait=False)
        _executor = None


def _init_worker(log_level: str):
    """Called once when each worker process starts."""
    logging.basicConfig(level=log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


# ============================================================
# Grid expansion
# ============================================================


@dataclass(frozen=True)
class GridPoint:
    check: str
    evaluation: str | None = None
    k: int | None = None
    l: int | None = None
    eta: int | None = None


def resolve_eta(field: FieldSpec, selector: str) -> int:
    """Accepts "1", "xi" or the canonical index of a nonzero element."""
    value = selector.strip().lower()
    if value == "xi":
        return field.xi
    try:
        eta = int(value)
    except ValueError:
        raise ConfigError(f"invalid eta selector {selector!r}") from None
    if not 0 < eta < field.q:
        raise ConfigError(f"eta index {eta} is not a nonzero element of GF({field.q})")
    return eta


def _check_ids(names: list[str]) -> list[str]:
    ids, unknown = [], []
    for name in names:
        try:
            ids.append(resolve_check(name))
        except ValueError:
            unknown.append(name)
    if unknown:
        raise ConfigError(f"unknown check(s): {', '.join(unknown)}")
    return ids


def build_grid(config: RunConfig, field: FieldSpec) -> list[GridPoint]:
    """Grid points in config order. Without an explicit l, checks that only
    apply with l = k - 1 get just that twist position."""
    etas = list(dict.fromkeys(resolve_eta(field, e) for e in config.eta))

    points = []
    for check in _check_ids(config.checks):
        if CHECKS[check].scope == "field":
            points.append(GridPoint(check))
            continue
        for evaluation in config.evaluation:
            n = field.q - 1 if evaluation == "nonzero" else field.q
            ks = range(1, n) if config.k is None else [k for k in config.k if 1 <= k <= n - 1]
            for k in ks:
                if config.l is not None:
                    ls = [l for l in config.l if 0 <= l <= k - 1]
                else:
                    ls = [k - 1] if CHECKS[check].punctured else range(k)
                for l in ls:
                    points.extend(GridPoint(check, evaluation, k, l, eta) for eta in etas)
    if not points:
        raise ConfigError("the parameter grid is empty")
    return points


def _context(config: RunConfig, field: FieldSpec, point: GridPoint) -> CheckContext:
    eval_flag = 0 if point.evaluation in (None, "nonzero") else 1
    entropy = [config.seed, zlib.crc32(point.check.encode()), point.k or 0, point.l or 0, point.eta or 0, eval_flag]
    if point.k is None:
        params, row_params = None, {"q": field.q}
    else:
        params = TrsParams.on(field, point.evaluation, point.k, point.l, point.eta)
        row_params = {"evaluation": point.evaluation, **params.describe()}
    return CheckContext(
        check=point.check,
        field=field,
        params=params,
        row_params=row_params,
        rng=np.random.default_rng(entropy),
        mode=config.mode,
        subset_budget=config.subset_budget,
        coset_budget=config.coset_budget,
        codeword_budget=config.codeword_budget,
        sample_count=config.sample_count,
    )


def _run_check_sync(config: RunConfig, point: GridPoint) -> CheckRow:
    """Run one grid point; safe to call inside a worker process."""
    field = make_field(config.p, config.m)
    start = time.perf_counter()
    row = run_check(point.check, _context(config, field, point))
    row.runtime_ms = round(1000 * (time.perf_counter() - start), 3)
    return row


# ============================================================
# Dispatch and reporting
# ============================================================


def _log_progress(done: int, total: int, row: CheckRow):
    logger.info("[%d/%d] %s %s: %s in %.1f ms", done, total, row.check, row.params, row.status, row.runtime_ms)


async def _dispatch(config: RunConfig, points: list[GridPoint], workers: int) -> list[CheckRow]:
    loop = asyncio.get_running_loop()
    executor = _get_executor(workers)
    done = 0

    async def one(point: GridPoint) -> CheckRow:
        nonlocal done
        row = await loop.run_in_executor(executor, functools.partial(_run_check_sync, config, point))
        done += 1
        _log_progress(done, len(points), row)
        return row

    return list(await asyncio.gather(*(one(point) for point in points)))


def summarize(rows: list[CheckRow]) -> ReportSummary:
    summary = ReportSummary(total=len(rows))
    for row in rows:
        if row.status == "pass":
            summary.passed += 1
        elif row.status == "fail":
            summary.failed += 1
        elif row.status == "vacuous":
            summary.vacuous += 1
        else:
            summary.sampled_consistent += 1
    return summary


def run(config: RunConfig) -> Report:
    """Run every requested check over the grid; rows come back in grid order."""
    field = make_field(config.p, config.m)
    points = build_grid(config, field)
    workers = config.workers or settings.workers
    logger.info("%d grid points over GF(%d) on %d worker(s)", len(points), field.q, workers)

    if workers <= 1 or len(points) == 1:
        rows = []
        for i, point in enumerate(points, start=1):
            rows.append(_run_check_sync(config, point))
            _log_progress(i, len(points), rows[-1])
    else:
        rows = asyncio.run(_dispatch(config, points, workers))

    summary = summarize(rows)
    logger.info("run finished: %d passed, %d failed", summary.passed, summary.failed)
    report = Report(tool_version=__version__, config=config, rows=rows, summary=summary)
    write_report(report)
    return report
