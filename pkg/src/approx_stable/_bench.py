"""Benchmark sweeps: deferred acceptance over seeded random markets."""

import csv
import logging
import math
import os
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import Future, ProcessPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from dataclasses import dataclass, field
from typing import Literal, TextIO

import psutil

from ._config import TOLERANCE
from ._gda import certified_alpha, run_gda
from ._instances import RandomMarketParams, gen_random
from ._stability import min_alpha

logger = logging.getLogger(__name__)

type RowStatus = Literal["ok", "violation", "timeout", "error"]

CSV_COLUMNS = (
    "instance",
    "algorithm",
    "certified_alpha",
    "achieved_alpha",
    "runtime_s",
    "status",
)


@dataclass(frozen=True)
class BenchCell:
    """A (utility class, constraint class, algorithm) combination to sweep."""

    name: str
    utility_class: str
    constraint_class: str
    algorithm: str
    params: RandomMarketParams = field(default_factory=RandomMarketParams)


BENCH_CELLS: tuple[BenchCell, ...] = (
    *(
        BenchCell(
            f"card-{k}matroid",
            "cardinality",
            "matroid",
            "greedy_matroid",
            RandomMarketParams(k=k),
        )
        for k in (1, 2, 3)
    ),
    *(
        BenchCell(
            f"{prefix}-{rho}knapsack",
            utility,
            "knapsack",
            "greedy_knapsack",
            RandomMarketParams(rho=rho),
        )
        for prefix, utility in (("card", "cardinality"), ("add", "additive"))
        for rho in (1, 2)
    ),
    BenchCell("add-1matroid", "additive", "matroid", "offline_exact"),
)


@dataclass(frozen=True)
class BenchRow:
    """One CSV row.

    ``achieved_alpha`` is None when the run timed out or failed.
    """

    instance: str
    algorithm: str
    certified_alpha: float
    achieved_alpha: float | None
    runtime_s: float
    status: RowStatus

    def as_csv(self) -> list[str]:
        """Formats the row for csv.writer."""
        achieved = "" if self.achieved_alpha is None else repr(self.achieved_alpha)
        return [
            self.instance,
            self.algorithm,
            repr(self.certified_alpha),
            achieved,
            f"{self.runtime_s:.6f}",
            self.status,
        ]


def worker_count(requested: int | None = None) -> int:
    """Returns the pool size: ``requested`` or the number of physical cores."""
    if requested is not None:
        if requested < 1:
            msg = f"workers must be >= 1, got {requested}"
            raise ValueError(msg)
        return requested
    return psutil.cpu_count(logical=False) or os.process_cpu_count() or 1


def run_instance(
    cell: BenchCell, seed: int, n: int, m: int, tie_break: str = "fifo"
) -> BenchRow:
    """Generates one market, runs deferred acceptance and measures min_alpha.

    The row status is "violation" when the achieved factor exceeds the
    certified one.
    """
    instance = f"{cell.name}/seed{seed}"
    start = time.perf_counter()
    market = gen_random(
        seed, n, m, cell.utility_class, cell.constraint_class, cell.params
    )
    certified = certified_alpha(market, cell.algorithm)
    matching, _ = run_gda(market, cell.algorithm, tie_break)
    achieved = min_alpha(market, matching)
    runtime = time.perf_counter() - start
    status: RowStatus = (
        "violation" if achieved > certified * (1 + TOLERANCE) + TOLERANCE else "ok"
    )
    return BenchRow(instance, cell.algorithm, certified, achieved, runtime, status)


def _collect(
    future: "Future[BenchRow]", cell: BenchCell, seed: int, timeout: float
) -> BenchRow:
    """Waits for one run and turns timeouts and failures into rows."""
    instance = f"{cell.name}/seed{seed}"
    start = time.perf_counter()
    try:
        return future.result(timeout=timeout)
    except FutureTimeoutError:
        future.cancel()
        logger.warning("%s timed out after %.1fs", instance, timeout)
        status: RowStatus = "timeout"
    except (ValueError, RuntimeError) as e:
        logger.warning("%s failed: %s", instance, e)
        status = "error"
    return BenchRow(
        instance, cell.algorithm, math.nan, None, time.perf_counter() - start, status
    )


def _stop_workers(pids: Iterable[int], grace: float = 1.0) -> None:
    """Terminates pool workers still running a timed-out instance."""
    procs: list[psutil.Process] = []
    for pid in pids:
        try:
            proc = psutil.Process(pid)
            proc.terminate()
        except psutil.NoSuchProcess:
            continue
        procs.append(proc)
    _, alive = psutil.wait_procs(procs, timeout=grace)
    for proc in alive:
        logger.warning("Killing unresponsive worker %d", proc.pid)
        proc.kill()


def run_bench(
    cells: Sequence[BenchCell],
    seeds: Iterable[int],
    n: int = 6,
    m: int = 3,
    *,
    workers: int | None = None,
    timeout: float = 60.0,
    tie_break: str = "fifo",
) -> list[BenchRow]:
    """Runs every (cell, seed) pair and returns the rows in that order.

    Runs fan out over a process pool, even with one worker. A run whose
    result is not ready within ``timeout`` seconds of being awaited becomes a
    "timeout" row, and a run that raises becomes an "error" row. Workers
    still busy when the sweep ends are terminated.
    """
    seeds = list(seeds)
    jobs = [(cell, seed) for cell in cells for seed in seeds]
    pool_size = worker_count(workers)
    logger.info(
        "Running %d benchmark instances on %d worker(s)", len(jobs), pool_size
    )
    executor = ProcessPoolExecutor(max_workers=pool_size)
    rows: list[BenchRow] = []
    try:
        futures = [
            executor.submit(run_instance, cell, seed, n, m, tie_break)
            for cell, seed in jobs
        ]
        rows = [
            _collect(future, cell, seed, timeout)
            for future, (cell, seed) in zip(futures, jobs, strict=True)
        ]
    finally:
        pids = list(executor._processes or {})  # noqa: SLF001
        executor.shutdown(wait=False, cancel_futures=True)
        if any(row.status == "timeout" for row in rows):
            _stop_workers(pids)
    return rows


def write_csv(rows: Iterable[BenchRow], stream: TextIO) -> None:
    """Writes the header and one line per row."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(row.as_csv() for row in rows)
