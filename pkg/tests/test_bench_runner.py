"""Tests for the benchmark runner."""

import io
import math
from concurrent.futures import Future
from concurrent.futures import TimeoutError as FutureTimeoutError
from unittest.mock import MagicMock, patch

import pytest

from approx_stable._bench import (
    BENCH_CELLS,
    CSV_COLUMNS,
    BenchRow,
    _collect,
    _stop_workers,
    run_bench,
    run_instance,
    worker_count,
    write_csv,
)


@patch("approx_stable._bench.psutil")
@patch("approx_stable._bench.os")
def test_worker_count_uses_physical_cores(
    mock_os: MagicMock, mock_psutil: MagicMock
) -> None:
    """Verifies that the pool size follows psutil.cpu_count()."""
    mock_psutil.cpu_count.return_value = 4
    mock_os.process_cpu_count.return_value = 2  # Should not be used
    assert worker_count() == 4
    mock_psutil.cpu_count.assert_called_once_with(logical=False)


@patch("approx_stable._bench.psutil")
@patch("approx_stable._bench.os")
def test_worker_count_fallbacks(mock_os: MagicMock, mock_psutil: MagicMock) -> None:
    """Verifies the os.process_cpu_count() and minimum fallbacks."""
    mock_psutil.cpu_count.return_value = None
    mock_os.process_cpu_count.return_value = 6
    assert worker_count() == 6
    mock_os.process_cpu_count.return_value = None
    assert worker_count() == 1


def test_worker_count_override() -> None:
    """Verifies explicit worker counts and their validation."""
    assert worker_count(3) == 3
    with pytest.raises(ValueError, match="workers must be >= 1"):
        worker_count(0)


def test_cells_cover_every_algorithm() -> None:
    """Verifies the benchmark cell names and algorithms."""
    names = [cell.name for cell in BENCH_CELLS]
    assert names == [
        "card-1matroid",
        "card-2matroid",
        "card-3matroid",
        "card-1knapsack",
        "card-2knapsack",
        "add-1knapsack",
        "add-2knapsack",
        "add-1matroid",
    ]


def test_run_instance_within_certified_factor() -> None:
    """Verifies one benchmark row."""
    row = run_instance(BENCH_CELLS[1], seed=3, n=5, m=2)
    assert row.instance == "card-2matroid/seed3"
    assert row.certified_alpha == 2.0
    assert row.achieved_alpha is not None
    assert 1.0 <= row.achieved_alpha <= 2.0 + 1e-9
    assert row.status == "ok"


def test_run_bench_single_worker() -> None:
    """Verifies row order with a single worker."""
    rows = run_bench(BENCH_CELLS[:2], range(2), n=4, m=2, workers=1)
    assert [row.instance for row in rows] == [
        "card-1matroid/seed0",
        "card-1matroid/seed1",
        "card-2matroid/seed0",
        "card-2matroid/seed1",
    ]
    assert all(row.status == "ok" for row in rows)


def test_collect_records_timeouts() -> None:
    """Verifies that a slow future becomes a timeout row."""
    future = MagicMock(spec=Future)
    future.result.side_effect = FutureTimeoutError()
    row = _collect(future, BENCH_CELLS[0], 4, timeout=0.5)
    assert row.status == "timeout"
    assert row.achieved_alpha is None
    assert math.isnan(row.certified_alpha)
    future.cancel.assert_called_once()


def test_collect_records_errors() -> None:
    """Verifies that a failed run becomes an error row."""
    future = MagicMock(spec=Future)
    future.result.side_effect = ValueError("boom")
    assert _collect(future, BENCH_CELLS[0], 4, timeout=1.0).status == "error"


def test_write_csv() -> None:
    """Verifies the CSV header and row formatting."""
    stream = io.StringIO()
    rows = [
        BenchRow("card-1matroid/seed0", "greedy_matroid", 1.0, 1.0, 0.25, "ok"),
        BenchRow("x/seed1", "greedy_matroid", math.nan, None, 60.0, "timeout"),
    ]
    write_csv(rows, stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1] == "card-1matroid/seed0,greedy_matroid,1.0,1.0,0.250000,ok"
    assert lines[2] == "x/seed1,greedy_matroid,nan,,60.000000,timeout"


@pytest.mark.parametrize("workers", [1, 2])
def test_run_bench_records_errors(workers: int) -> None:
    """Verifies that a failing run becomes an error row on any pool size."""
    rows = run_bench(BENCH_CELLS[1:2], range(1), n=30, m=1, workers=workers)
    assert [row.status for row in rows] == ["error"]
    assert rows[0].achieved_alpha is None


@pytest.mark.parametrize("workers", [1, 2])
def test_run_bench_stops_workers_after_timeout(workers: int) -> None:
    """Verifies timeout rows and that the busy workers are terminated."""
    with patch("approx_stable._bench._stop_workers") as mock_stop:
        rows = run_bench(
            BENCH_CELLS[:1], range(2), n=4, m=2, workers=workers, timeout=0
        )
    assert [row.status for row in rows] == ["timeout", "timeout"]
    mock_stop.assert_called_once()


@patch("approx_stable._bench.psutil")
def test_stop_workers_kills_survivors(mock_psutil: MagicMock) -> None:
    """Verifies terminate first, then kill for workers that ignore it."""
    stubborn = MagicMock()
    mock_psutil.Process.return_value = stubborn
    mock_psutil.wait_procs.return_value = ([], [stubborn])
    _stop_workers([101], grace=0.1)
    stubborn.terminate.assert_called_once()
    stubborn.kill.assert_called_once()
    mock_psutil.wait_procs.assert_called_once_with([stubborn], timeout=0.1)
