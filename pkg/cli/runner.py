"""
Suite runner: worker threads pull suite names from a task queue and push their
results onto a result queue; the caller is the only writer of the report.
"""

import logging
import os
import queue
import threading
import time

from cli.config import JobConfig
from cli.constants import DEFAULT_THREADS, RESULT_POLL_SEC, SUITES, THREADS_ENV
from cli.report import CheckResult, Report
from cli.suites import SUITE_FUNCTIONS
from tensorcore.errors import ConfigError

LOGGER = logging.getLogger(__name__)


def thread_count(env=None) -> int:
    raw = (env if env is not None else os.environ).get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_THREADS
    try:
        threads = int(raw)
    except ValueError as e:
        raise ConfigError(f"{THREADS_ENV}={raw!r} is not an integer") from e
    if threads < 1:
        raise ConfigError(f"{THREADS_ENV} must be at least 1, got {threads}")
    return threads


def run_suite_worker(cfg: JobConfig, task_queue, result_queue, stop_event: threading.Event):
    """Run suites until the task queue is empty or stop_event is set.

    Pushes {"type": "result", "suite", "checks"} per suite, or
    {"type": "error", "suite", "message"} when a suite fails outside its checks.
    """
    while not stop_event.is_set():
        try:
            name = task_queue.get_nowait()
        except queue.Empty:
            return
        start = time.perf_counter()
        LOGGER.info("suite %s: start", name)
        try:
            checks = SUITE_FUNCTIONS[name](cfg)
            result_queue.put({"type": "result", "suite": name, "checks": checks})
        except Exception as e:
            LOGGER.exception("suite %s crashed", name)
            result_queue.put({"type": "error", "suite": name, "message": f"{type(e).__name__}: {e}",
                              "seconds": time.perf_counter() - start})
        LOGGER.info("suite %s: done in %.2fs", name, time.perf_counter() - start)


def run_suite(cfg: JobConfig, threads: int | None = None, config_echo: dict | None = None) -> Report:
    """Execute the selected suites and assemble one report."""
    names = [s for s in SUITES if s in cfg.suites]
    threads = min(threads if threads is not None else thread_count(), max(len(names), 1))
    task_queue = queue.Queue()
    for name in names:
        task_queue.put(name)
    result_queue = queue.Queue()
    stop_event = threading.Event()

    workers = [threading.Thread(target=run_suite_worker, args=(cfg, task_queue, result_queue, stop_event),
                                name=f"suite-worker-{i}", daemon=True) for i in range(threads)]
    for w in workers:
        w.start()

    report = Report(config_echo if config_echo is not None else {"group": cfg.group, "seed": cfg.seed,
                                                                  "suites": names})
    pending = len(names)
    try:
        while pending:
            try:
                event = result_queue.get(timeout=RESULT_POLL_SEC)
            except queue.Empty:
                if not any(w.is_alive() for w in workers) and result_queue.empty():
                    break
                continue
            pending -= 1
            if event["type"] == "error":
                report.checks.append(CheckResult.error(event["suite"], "suite", event["message"], event["seconds"]))
            else:
                report.checks.extend(event["checks"])
    finally:
        stop_event.set()
        for w in workers:
            w.join()
    LOGGER.info("%d checks over %d suites on %d thread(s): %s", len(report.checks), len(names), threads,
                report.summary())
    return report
