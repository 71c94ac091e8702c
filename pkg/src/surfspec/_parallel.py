"""Deterministic parallel map over independent jobs.

Worker count comes from ``SURFSPEC_THREADS`` (default 1).  The compiled
kernels release the GIL, so threads give real concurrency; results are
always returned in job order, keeping every reduction order fixed.
"""

from concurrent.futures import ThreadPoolExecutor
import os


def worker_count():
    try:
        n = int(os.environ.get("SURFSPEC_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def ordered_map(fn, jobs):
    jobs = list(jobs)
    n = min(worker_count(), len(jobs))
    if n <= 1:
        return [fn(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, jobs))
