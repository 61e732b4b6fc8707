"""Order-preserving fan-out of independent work items."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def shard_map(fn, tasks, shards: int = 1) -> list:
    """``[fn(t) for t in tasks]``, optionally spread over worker processes.

    Results always come back in task order, so callers that merge them in
    sequence get identical output for any shard count.
    """
    tasks = list(tasks)
    if shards < 1:
        raise ValueError("shard count must be >= 1")
    if shards == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(shards, len(tasks))) as pool:
        return list(pool.map(fn, tasks))
