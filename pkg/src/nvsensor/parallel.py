"""Block-parallel map with worker-count-independent results.

Work on [0, n) is cut into fixed 512-item blocks, each block is computed by
a pure function of (start, stop, *args), and results are returned in block
order. The blocking is identical for every worker count, so any reduction
over the returned list is reproducible bit for bit.
"""

import os
from concurrent.futures import ProcessPoolExecutor

BLOCK_SIZE = 512


def default_workers() -> int:
    return os.cpu_count() or 1


def iter_blocks(n: int, block_size: int = BLOCK_SIZE):
    for start in range(0, n, block_size):
        yield start, min(start + block_size, n)


def map_blocks(fn, n: int, workers: int, *args, block_size: int = BLOCK_SIZE):
    """[fn(start, stop, *args) for each block], in block order.

    workers <= 1 runs inline; more spread blocks over a process pool. fn and
    args must be picklable for the pooled path.
    """
    if n <= 0:
        return []
    bounds = list(iter_blocks(n, block_size))
    if workers <= 1 or len(bounds) == 1:
        return [fn(start, stop, *args) for start, stop in bounds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, start, stop, *args)
                   for start, stop in bounds]
        return [f.result() for f in futures]
