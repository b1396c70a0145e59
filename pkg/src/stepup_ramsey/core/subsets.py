"""Colex-ordered k-subset enumeration and range-partitioned execution.
"""

from concurrent.futures import ProcessPoolExecutor
from math import comb
from typing import Callable, Iterable, Iterator, List, Sequence, Tuple


def colex_combinations(size: int, k: int) -> Iterator[Tuple[int, ...]]:
    """Yield the k-subsets of range(size) in colexicographic order.

    Colex order compares subsets by their largest element first, so the
    subsets with maximum t form the contiguous rank range
    [comb(t, k), comb(t + 1, k)).
    """
    if k == 0:
        yield ()
        return
    for top in range(k - 1, size):
        for rest in colex_combinations(top, k - 1):
            yield rest + (top,)


def colex_rank(combo: Sequence[int]) -> int:
    """Rank of a sorted combination in colex order."""
    return sum(comb(item, pos + 1) for pos, item in enumerate(combo))


def colex_partition(size: int, k: int) -> List[Tuple[int, int, int]]:
    """Split colex enumeration of k-subsets of range(size) by largest element.

    Returns (top, offset, count) triples in enumeration order, where
    ``offset`` is the colex rank of the first subset with maximum ``top``.
    """
    return [(top, comb(top, k), comb(top, k - 1))
            for top in range(k - 1, size)]


def run_tasks(func: Callable, tasks: Iterable, workers: int = 1) -> Iterator:
    """Yield func(task) for each task, in task order.

    With workers > 1 the tasks run in a process pool; results still come
    back in submission order so reductions stay deterministic. Closing the
    generator early cancels tasks that have not started.
    """
    if workers <= 1:
        for task in tasks:
            yield func(task)
        return
    pool = ProcessPoolExecutor(max_workers=workers)
    try:
        yield from pool.map(func, tasks)
    finally:
        pool.shutdown(wait=True, cancel_futures=True)
