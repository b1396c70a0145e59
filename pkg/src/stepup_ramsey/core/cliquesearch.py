"""Integer-level searches over a StepColoring.

The 6-subset scan walks subsets in colex order, split into one task per
largest element so the work can be spread over processes and merged
deterministically. The blue-clique search is a single-process
branch-and-bound seeded with a greedy clique.
"""

import logging
import time
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence

from stepup_ramsey.core import subsets
from stepup_ramsey.core.delta_core import (
    check_increasing, drop_vertex_deltas, raw_deltas)
from stepup_ramsey.core.errors import OrderError, PreconditionError, SizeError
from stepup_ramsey.core.models import (
    CliqueResult, Color, SearchBudget, SixScanResult)
from stepup_ramsey.core.stepup import StepColoring

DEADLINE_CHECK_EVERY = 4096


def _checked_vertices(sc: StepColoring, vertices: Sequence[int],
                      minimum: int) -> List[int]:
    vs = sorted(vertices)
    if len(vs) < minimum:
        raise SizeError(f'Need at least {minimum} vertices, got {len(vs)}')
    if len(set(vs)) != len(vs):
        raise OrderError('Vertex set contains duplicates')
    check_increasing(vs)
    if vs[0] < 0 or vs[-1] >= sc.vertex_count:
        raise OrderError(f'Vertices must lie in [0, {sc.vertex_count})')
    return vs


def six_red_count(sc: StepColoring, raw: Sequence[int]) -> int:
    """Red 5-subsets of six vertices from their delta sequence."""
    return sum(sc.color_of_deltas(drop_vertex_deltas(raw, omit)) == Color.RED
               for omit in range(1, 7))


def _scan_task(task) -> dict:
    sc, vs, top, limit, deadline, validator = task
    best, witness = -1, None
    histogram: Dict[int, int] = {}
    cache: Dict[tuple, int] = {}
    scanned = 0
    timed_out = False
    last = vs[top]
    for rest in subsets.colex_combinations(top, 5):
        if scanned >= limit:
            break
        if (deadline is not None and scanned % DEADLINE_CHECK_EVERY == 0
                and time.monotonic() > deadline):
            timed_out = True
            break
        six = [vs[pos] for pos in rest] + [last]
        raw = raw_deltas(six)
        count = cache.get(raw)
        if count is None:
            count = (validator(six, raw) if validator is not None
                     else six_red_count(sc, raw))
            cache[raw] = count
        scanned += 1
        histogram[count] = histogram.get(count, 0) + 1
        if count > best:
            best, witness = count, six
    return {'max': best, 'witness': witness, 'scanned': scanned,
            'histogram': histogram, 'timed_out': timed_out,
            'validated': len(cache) if validator is not None else 0}


def scan_six_subsets(sc: StepColoring, vertices: Sequence[int],
                     budget: Optional[SearchBudget] = None,
                     threshold: int = 3,
                     validator: Optional[Callable] = None) -> SixScanResult:
    """Maximum red count over the 6-subsets of ``vertices``.

    Only the first ``budget.max_subsets`` subsets in colex order are
    visited; a deadline from ``budget.max_seconds`` may stop tasks early.
    Either makes the result inexact. The witness is the colex-first
    6-subset attaining the maximum.
    """
    budget = budget or SearchBudget()
    vs = _checked_vertices(sc, vertices, 6)
    started = time.monotonic()
    deadline = (started + budget.max_seconds
                if budget.max_seconds is not None else None)
    tasks = []
    truncated = False
    for top, offset, count in subsets.colex_partition(len(vs), 6):
        if offset >= budget.max_subsets:
            truncated = True
            break
        limit = min(count, budget.max_subsets - offset)
        truncated = truncated or limit < count
        tasks.append((sc, vs, top, limit, deadline, validator))

    best, witness, scanned, validated = 0, None, 0, 0
    histogram: Dict[int, int] = {}
    timed_out = False
    for part in subsets.run_tasks(_scan_task, tasks, budget.workers):
        scanned += part['scanned']
        validated += part['validated']
        timed_out = timed_out or part['timed_out']
        for count, hits in part['histogram'].items():
            histogram[count] = histogram.get(count, 0) + hits
        if part['witness'] is not None and (witness is None
                                            or part['max'] > best):
            best, witness = part['max'], part['witness']
    if timed_out:
        logging.warning('6-subset scan stopped at the %ss deadline',
                        budget.max_seconds)
    if truncated:
        logging.info('6-subset scan truncated at %s subsets',
                     budget.max_subsets)
    return SixScanResult(
        max=best, witness=witness, exact=not (truncated or timed_out),
        subsets_scanned=scanned, seconds=time.monotonic() - started,
        threshold=threshold, exceeds_threshold=best > threshold,
        histogram=dict(sorted(histogram.items())),
        patterns_validated=validated)


def max_red_in_six(sc: StepColoring, vertices: Sequence[int],
                   budget: Optional[SearchBudget] = None,
                   validator: Optional[Callable] = None) -> SixScanResult:
    """Largest red count among 6 vertices; the main rules allow 3."""
    if sc.rule_set.base_arity != 2:
        raise PreconditionError('max_red_in_six needs a pair-based coloring')
    return scan_six_subsets(sc, vertices, budget, 3, validator)


def max_red_in_six_variant(sc: StepColoring, vertices: Sequence[int],
                           budget: Optional[SearchBudget] = None,
                           validator: Optional[Callable] = None
                           ) -> SixScanResult:
    if sc.rule_set.base_arity != 4:
        raise PreconditionError(
            'max_red_in_six_variant needs a 4-subset based coloring')
    return scan_six_subsets(sc, vertices, budget, 4, validator)


class BlueCliqueSearch:
    """Branch-and-bound for a largest set whose 5-subsets are all blue.

    Candidates are kept compatible with the current clique: adding any one
    of them keeps every 5-subset blue. The bound is |clique| + |candidates|.
    """

    def __init__(self, sc: StepColoring, vertices: Sequence[int],
                 budget: Optional[SearchBudget] = None):
        self.sc = sc
        self.vertices = _checked_vertices(sc, vertices, 5)
        self.budget = budget or SearchBudget()
        self.nodes = 0
        self.stopped = False
        self.best: List[int] = []
        self.deadline = None

    def blue(self, five) -> bool:
        return self.sc.color(sorted(five)) == Color.BLUE

    def compatible(self, clique, new, other) -> bool:
        return all(self.blue((new, other) + triple)
                   for triple in combinations(clique, 3))

    def greedy(self) -> List[int]:
        clique: List[int] = []
        for vertex in self.vertices:
            if all(self.blue((vertex,) + quad)
                   for quad in combinations(clique, 4)):
                clique.append(vertex)
        return clique

    def _out_of_budget(self) -> bool:
        if self.nodes > self.budget.max_subsets:
            return True
        return self.deadline is not None and time.monotonic() > self.deadline

    def expand(self, clique: List[int], cands: List[int]) -> None:
        self.nodes += 1
        if self._out_of_budget():
            self.stopped = True
            return
        if len(clique) > len(self.best):
            self.best = list(clique)
        for pos, vertex in enumerate(cands):
            if len(clique) + len(cands) - pos <= len(self.best):
                return
            rest = [other for other in cands[pos + 1:]
                    if self.compatible(clique, vertex, other)]
            self.expand(clique + [vertex], rest)
            if self.stopped:
                return

    def run(self) -> CliqueResult:
        started = time.monotonic()
        if self.budget.max_seconds is not None:
            self.deadline = started + self.budget.max_seconds
        self.best = self.greedy()
        logging.debug('Greedy blue clique has %s vertices', len(self.best))
        self.expand([], list(self.vertices))
        if self.stopped:
            logging.info('Blue clique search stopped after %s nodes',
                         self.nodes)
        return CliqueResult(size=len(self.best), clique=sorted(self.best),
                            exact=not self.stopped, nodes=self.nodes,
                            seconds=time.monotonic() - started)


def max_blue_clique(sc: StepColoring, vertices: Sequence[int],
                    budget: Optional[SearchBudget] = None) -> CliqueResult:
    return BlueCliqueSearch(sc, vertices, budget).run()
