"""Exhaustive symbolic check of the red-count claims on six vertices.

For six vertices v1 < ... < v6 the colors of the six 5-subsets e_i (drop
v_i) depend only on the weak ordering of the five deltas and on the base
colors of the keys (pairs or quadruples of distinct ranks) that the rules
read. We therefore enumerate every realizable length-5 delta pattern and
every assignment of base colors to its rank keys. Each edge compiles to a
red condition, and all assignments of one pattern are evaluated at once as
a boolean table with numpy.
"""

import logging
import math
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from stepup_ramsey.core import subsets
from stepup_ramsey.core.base_coloring import PairColoring
from stepup_ramsey.core.cliquesearch import scan_six_subsets
from stepup_ramsey.core.delta_core import (
    canonical, drop_vertex_deltas, enumerate_realizable_patterns,
    is_realizable, realize_pattern)
from stepup_ramsey.core.errors import (
    ClaimViolation, CrossCheckError, PatternError, RealizabilityError,
    ResourceError)
from stepup_ramsey.core.finders import RuleSetFinder
from stepup_ramsey.core.models import (
    CaseReport, CaseStat, ClaimSummary, Color, SearchBudget, SixScanResult)
from stepup_ramsey.core.stepup import QuadColoring, RuleSet, StepColoring

CLAIM_LIMITS = {'Main64': 3, 'Variant65': 4}

CASE_LABELS = {
    'DUDU': '1a', 'UDUD': '1b', 'DDUD': '2a', 'UUDU': '2b',
    'DUDD': '3a', 'UDUU': '3b', 'DUUD': '4a', 'UDDU': '4b',
    'DUUU': '5a', 'UDDD': '5b', 'DDUU': '6a', 'UUDD': '6b',
    'DDDU': '7a', 'UUUD': '7b', 'DDDD': '8a', 'UUUU': '8b',
}


def _resolve(rule_set) -> RuleSet:
    if isinstance(rule_set, str):
        return RuleSetFinder.find_rule_set(rule_set)
    return rule_set


def _check_pattern(pattern: Sequence[int]) -> Tuple[int, ...]:
    pattern = tuple(pattern)
    if len(pattern) != 5:
        raise PatternError(f'Need a length-5 pattern, got {pattern}')
    if not is_realizable(pattern):
        raise RealizabilityError(f'Pattern {pattern} is not realizable')
    return pattern


def induced_edge_patterns(pattern: Sequence[int]) -> List[Tuple[int, ...]]:
    """Canonical delta patterns of e_1, ..., e_6."""
    pattern = _check_pattern(pattern)
    return [canonical(drop_vertex_deltas(pattern, omit))
            for omit in range(1, 7)]


def _induced_rank_deltas(pattern) -> List[Tuple[int, ...]]:
    # Deltas of each e_i in the ranks of the full pattern, so that all six
    # edges read the same base keys.
    return [drop_vertex_deltas(pattern, omit) for omit in range(1, 7)]


def case_label(pattern: Sequence[int]) -> str:
    """One of 1a ... 8b from the up/down signs of a length-5 pattern."""
    pattern = tuple(pattern)
    if len(pattern) != 5:
        raise PatternError(f'Need a length-5 pattern, got {pattern}')
    signs = ''
    for left, right in zip(pattern, pattern[1:]):
        if left == right:
            raise PatternError(f'Adjacent equal entries in {pattern}')
        signs += 'U' if right > left else 'D'
    return CASE_LABELS[signs]


def rank_keys(pattern: Sequence[int], arity: int) -> List[Tuple[int, ...]]:
    """Base keys (sorted rank tuples) an assignment has to color."""
    return list(combinations(range(max(pattern) + 1), arity))


def key_label(key: Sequence[int]) -> str:
    return ','.join(str(item) for item in key)


class SymbolicBase:
    """Base coloring on ranks given by an explicit assignment."""

    def __init__(self, assignment: Mapping[Tuple[int, ...], object]):
        self.assignment = {tuple(sorted(key)): value in (True, Color.RED)
                           for key, value in assignment.items()}

    def is_red(self, *key: int) -> bool:
        try:
            return self.assignment[tuple(sorted(key))]
        except KeyError as exc:
            raise PatternError(f'No base color assigned to {key}') from exc


def _assignment_from_mask(keys, mask) -> Dict[Tuple[int, ...], bool]:
    return {key: bool(mask >> pos & 1) for pos, key in enumerate(keys)}


def realize_case(pattern: Sequence[int], assignment, rule_set='Main64'
                 ) -> Tuple[List[int], StepColoring]:
    """Six vertices and a concrete StepColoring reproducing one case.

    Ranks become bit indices, so the base coloring on range(r) extends the
    assignment (unassigned keys are blue).
    """
    rules = _resolve(rule_set)
    pattern = _check_pattern(pattern)
    vertices = realize_pattern(pattern)
    base_symbolic = SymbolicBase(assignment)
    width = max(pattern) + 1
    if rules.base_arity == 2:
        size = max(width, 2)
        base = PairColoring.from_red_pairs(
            size, [key for key, red in base_symbolic.assignment.items()
                   if red])
    else:
        size = max(width, 4)
        base = QuadColoring.from_function(
            size, lambda quad: base_symbolic.assignment.get(quad, False))
    return vertices, StepColoring(base, width, rules)


def evaluate_pattern(pattern: Sequence[int], assignment,
                     rule_set='Main64') -> CaseReport:
    """Colors of the six 5-subsets for one pattern and base assignment."""
    rules = _resolve(rule_set)
    pattern = _check_pattern(pattern)
    base = SymbolicBase(assignment)
    colors = [rules.color(deltas, base)
              for deltas in _induced_rank_deltas(pattern)]
    return CaseReport(
        rule_set=rules.name, pattern=list(pattern),
        phi_assignment={key_label(key): Color.RED if red else Color.BLUE
                        for key, red in sorted(base.assignment.items())},
        edge_colors=colors,
        red_count=sum(color == Color.RED for color in colors),
        case_label=case_label(pattern),
        realization=realize_pattern(pattern))


class CompiledPattern:
    """All base assignments of one pattern evaluated as boolean arrays."""

    def __init__(self, pattern, rules: RuleSet, hypothesis_filter=False):
        self.pattern = tuple(pattern)
        self.keys = rank_keys(pattern, rules.base_arity)
        index = {key: pos for pos, key in enumerate(self.keys)}
        count = len(self.keys)
        masks = np.arange(1 << count, dtype=np.int64)
        self.bits = ((masks[:, None] >> np.arange(count)) & 1).astype(bool)
        reds = np.zeros((len(masks), 6), dtype=bool)
        for edge, deltas in enumerate(_induced_rank_deltas(self.pattern)):
            condition = rules.red_condition(deltas)
            if condition is None:
                continue
            need_red, need_blue = condition
            red = np.ones(len(masks), dtype=bool)
            for key in need_red:
                red &= self.bits[:, index[key]]
            for key in need_blue:
                red &= ~self.bits[:, index[key]]
            reds[:, edge] = red
        self.reds = reds
        self.allowed = np.ones(len(masks), dtype=bool)
        if hypothesis_filter:
            self.allowed = self._hypothesis_mask()

    def _hypothesis_mask(self) -> np.ndarray:
        """At most 3 red keys among the 4-subsets of every 5 ranks."""
        allowed = np.ones(len(self.bits), dtype=bool)
        index = {key: pos for pos, key in enumerate(self.keys)}
        for five in combinations(range(max(self.pattern) + 1), 5):
            cols = [index[quad] for quad in combinations(five, 4)]
            allowed &= self.bits[:, cols].sum(axis=1) <= 3
        return allowed

    def red_counts(self) -> np.ndarray:
        return self.reds.sum(axis=1)

    def assignment(self, mask: int) -> Dict[Tuple[int, ...], bool]:
        return _assignment_from_mask(self.keys, mask)


def _pattern_stats(task) -> dict:
    pattern, rule_name, limit, hypothesis_filter = task
    compiled = CompiledPattern(pattern, _resolve(rule_name), hypothesis_filter)
    counts = np.where(compiled.allowed, compiled.red_counts(), -1)
    assignments = int(compiled.allowed.sum())
    best = int(counts.max()) if assignments else 0
    over = np.flatnonzero(counts > limit)
    return {
        'pattern': compiled.pattern,
        'label': case_label(compiled.pattern),
        'assignments': assignments,
        'max_red': best,
        'best_mask': int(np.argmax(counts)) if assignments else None,
        'violation_mask': int(over[0]) if len(over) else None,
        'keys': compiled.keys,
    }


def _check_claim(rule_set, limit, hypothesis_filter, workers,
                 raise_on_violation) -> ClaimSummary:
    rules = _resolve(rule_set)
    patterns = enumerate_realizable_patterns(5)
    tasks = [(pattern, rules.name, limit, hypothesis_filter)
             for pattern in patterns]
    summary = ClaimSummary(rule_set=rules.name, limit=limit,
                           hypothesis_filter=hypothesis_filter,
                           patterns_checked=0, assignments_checked=0,
                           global_max=0)
    violation = None
    best = None
    for stats in subsets.run_tasks(_pattern_stats, tasks, workers):
        summary.patterns_checked += 1
        summary.assignments_checked += stats['assignments']
        case = summary.per_case.setdefault(stats['label'], CaseStat())
        case.patterns += 1
        case.assignments += stats['assignments']
        case.max_red = max(case.max_red, stats['max_red'])
        if stats['assignments'] and (best is None
                                     or stats['max_red'] > best['max_red']):
            best = stats
        if violation is None and stats['violation_mask'] is not None:
            violation = stats
    if best is not None:
        summary.global_max = best['max_red']
        summary.witness = evaluate_pattern(
            best['pattern'],
            _assignment_from_mask(best['keys'], best['best_mask']), rules)
    if violation is not None:
        report = evaluate_pattern(
            violation['pattern'],
            _assignment_from_mask(violation['keys'],
                                  violation['violation_mask']), rules)
        summary.holds = False
        summary.witness = report
        logging.warning('Claim "at most %s red" fails for %s: pattern %s',
                        limit, rules.name, report.pattern)
        if raise_on_violation:
            raise ClaimViolation(
                f'{report.red_count} red 5-subsets among 6 vertices with '
                f'pattern {report.pattern} under {rules.name}', report=report)
    logging.info('Checked %s patterns and %s assignments for %s; max red %s',
                 summary.patterns_checked, summary.assignments_checked,
                 rules.name, summary.global_max)
    return summary


def check_six_point_claim(workers: int = 1, rule_set='Main64',
                          raise_on_violation: bool = True) -> ClaimSummary:
    """Verify that the main rules give at most 3 red 5-subsets among 6."""
    rules = _resolve(rule_set)
    return _check_claim(rules, CLAIM_LIMITS.get(rules.name, 3), False,
                        workers, raise_on_violation)


def check_six_point_claim_variant(hypothesis_filter: bool = True,
                                  workers: int = 1,
                                  raise_on_violation: bool = True
                                  ) -> ClaimSummary:
    """Verify at most 4 red under the 4-subset rules.

    With ``hypothesis_filter`` only base colorings with at most 3 red
    4-subsets among any 5 ranks are considered; without it the claim can
    fail.
    """
    return _check_claim('Variant65', CLAIM_LIMITS['Variant65'],
                        hypothesis_filter, workers, raise_on_violation)


class SymbolicCrossValidator:
    """Compare three evaluations of the six edges of one 6-subset.

    Direct coloring of the explicit 5-subsets, the merged-delta fast path
    and the symbolic rank evaluation must agree. Returns the red count.
    """

    def __init__(self, sc: StepColoring):
        self.sc = sc

    def __call__(self, six: Sequence[int], raw: Sequence[int]) -> int:
        sc = self.sc
        direct = [sc.color([v for pos, v in enumerate(six) if pos != omit])
                  for omit in range(6)]
        fast = [sc.color_of_deltas(drop_vertex_deltas(raw, omit))
                for omit in range(1, 7)]
        values = sorted(set(raw))
        pattern = canonical(raw)
        assignment = {
            key: sc.base.is_red(*(values[rank] for rank in key))
            for key in rank_keys(pattern, sc.rule_set.base_arity)}
        symbolic = evaluate_pattern(pattern, assignment,
                                    sc.rule_set).edge_colors
        if not direct == fast == symbolic:
            raise CrossCheckError(
                f'Evaluations disagree on {list(six)}',
                details={'vertices': list(six), 'deltas': list(raw),
                         'direct': direct, 'fast': fast,
                         'symbolic': symbolic})
        return sum(color == Color.RED for color in direct)


def integer_cross_check(bit_width: int, base, budget: Optional[SearchBudget]
                        = None, rule_set: Optional[str] = None
                        ) -> SixScanResult:
    """Scan every 6-subset of range(2**bit_width) against the symbolic rules.

    Raises ResourceError when the full scan exceeds the budget and
    ClaimViolation when some 6-subset has more red edges than allowed.
    """
    budget = budget or SearchBudget()
    if rule_set is None:
        rule_set = 'Main64' if getattr(base, 'arity', 2) == 2 else 'Variant65'
    sc = StepColoring(base, bit_width, rule_set)
    vertices = list(range(sc.vertex_count))
    total = math.comb(len(vertices), 6)
    if total > budget.max_subsets:
        raise ResourceError(
            f'Full scan needs {total} 6-subsets, over the budget of '
            f'{budget.max_subsets}')
    limit = CLAIM_LIMITS.get(sc.rule_set.name, 3)
    result = scan_six_subsets(sc, vertices, budget, threshold=limit,
                              validator=SymbolicCrossValidator(sc))
    if result.exceeds_threshold:
        raise ClaimViolation(
            f'{result.max} red 5-subsets among {result.witness}',
            report=result)
    return result
