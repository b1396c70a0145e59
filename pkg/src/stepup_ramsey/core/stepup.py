"""Stepping-up colorings of the 5-subsets of {0, ..., 2^N - 1}.

The color of v1 < ... < v5 depends only on the delta quadruple
(d1, d2, d3, d4) and on a base coloring of small subsets of {0, ..., M-1}.
Each rule set turns a delta quadruple into a *red condition*: the base
keys that must be red and the base keys that must be blue for the 5-tuple
to be red. None means the tuple is blue whatever the base says. Both the
integer colorings and the symbolic proof checker evaluate these conditions,
so the rules are written down exactly once.
"""

import logging
import math
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from stepup_ramsey.core.base_coloring import PairColoring, fresh_seed
from stepup_ramsey.core.delta_core import (
    check_increasing, drop_vertex_deltas, raw_deltas)
from stepup_ramsey.core.errors import (
    BaseRangeError, OrderError, PatternError, PreconditionError, SizeError)
from stepup_ramsey.core.finders import RuleSetFinder
from stepup_ramsey.core.models import Color, RuleMatch
from stepup_ramsey.core.subsets import colex_combinations, colex_rank

BaseKey = Tuple[int, ...]
RedCondition = Tuple[Tuple[BaseKey, ...], Tuple[BaseKey, ...]]


class QuadColoring:
    """Red/blue coloring of the 4-subsets of range(M), stored in colex order."""

    arity = 4

    def __init__(self, ground_size: int, bits: Sequence[int],
                 seed: Optional[int] = None):
        if ground_size < 4:
            raise SizeError(f'Quad coloring needs M >= 4, got {ground_size}')
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (math.comb(ground_size, 4),):
            raise SizeError('Wrong number of 4-subset colors')
        bits.flags.writeable = False
        self.ground_size = ground_size
        self.bits = bits
        self.seed = seed
        self._flags = bits.tolist()

    @classmethod
    def random(cls, ground_size: int, seed: Optional[int] = None,
               rng: Optional[np.random.Generator] = None) -> 'QuadColoring':
        if rng is None:
            seed = fresh_seed() if seed is None else seed
            rng = np.random.default_rng(seed)
        bits = rng.integers(0, 2, size=math.comb(ground_size, 4),
                            dtype=np.uint8)
        return cls(ground_size, bits, seed=seed)

    @classmethod
    def constant(cls, ground_size: int, color: Color) -> 'QuadColoring':
        return cls(ground_size,
                   [color == Color.RED] * math.comb(ground_size, 4))

    @classmethod
    def from_function(cls, ground_size: int, func) -> 'QuadColoring':
        """Build from ``func(quad) -> bool`` (True = red) on sorted quads."""
        return cls(ground_size, [bool(func(quad)) for quad in
                                 colex_combinations(ground_size, 4)])

    def is_red(self, *quad: int) -> bool:
        return self._flags[colex_rank(sorted(quad))]

    def color(self, *quad: int) -> Color:
        if len(set(quad)) != 4:
            raise OrderError(f'Need four distinct points, got {quad}')
        return Color.RED if self.is_red(*quad) else Color.BLUE

    def max_red_in_five(self) -> int:
        """Largest number of red 4-subsets inside any 5-subset."""
        best = 0
        for five in combinations(range(self.ground_size), 5):
            reds = sum(self.is_red(*quad) for quad in combinations(five, 4))
            best = max(best, reds)
        return best

    def __eq__(self, other):
        return (isinstance(other, QuadColoring)
                and np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __repr__(self):
        return f'QuadColoring(M={self.ground_size}, seed={self.seed})'


def _check_adjacent(deltas: Sequence[int]) -> Tuple[int, int, int, int]:
    if len(deltas) != 4:
        raise PatternError(f'Need a delta quadruple, got {tuple(deltas)}')
    for left, right in zip(deltas, deltas[1:]):
        if left == right:
            raise PatternError(f'Adjacent equal deltas in {tuple(deltas)}')
    return tuple(deltas)


def _is_monotone(d1, d2, d3, d4) -> bool:
    return d1 < d2 < d3 < d4 or d1 > d2 > d3 > d4


def matching_rules(deltas: Sequence[int]) -> List[RuleMatch]:
    """Every shape of the main rule set whose condition holds."""
    d1, d2, d3, d4 = _check_adjacent(deltas)
    shapes = {
        RuleMatch.MONOTONE: _is_monotone(d1, d2, d3, d4),
        RuleMatch.ZIGZAG_RULE2: d3 > d1 > d2 > d4,
        RuleMatch.ZIGZAG_RULE3: d2 > d4 > d3 > d1,
        RuleMatch.EQUAL_ENDS_RULE4: d2 > d1 == d4 > d3,
    }
    return [shape for shape, holds in shapes.items() if holds]


def classify_pattern(deltas: Sequence[int]) -> RuleMatch:
    """Shape of a delta quadruple for the main rules."""
    found = matching_rules(deltas)
    return found[0] if found else RuleMatch.NO_RULE


def classify_variant_pattern(deltas: Sequence[int]) -> RuleMatch:
    d1, d2, d3, d4 = _check_adjacent(deltas)
    if _is_monotone(d1, d2, d3, d4):
        return RuleMatch.MONOTONE
    if d1 > d2 < d3 > d4 and d1 < d3:
        return RuleMatch.VARIANT_RULE2
    return RuleMatch.NO_RULE


def _ordered(a, b) -> BaseKey:
    return (a, b) if a < b else (b, a)


class RuleSet:
    """A named family of red rules over a base coloring of given arity."""

    name = None
    base_arity = None
    description = ''

    def classify(self, deltas: Sequence[int]) -> RuleMatch:
        raise NotImplementedError

    def red_condition(self, deltas: Sequence[int]) -> Optional[RedCondition]:
        """Return (keys that must be red, keys that must be blue) or None."""
        raise NotImplementedError

    def color(self, deltas: Sequence[int], base) -> Color:
        """Evaluate the rules on ``deltas`` against a base with ``is_red``."""
        condition = self.red_condition(deltas)
        if condition is None:
            return Color.BLUE
        need_red, need_blue = condition
        if all(base.is_red(*key) for key in need_red) and not any(
                base.is_red(*key) for key in need_blue):
            return Color.RED
        return Color.BLUE

    def __repr__(self):
        return f'{self.__class__.__name__}({self.name!r})'


class MainRules(RuleSet):
    """Four red rules for 6 vertices with at most 3 red 5-subsets."""

    name = 'Main64'
    base_arity = 2
    description = ('Monotone bad 4-tuple, two zigzag rules and the '
                   'equal-ends rule over a pair coloring')

    def classify(self, deltas):
        return classify_pattern(deltas)

    def red_condition(self, deltas):
        d1, d2, d3, d4 = deltas
        shape = self.classify(deltas)
        if shape == RuleMatch.MONOTONE:
            a, b, c, d = sorted(deltas)
            return (((a, b), (b, c), (b, d)), ((a, c), (a, d), (c, d)))
        if shape == RuleMatch.ZIGZAG_RULE2:
            return ((_ordered(d1, d4),), (_ordered(d2, d4),))
        if shape == RuleMatch.ZIGZAG_RULE3:
            return ((_ordered(d1, d4),), (_ordered(d1, d3),))
        if shape == RuleMatch.EQUAL_ENDS_RULE4:
            return ((), ())
        return None


class VariantRules(RuleSet):
    """Two red rules over a 4-subset coloring (at most 4 red among 6)."""

    name = 'Variant65'
    base_arity = 4
    description = ('Monotone quadruple colored red by the base, plus the '
                   'valley rule d1 > d2 < d3 > d4 with d1 < d3')

    def classify(self, deltas):
        return classify_variant_pattern(deltas)

    def red_condition(self, deltas):
        shape = self.classify(deltas)
        if shape == RuleMatch.MONOTONE:
            return ((tuple(sorted(deltas)),), ())
        if shape == RuleMatch.VARIANT_RULE2:
            return ((), ())
        return None


RULE_SETS = {rules.name: rules for rules in (MainRules(), VariantRules())}


class StepColoring:
    """The 5-uniform coloring of range(2**bit_width) stepped up from a base.

    Colors are cached by raw delta quadruple, which is all they depend on.
    """

    def __init__(self, base, bit_width: int, rule_set='Main64'):
        if isinstance(rule_set, str):
            rule_set = RuleSetFinder.find_rule_set(rule_set)
        if bit_width < 1:
            raise SizeError(f'Need bit_width >= 1, got {bit_width}')
        if getattr(base, 'arity', None) != rule_set.base_arity:
            raise PreconditionError(
                f'Rule set {rule_set.name} needs a base coloring of arity '
                f'{rule_set.base_arity}')
        if base.ground_size < bit_width:
            raise SizeError(
                f'Base ground set M={base.ground_size} cannot hold every delta '
                f'value below bit_width={bit_width}')
        self.base = base
        self.bit_width = bit_width
        self.rule_set = rule_set
        self._cache: Dict[Tuple[int, ...], Color] = {}
        logging.debug('Built StepColoring(%s, N=%s, M=%s)', rule_set.name,
                      bit_width, base.ground_size)

    @property
    def vertex_count(self) -> int:
        return 1 << self.bit_width

    def check_vertices(self, vs: Sequence[int], count: int) -> None:
        if len(vs) != count:
            raise OrderError(f'Need {count} vertices, got {len(vs)}')
        check_increasing(vs)
        if vs[0] < 0 or vs[-1] >= self.vertex_count:
            raise OrderError(f'Vertices must lie in [0, {self.vertex_count})')

    def color_of_deltas(self, deltas: Sequence[int]) -> Color:
        key = tuple(deltas)
        found = self._cache.get(key)
        if found is None:
            if min(key) < 0 or max(key) >= self.base.ground_size:
                raise BaseRangeError(
                    f'Delta values {key} fall outside the base ground set '
                    f'of size {self.base.ground_size}')
            found = self.rule_set.color(key, self.base)
            self._cache[key] = found
        return found

    def color(self, vs: Sequence[int]) -> Color:
        self.check_vertices(vs, 5)
        return self.color_of_deltas(raw_deltas(vs))

    def is_red(self, vs: Sequence[int]) -> bool:
        return self.color(vs) == Color.RED

    def __repr__(self):
        return (f'StepColoring({self.rule_set.name}, N={self.bit_width}, '
                f'M={self.base.ground_size})')


def chi(sc: StepColoring, vs: Sequence[int]) -> Color:
    """Color of five sorted vertices under the pair-based rules."""
    if sc.rule_set.base_arity != 2:
        raise PreconditionError(f'chi needs a pair-based rule set, '
                                f'got {sc.rule_set.name}')
    return sc.color(vs)


def chi_variant_665(sc: StepColoring, vs: Sequence[int]) -> Color:
    """Color of five sorted vertices under the 4-subset based rules."""
    if sc.rule_set.base_arity != 4:
        raise PreconditionError(f'chi_variant_665 needs a 4-subset based '
                                f'rule set, got {sc.rule_set.name}')
    return sc.color(vs)


def chi_on_subset(sc: StepColoring, six: Sequence[int], omit: int) -> Color:
    """Color of the six vertices minus vertex ``omit`` (1-based)."""
    sc.check_vertices(six, 6)
    return sc.color_of_deltas(drop_vertex_deltas(raw_deltas(six), omit))


def make_step_coloring(base, bit_width: int,
                       rule_set: Optional[str] = None) -> StepColoring:
    """StepColoring with the built-in rule set matching the base arity."""
    if rule_set is None:
        rule_set = 'Main64' if isinstance(base, PairColoring) else 'Variant65'
    return StepColoring(base, bit_width, rule_set)
