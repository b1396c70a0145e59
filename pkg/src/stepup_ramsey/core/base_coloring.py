"""The base pair coloring phi and its two avoidance properties.

A random red/blue coloring of the pairs of {0, ..., M-1} is accepted when

  1. no three disjoint n-sets A, B, C with a bijection f: B -> C satisfy
     "phi(a, b) is red or phi(a, f(b)) is blue" for every a in A, b in B;
  2. every n-set contains a bad 4-tuple a < b < c < d, i.e. one with
     phi(a,b) = phi(b,c) = phi(b,d) = red and
     phi(a,c) = phi(a,d) = phi(c,d) = blue.

At desk scale both properties are decided by exhaustive search.
"""

import logging
import math
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from stepup_ramsey.core import subsets
from stepup_ramsey.core.errors import (
    OrderError, ResourceError, SearchExhausted, SizeError)
from stepup_ramsey.core.models import (
    AbcWitness, AttemptLog, Color, ExpectationBounds, SteinerSystem,
    default_budget)

BAD_4TUPLE_PROBABILITY = Fraction(1, 64)


def fresh_seed() -> int:
    """Draw a new 63-bit seed from OS entropy."""
    return int(np.random.SeedSequence().entropy) % (2**63)


class PairColoring:
    """Immutable symmetric red/blue coloring of the pairs of range(M)."""

    arity = 2

    def __init__(self, red, seed: Optional[int] = None):
        red = np.array(red, dtype=bool)
        if red.ndim != 2 or red.shape[0] != red.shape[1]:
            raise SizeError('Pair coloring needs a square matrix')
        if red.shape[0] < 2:
            raise SizeError(f'Ground set must have M >= 2, got {red.shape[0]}')
        if not np.array_equal(red, red.T):
            raise ValueError('Pair coloring matrix must be symmetric')
        np.fill_diagonal(red, False)
        red.flags.writeable = False
        self.red = red
        self.seed = seed
        self._rows = red.tolist()

    @property
    def ground_size(self) -> int:
        return self.red.shape[0]

    @classmethod
    def from_upper_bits(cls, ground_size: int, bits: Sequence[int],
                        seed: Optional[int] = None) -> 'PairColoring':
        """Build from the strict upper triangle in row-major order."""
        if ground_size < 2:
            raise SizeError(f'Ground set must have M >= 2, got {ground_size}')
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (math.comb(ground_size, 2),):
            raise SizeError('Wrong number of pair colors')
        red = np.zeros((ground_size, ground_size), dtype=bool)
        red[np.triu_indices(ground_size, 1)] = bits
        return cls(red | red.T, seed=seed)

    @classmethod
    def constant(cls, ground_size: int, color: Color) -> 'PairColoring':
        return cls.from_upper_bits(
            ground_size, [color == Color.RED] * math.comb(ground_size, 2))

    @classmethod
    def from_red_pairs(cls, ground_size: int, red_pairs) -> 'PairColoring':
        red = np.zeros((ground_size, ground_size), dtype=bool)
        for a, b in red_pairs:
            red[a, b] = red[b, a] = True
        return cls(red)

    def upper_bits(self) -> np.ndarray:
        return self.red[np.triu_indices(self.ground_size, 1)]

    def is_red(self, a: int, b: int) -> bool:
        return self._rows[a][b]

    def color(self, a: int, b: int) -> Color:
        if a == b:
            raise ValueError(f'No color on the diagonal ({a}, {a})')
        return Color.RED if self._rows[a][b] else Color.BLUE

    def __eq__(self, other):
        return (isinstance(other, PairColoring)
                and np.array_equal(self.red, other.red))

    def __hash__(self):
        return hash(self.red.tobytes())

    def __repr__(self):
        return f'PairColoring(M={self.ground_size}, seed={self.seed})'


def random_pair_coloring(ground_size: int, seed: Optional[int] = None,
                         rng: Optional[np.random.Generator] = None
                         ) -> PairColoring:
    """Color each pair red or blue independently and uniformly."""
    if ground_size < 2:
        raise SizeError(f'Ground set must have M >= 2, got {ground_size}')
    if rng is None:
        seed = fresh_seed() if seed is None else seed
        rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=math.comb(ground_size, 2), dtype=np.uint8)
    return PairColoring.from_upper_bits(ground_size, bits, seed=seed)


def _bad(rows, a, b, c, d) -> bool:
    return (rows[a][b] and rows[b][c] and rows[b][d]
            and not rows[a][c] and not rows[a][d] and not rows[c][d])


def is_bad_4tuple(phi: PairColoring, a: int, b: int, c: int, d: int) -> bool:
    """True iff the sorted 4-tuple realizes the bad red/blue pattern."""
    if not 0 <= a < b < c < d < phi.ground_size:
        raise OrderError(f'Need 0 <= a < b < c < d < M, got {(a, b, c, d)}')
    return _bad(phi._rows, a, b, c, d)  # pylint: disable=protected-access


def count_bad_4tuples(phi: PairColoring) -> int:
    rows = phi._rows  # pylint: disable=protected-access
    return sum(1 for quad in combinations(range(phi.ground_size), 4)
               if _bad(rows, *quad))


def _check_budget(work: int, budget: Optional[int], what: str) -> None:
    budget = default_budget() if budget is None else budget
    if work > budget:
        raise ResourceError(f'{what} needs about {work} steps, over the '
                            f'budget of {budget}')


def _bad4_free_from(task) -> Optional[List[int]]:
    """Lexicographically first bad-4-free n-set whose least element is first."""
    phi, n, first = task
    rows = phi._rows  # pylint: disable=protected-access
    chosen = [first]

    def extend(start):
        if len(chosen) == n:
            return True
        for item in range(start, phi.ground_size - (n - len(chosen)) + 1):
            if any(_bad(rows, a, b, c, item)
                   for a, b, c in combinations(chosen, 3)):
                continue
            chosen.append(item)
            if extend(item + 1):
                return True
            chosen.pop()
        return False

    return list(chosen) if extend(first + 1) else None


def find_bad4_free_nset(phi: PairColoring, n: int,
                        budget: Optional[int] = None,
                        workers: int = 1) -> Optional[List[int]]:
    """Find an n-set all of whose 4-tuples are good, or None.

    None certifies Property 2 for phi at this n.
    """
    if not 1 <= n <= phi.ground_size:
        raise SizeError(f'Need 1 <= n <= M={phi.ground_size}, got {n}')
    _check_budget(math.comb(phi.ground_size, n), budget,
                  'Bad-4-free n-set search')
    tasks = [(phi, n, first) for first in range(phi.ground_size - n + 1)]
    for found in subsets.run_tasks(_bad4_free_from, tasks, workers):
        if found is not None:
            return found
    return None


def _compatible_mask(rows, b, c, ground_size) -> int:
    """Bitmask of a with phi(a, b) red or phi(a, c) blue."""
    mask = 0
    for a in range(ground_size):
        if rows[a][b] or not rows[a][c]:
            mask |= 1 << a
    return mask


def _abc_from(task) -> Optional[AbcWitness]:
    """First A/B/C structure (in search order) whose least b is ``first``."""
    phi, n, first = task
    rows = phi._rows  # pylint: disable=protected-access
    size = phi.ground_size
    everything = (1 << size) - 1
    pairs: List[Tuple[int, int]] = []

    def smallest(mask, count):
        result = []
        while mask and len(result) < count:
            low = mask & -mask
            result.append(low.bit_length() - 1)
            mask ^= low
        return result

    def extend(used, allowed, min_b):
        if len(pairs) == n:
            free = allowed & ~used
            if bin(free).count('1') >= n:
                return smallest(free, n)
            return None
        b_range = [first] if not pairs else range(min_b, size)
        for b in b_range:
            if used >> b & 1:
                continue
            for c in range(size):
                if c == b or used >> c & 1:
                    continue
                mask = allowed & _compatible_mask(rows, b, c, size)
                new_used = used | (1 << b) | (1 << c)
                if bin(mask & ~new_used).count('1') < n:
                    continue
                pairs.append((b, c))
                found = extend(new_used, mask, b + 1)
                if found is not None:
                    return found
                pairs.pop()
        return None

    a_set = extend(0, everything, first)
    if a_set is None:
        return None
    return AbcWitness(A=a_set, B=[b for b, _ in pairs],
                      C=[c for _, c in pairs], f=dict(pairs))


def find_abc_structure(phi: PairColoring, n: int,
                       budget: Optional[int] = None,
                       workers: int = 1) -> Optional[AbcWitness]:
    """Find disjoint A, B, C and f violating Property 1, or None.

    Witnesses are searched in the order (b_1, c_1, b_2, c_2, ...) with
    b_1 < b_2 < ...; A is the n smallest admissible points. With 3n > M no
    three disjoint n-sets exist and None is returned at once.
    """
    if n < 1:
        raise SizeError(f'Need n >= 1, got {n}')
    if 3 * n > phi.ground_size:
        return None
    _check_budget(math.comb(phi.ground_size, n) ** 3 * math.factorial(n),
                  budget, 'A/B/C structure search')
    tasks = [(phi, n, first) for first in range(phi.ground_size)]
    for found in subsets.run_tasks(_abc_from, tasks, workers):
        if found is not None:
            return found
    return None


def generate_phi(n: int, ground_size: int, seed: Optional[int] = None,
                 max_attempts: int = 10**5, budget: Optional[int] = None,
                 workers: int = 1) -> Tuple[PairColoring, AttemptLog]:
    """Rejection-sample colorings until both properties hold.

    Raises SearchExhausted (inconclusive, never a disproof) when
    ``max_attempts`` colorings were all rejected.
    """
    seed = fresh_seed() if seed is None else seed
    rng = np.random.default_rng(seed)
    log = AttemptLog(n=n, m=ground_size, seed=seed, max_attempts=max_attempts)
    while log.attempts < max_attempts:
        log.attempts += 1
        phi = random_pair_coloring(ground_size, seed=seed, rng=rng)
        if find_bad4_free_nset(phi, n, budget, workers) is not None:
            log.rejected_bad4_free += 1
            continue
        if find_abc_structure(phi, n, budget, workers) is not None:
            log.rejected_abc += 1
            continue
        log.accepted = True
        logging.info('Accepted phi (n=%s, M=%s, seed=%s) after %s attempts',
                     n, ground_size, seed, log.attempts)
        return phi, log
    log.note = ('No coloring accepted; this is inconclusive at desk scale '
                'and does not refute the existence statement.')
    raise SearchExhausted(
        f'No acceptable coloring for n={n}, M={ground_size} in '
        f'{max_attempts} attempts', log=log)


def greedy_partial_steiner(n: int) -> SteinerSystem:
    """Lexicographic greedy packing of 4-sets sharing at most one point."""
    if n < 4:
        raise SizeError(f'Steiner system needs n >= 4, got {n}')
    used = [[False] * n for _ in range(n)]
    blocks = []
    for a in range(n):
        for b in range(a + 1, n):
            if used[a][b]:
                continue
            for c in range(b + 1, n):
                if used[a][c] or used[b][c]:
                    continue
                fourth = next((d for d in range(c + 1, n)
                               if not (used[a][d] or used[b][d]
                                       or used[c][d])), None)
                if fourth is None:
                    continue
                block = (a, b, c, fourth)
                blocks.append(block)
                for x, y in combinations(block, 2):
                    used[x][y] = used[y][x] = True
                break  # pair (a, b) is now used
    return SteinerSystem(n=n, blocks=blocks)


def _log_comb(total: int, part: int) -> float:
    if part < 0 or part > total:
        return -math.inf
    return (math.lgamma(total + 1) - math.lgamma(part + 1)
            - math.lgamma(total - part + 1))


def expected_counts(n: int, ground_size: int) -> ExpectationBounds:
    """Expected number of A/B/C structures and of good n-sets, in log space."""
    blocks = greedy_partial_steiner(n).block_count if n >= 4 else 0
    log_choose = _log_comb(ground_size, n)
    log_abc = (3 * log_choose + math.lgamma(n + 1)
               + n * n * math.log(3 / 4))
    log_good = log_choose + blocks * math.log(63 / 64)
    return ExpectationBounds(
        n=n, m=ground_size, steiner_blocks=blocks,
        log_abc_expectation=log_abc, log_good_set_bound=log_good,
        abc_expectation=math.exp(log_abc) if log_abc < 700 else math.inf,
        good_set_bound=math.exp(log_good) if log_good < 700 else math.inf)


def expected_counts_exact(n: int, ground_size: int) -> Tuple[Fraction,
                                                              Fraction]:
    """Exact rational versions of the two expectation bounds."""
    blocks = greedy_partial_steiner(n).block_count if n >= 4 else 0
    choose = math.comb(ground_size, n)
    abc = Fraction(choose ** 3 * math.factorial(n)) * Fraction(3, 4) ** (n * n)
    good = Fraction(choose) * (1 - BAD_4TUPLE_PROBABILITY) ** blocks
    return abc, good
