"""Binary delta function, its order properties and pattern realizability.

A vertex is a non-negative integer; delta(u, v) is the position of the most
significant binary digit where u and v differ. Every strictly increasing
vertex list v_0 < ... < v_L has a delta sequence d_i = delta(v_i, v_{i+1}),
and the red rules only ever look at the weak ordering of such a sequence.
We represent that weak ordering as a canonical rank tuple (a DeltaPattern).
"""

from itertools import combinations
from typing import List, NamedTuple, Optional, Sequence, Tuple

from stepup_ramsey.core.errors import (
    DistinctnessError, OrderError, PreconditionError, RealizabilityError,
    ResourceError)
from stepup_ramsey.core.models import PropertyReport

DeltaPattern = Tuple[int, ...]

MAX_PATTERN_LENGTH = 8


class DeltaSequence(NamedTuple):
    raw: Tuple[int, ...]
    pattern: DeltaPattern


def delta(u: int, v: int) -> int:
    """Return the most significant bit index where u and v differ."""
    if u == v:
        raise DistinctnessError(f'delta is undefined on equal vertices {u}')
    return (u ^ v).bit_length() - 1


def canonical(values: Sequence[int]) -> DeltaPattern:
    """Compress values to ranks 0..r-1 preserving the weak ordering."""
    ranks = {value: rank for rank, value in enumerate(sorted(set(values)))}
    return tuple(ranks[value] for value in values)


def is_canonical(pattern: Sequence[int]) -> bool:
    return tuple(pattern) == canonical(pattern)


def check_increasing(vs: Sequence[int], min_length: int = 2) -> None:
    if len(vs) < min_length:
        raise OrderError(f'Need at least {min_length} vertices, got {len(vs)}')
    for left, right in zip(vs, vs[1:]):
        if left >= right:
            raise OrderError(f'Vertices not strictly increasing: {list(vs)}')


def raw_deltas(vs: Sequence[int]) -> Tuple[int, ...]:
    """Delta sequence of an increasing list without validation."""
    return tuple((left ^ right).bit_length() - 1
                 for left, right in zip(vs, vs[1:]))


def delta_sequence(vs: Sequence[int]) -> DeltaSequence:
    """Raw delta values and canonical rank pattern of an increasing list."""
    check_increasing(vs)
    raw = raw_deltas(vs)
    return DeltaSequence(raw=raw, pattern=canonical(raw))


def merged_delta(vs: Sequence[int], i: int, j: int) -> int:
    """Delta between vs[i] and vs[j] computed as the max over the gap."""
    if not 0 <= i < j < len(vs):
        raise OrderError(f'Need 0 <= i < j < {len(vs)}, got i={i}, j={j}')
    return max(delta(vs[t], vs[t + 1]) for t in range(i, j))


def drop_vertex_deltas(raw: Sequence[int], omit: int) -> Tuple[int, ...]:
    """Delta sequence after removing vertex ``omit`` (1-based) from the list.

    Interior removals merge the two adjacent deltas into their maximum.
    """
    count = len(raw) + 1
    if not 1 <= omit <= count:
        raise OrderError(f'omit must lie in 1..{count}, got {omit}')
    raw = tuple(raw)
    if omit == 1:
        return raw[1:]
    if omit == count:
        return raw[:-1]
    left = omit - 2
    return raw[:left] + (max(raw[left], raw[left + 1]),) + raw[left + 2:]


def verify_delta_properties(vs: Sequence[int],
                            deltas: Optional[Sequence[int]] = None
                            ) -> PropertyReport:
    """Check Properties I-III on an increasing list.

    If ``deltas`` is given it is treated as the reported delta sequence
    (possibly corrupted) and checked against direct recomputation.
    """
    check_increasing(vs)
    reported = tuple(deltas) if deltas is not None else raw_deltas(vs)
    if len(reported) != len(vs) - 1:
        raise OrderError('Reported delta sequence has the wrong length')
    size = len(vs)
    table = {}
    for i in range(size):
        running = -1
        for j in range(i + 1, size):
            running = max(running, reported[j - 1])
            table[i, j] = running

    for a, b, c in combinations(range(size), 3):
        if table[a, b] == table[b, c]:
            return PropertyReport(passed=False, failed_property='I',
                                  witness=[a, b, c])
    for i, j in combinations(range(size), 2):
        if table[i, j] != delta(vs[i], vs[j]):
            return PropertyReport(passed=False, failed_property='II',
                                  witness=[i, j])
    for a, b, c, d in combinations(range(size), 4):
        if table[a, b] > table[b, c] and table[a, b] == table[c, d]:
            return PropertyReport(passed=False, failed_property='III',
                                  witness=[a, b, c, d])
    return PropertyReport(passed=True)


def is_realizable(pattern: Sequence[int]) -> bool:
    """True iff every contiguous window attains its maximum exactly once.

    Equivalently, two equal entries always have a larger entry between
    them; a stack of still-uncovered entries checks that in one pass.
    """
    if len(pattern) == 0:
        return False
    open_values: List[int] = []
    for item in pattern:
        while open_values and open_values[-1] < item:
            open_values.pop()
        if open_values and open_values[-1] == item:
            return False
        open_values.append(item)
    return True


def enumerate_realizable_patterns(length: int) -> Tuple[DeltaPattern, ...]:
    """All canonical realizable patterns of the given length, sorted.

    Backtracking over values 0..length-1 with two prunings: every window
    ending at the newest entry must have a unique maximum, and the ranks
    still missing below the current maximum must fit in the remaining
    positions (so every completed sequence is canonical).
    """
    if not 1 <= length <= MAX_PATTERN_LENGTH:
        raise ResourceError(
            f'Pattern length must be in 1..{MAX_PATTERN_LENGTH}, '
            f'got {length}')
    results = []
    prefix: List[int] = []
    used = [0] * length

    def window_ok():
        best, count = -1, 0
        for item in reversed(prefix):
            if item > best:
                best, count = item, 1
            elif item == best:
                count += 1
                if count > 1:
                    return False
        return True

    def extend():
        if len(prefix) == length:
            results.append(tuple(prefix))
            return
        for value in range(length):
            prefix.append(value)
            used[value] += 1
            top = max(prefix)
            missing = sum(1 for rank in range(top + 1) if not used[rank])
            if missing <= length - len(prefix) and window_ok():
                extend()
            used[value] -= 1
            prefix.pop()

    extend()
    return tuple(results)


def realize_raw(values: Sequence[int]) -> List[int]:
    """Increasing vertices whose delta sequence is exactly ``values``.

    Values are used directly as bit indices. Each step sets bit d and clears
    the bits below it; realizability guarantees bit d is still clear.
    """
    values = tuple(values)
    if not is_realizable(values) or min(values) < 0:
        raise RealizabilityError(f'Delta sequence {values} is not realizable')
    vertices = [0]
    for bit in values:
        vertices.append(((vertices[-1] >> bit) | 1) << bit)
    return vertices


def realize_pattern(pattern: Sequence[int]) -> List[int]:
    """Increasing vertex list whose canonical delta pattern is ``pattern``."""
    if not is_canonical(pattern):
        raise RealizabilityError(f'Pattern {tuple(pattern)} is not canonical')
    return realize_raw(pattern)


def subsequence_vertices(vs: Sequence[int], picks: Sequence[int]) -> List[int]:
    """Vertices whose consecutive deltas are exactly the picked deltas.

    ``vs`` must have a strictly monotone delta sequence and ``picks`` are
    sorted 0-based delta positions. For increasing deltas we take
    vs[p_1], vs[p_1+1], vs[p_2+1], ...; for decreasing deltas we take
    vs[p_1], vs[p_2], ..., vs[p_last], vs[p_last+1].
    """
    check_increasing(vs)
    raw = raw_deltas(vs)
    increasing = all(a < b for a, b in zip(raw, raw[1:]))
    decreasing = all(a > b for a, b in zip(raw, raw[1:]))
    if not (increasing or decreasing):
        raise PreconditionError(f'Delta sequence {raw} is not monotone')
    picks = list(picks)
    if not picks or picks != sorted(set(picks)) or picks[0] < 0 \
            or picks[-1] >= len(raw):
        raise PreconditionError(f'Invalid picks {picks} for {len(raw)} deltas')
    if increasing:
        return [vs[picks[0]]] + [vs[pos + 1] for pos in picks]
    return [vs[pos] for pos in picks] + [vs[picks[-1] + 1]]
