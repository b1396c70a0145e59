"""Refuting a purported blue clique of the main coloring.

Given m >= 128 n^4 vertices, the pipeline walks the delta sequence of the
clique and returns one of three certificates:

* NotABlueClique: a concrete red 5-subset;
* MonotoneNSet: n delta values, every 4 of which appear as the deltas of
  a blue monotone 5-tuple, so the base coloring has a bad-4-free n-set;
* AbcStructure: sets A, B, C of delta values and a bijection f: B -> C
  whose blue zigzag 5-tuples force "phi(a, b) red or phi(a, f(b)) blue".

verify_certificate replays any certificate from scratch.
"""

import logging
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from stepup_ramsey.core.base_coloring import PairColoring, is_bad_4tuple
from stepup_ramsey.core.delta_core import (
    check_increasing, raw_deltas, subsequence_vertices)
from stepup_ramsey.core.errors import (
    CertificateError, PatternError, PipelineError, PreconditionError,
    SizeError, StepupError)
from stepup_ramsey.core.models import (
    AbcPayload, Color, MonotonePayload, PeakResult, PeakSearchState,
    Realization, RuleMatch, ViolationCertificate)
from stepup_ramsey.core.stepup import StepColoring, classify_pattern


def _is_monotone_run(values: Sequence[int]) -> bool:
    pairs = list(zip(values, values[1:]))
    return (all(a < b for a, b in pairs) or all(a > b for a, b in pairs))


def find_monotone_run(seq: Sequence[int], n: int) -> Optional[int]:
    """First 0-based start of n consecutive strictly monotone entries."""
    if n < 1:
        raise SizeError(f'Need n >= 1, got {n}')
    for start in range(len(seq) - n + 1):
        if _is_monotone_run(seq[start:start + n]):
            return start
    return None


def local_extrema(seq: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Interior local maxima and minima indices of a sequence."""
    for left, right in zip(seq, seq[1:]):
        if left == right:
            raise PatternError(f'Adjacent equal entries in {list(seq)}')
    maxima, minima = [], []
    for pos in range(1, len(seq) - 1):
        if seq[pos - 1] < seq[pos] > seq[pos + 1]:
            maxima.append(pos)
        elif seq[pos - 1] > seq[pos] < seq[pos + 1]:
            minima.append(pos)
    return maxima, minima


def _state(s_set, t_set, sigma, tau) -> PeakSearchState:
    return PeakSearchState(S=sorted(s_set), T=sorted(t_set), sigma=sigma,
                           tau=tau, r=len(s_set) + len(t_set))


def _check_peak_state(vals, n, s_set, t_set, sigma, tau, rounds) -> None:
    size = len(vals)
    if len(s_set) + len(t_set) != rounds:
        raise PipelineError('|S| + |T| differs from the round count',
                            state={'S': s_set, 'T': t_set, 'r': rounds})
    if tau - sigma < 16 * n * n - 4 * n * rounds:
        raise PipelineError('Search interval shrank too fast',
                            state={'sigma': sigma, 'tau': tau, 'r': rounds})
    for s in s_set:
        if any(vals[s] < vals[pos] for pos in range(s + 1, min(tau, size))):
            raise PipelineError(f'S element {s} does not dominate up to tau',
                                state={'S': s_set, 'tau': tau})
    for t in t_set:
        if any(vals[t] < vals[pos] for pos in range(max(sigma + 1, 0), t)):
            raise PipelineError(f'T element {t} does not dominate from sigma',
                                state={'T': t_set, 'sigma': sigma})


def find_dominant_peak(vals: Sequence[int], n: int) -> PeakResult:
    """A peak beating everything within distance 4n, or a monotone chain.

    Each round takes the maximum k of the open interval (sigma, tau). If it
    is more than 4n away from both ends it is the peak. Otherwise it joins
    S (near sigma, becoming the new sigma) or T (near tau, becoming the new
    tau). A dominant peak always survives in the interval, so an exhausted
    interval means none exists. The chain is then read off the state after
    2n rounds: the n smallest indices of S (decreasing values) if S holds
    at least n of them, else of T (increasing values).
    """
    size = 16 * n * n
    if n < 1 or len(vals) != size:
        raise PreconditionError(f'Need exactly 16n^2 = {size} values')
    if len(set(vals)) != len(vals):
        raise PreconditionError('Values must be pairwise distinct')
    radius = 4 * n
    s_set: List[int] = []
    t_set: List[int] = []
    sigma, tau = -1, size
    states = [_state(s_set, t_set, sigma, tau)]
    snapshot = None
    while tau - sigma > 1:
        k = max(range(sigma + 1, tau), key=lambda pos: vals[pos])
        if k - sigma > radius and tau - k > radius:
            return PeakResult(kind='peak', index=k, states=states)
        if k - sigma <= radius:
            s_set.append(k)
            sigma = k
        else:
            t_set.append(k)
            tau = k
        rounds = len(s_set) + len(t_set)
        _check_peak_state(vals, n, s_set, t_set, sigma, tau, rounds)
        states.append(_state(s_set, t_set, sigma, tau))
        if rounds == 2 * n:
            snapshot = (list(s_set), list(t_set))
    if snapshot is None:
        raise PipelineError('Interval exhausted before 2n rounds',
                            state={'S': s_set, 'T': t_set})
    s_snap, t_snap = snapshot
    if len(s_snap) >= n:
        return PeakResult(kind='chain', chain=sorted(s_snap)[:n],
                          direction='decreasing', states=states)
    return PeakResult(kind='chain', chain=sorted(t_snap)[:n],
                      direction='increasing', states=states)


class RefutationPipeline:
    """Stateful walk over the delta sequence of one vertex list.

    run() does not check the 128 n^4 size bound; build_abc_witness does.
    Shorter lists may still be refuted, or fail with SizeError at the
    maxima stage.
    """

    def __init__(self, vs: Sequence[int], sc: StepColoring, n: int):
        self.vs = list(vs)
        self.sc = sc
        self.n = n
        self.d = raw_deltas(self.vs)

    def certificate(self, kind, **payload) -> ViolationCertificate:
        logging.info('Blue clique refuted by a %s certificate', kind)
        return ViolationCertificate(
            kind=kind, n=self.n, bit_width=self.sc.bit_width,
            rule_set=self.sc.rule_set.name, clique=self.vs, **payload)

    def not_blue(self, five) -> ViolationCertificate:
        return self.certificate('NotABlueClique', red_tuple=list(five))

    def realize(self, key, five, expected) -> Tuple[Realization, bool]:
        """Realization record for ``five`` and whether it is blue."""
        deltas = list(raw_deltas(five))
        if deltas != list(expected):
            raise PipelineError(
                f'Vertices {five} have deltas {deltas}, expected {expected}',
                state={'key': list(key)})
        blue = self.sc.color(five) == Color.BLUE
        return Realization(key=list(key), vertices=list(five),
                           deltas=deltas), blue

    def monotone(self, values: List[int], direction: str,
                 picker: Callable[[Tuple[int, ...]], List[int]]
                 ) -> ViolationCertificate:
        """MonotoneNSet over chain positions, or NotABlueClique."""
        realizations = []
        for combo in combinations(range(len(values)), 4):
            key = [values[pos] for pos in combo]
            record, blue = self.realize(key, picker(combo), key)
            if not blue:
                return self.not_blue(record.vertices)
            realizations.append(record)
        return self.certificate('MonotoneNSet', monotone=MonotonePayload(
            values=values, direction=direction, realizations=realizations))

    def equal_maxima(self) -> Optional[ViolationCertificate]:
        d = self.d
        maxima, _ = local_extrema(d)
        seen: Dict[int, int] = {}
        for pos in maxima:
            first = seen.get(d[pos])
            if first is None:
                seen[d[pos]] = pos
                continue
            if max(d[first + 1:pos]) <= d[pos]:
                raise PipelineError(
                    f'Equal local maxima at {first} and {pos} with nothing '
                    f'larger between', state={'positions': [first, pos]})
            vs = self.vs
            five = [vs[first], vs[first + 1], vs[pos - 1], vs[pos],
                    vs[pos + 1]]
            if self.sc.color(five) != Color.RED:
                raise PipelineError(f'Equal-ends tuple {five} is not red',
                                    state={'positions': [first, pos]})
            return self.not_blue(five)
        return None

    def chain_picker(self, positions: List[int], direction: str):
        """Vertex 5-tuples for a monotone chain of delta positions."""
        vs = self.vs

        def pick(combo):
            idx = [positions[pos] for pos in combo]
            if direction == 'increasing':
                return [vs[idx[0]]] + [vs[pos + 1] for pos in idx]
            return [vs[pos] for pos in idx] + [vs[idx[-1] + 1]]

        return pick

    def run(self) -> ViolationCertificate:
        n, d = self.n, self.d
        found = self.equal_maxima()
        if found is not None:
            return found

        start = find_monotone_run(d, n)
        if start is not None:
            window = self.vs[start:start + n + 1]
            values = list(d[start:start + n])
            direction = ('increasing' if n == 1 or values[0] < values[1]
                         else 'decreasing')
            return self.monotone(
                values, direction,
                lambda combo: subsequence_vertices(window, list(combo)))

        maxima, _ = local_extrema(d)
        wanted = 32 * n ** 3
        if len(maxima) < wanted:
            raise SizeError(f'Only {len(maxima)} local maxima, need {wanted}')
        maxima = maxima[:wanted]
        peaks = [d[pos] for pos in maxima]
        start = find_monotone_run(peaks, n)
        if start is not None:
            positions = maxima[start:start + n]
            values = peaks[start:start + n]
            direction = 'increasing' if values[0] < values[1] else 'decreasing'
            return self.monotone(values, direction,
                                 self.chain_picker(positions, direction))

        ext_max, ext_min = local_extrema(peaks)
        extrema = sorted(ext_max + ext_min)
        if not ext_max:
            raise SizeError('Maxima sequence has no local maximum')
        first = extrema.index(ext_max[0])
        wanted = 16 * n * n
        window = extrema[first:first + wanted]
        if len(window) < wanted:
            raise SizeError(f'Only {len(window)} consecutive extrema of the '
                            f'maxima, need {wanted}')
        positions = [maxima[pos] for pos in window]
        vals = [d[pos] for pos in positions]
        peak = find_dominant_peak(vals, n)
        if peak.kind == 'chain':
            chain_positions = [positions[pos] for pos in peak.chain]
            values = [vals[pos] for pos in peak.chain]
            return self.monotone(
                values, peak.direction,
                self.chain_picker(chain_positions, peak.direction))
        if peak.index % 2:
            raise PipelineError(f'Dominant peak at odd index {peak.index}',
                                state={'vals': vals})
        return abc_stage(self.vs, self.sc, n, positions, peak.index)


def build_abc_witness(vs: Sequence[int], sc: StepColoring,
                      n: int) -> ViolationCertificate:
    """Refute ``vs`` as a blue clique of ``sc`` (needs |vs| >= 128 n^4)."""
    if n < 1:
        raise SizeError(f'Need n >= 1, got {n}')
    if sc.rule_set.name != 'Main64':
        raise PreconditionError('The refutation pipeline needs Main64 rules')
    check_increasing(vs)
    if len(vs) < 128 * n ** 4:
        raise SizeError(f'Need at least 128 n^4 = {128 * n ** 4} vertices, '
                        f'got {len(vs)}')
    sc.check_vertices([vs[0], vs[-1]], 2)
    return RefutationPipeline(vs, sc, n).run()


def abc_stage(vs: Sequence[int], sc: StepColoring, n: int,
              positions: Sequence[int], k: int) -> ViolationCertificate:
    """Build the A/B/C certificate around a dominant peak.

    ``positions`` are delta positions of consecutive extrema (alternating,
    starting at a maximum) and ``k`` indexes a peak among them that beats
    every value within distance 4n. Between consecutive positions no delta
    may exceed both endpoints.
    """
    check_increasing(vs)
    d = raw_deltas(vs)
    positions = list(positions)
    radius = 4 * n
    if positions != sorted(set(positions)) or positions[-1] >= len(d):
        raise PreconditionError('Extremum positions must be increasing '
                                'delta positions')
    if k - radius < 0 or k + radius >= len(positions):
        raise PreconditionError(f'Peak {k} too close to the ends')
    vals = [d[pos] for pos in positions]
    if any(vals[pos] >= vals[k] for pos in range(k - radius, k + radius + 1)
           if pos != k):
        raise PreconditionError(f'Index {k} is not a dominant peak')

    left = [k - off for off in range(1, radius, 2)]
    right = [k + off for off in range(1, radius, 2)]
    gamma = sorted(left + right, key=lambda pos: vals[pos])
    low = set(gamma[:2 * n])

    def smallest(idx):
        return sorted(idx, key=lambda pos: vals[pos])[:n]

    if len(low.intersection(left)) >= n:
        orientation = 'left'
        a_idx = smallest(low.intersection(left))
        b_idx = smallest(set(right) - low)
        partner = {b: b + 1 for b in b_idx}
    else:
        orientation = 'right'
        a_idx = smallest(low.intersection(right))
        b_idx = smallest(set(left) - low)
        partner = {b: b - 1 for b in b_idx}

    pipeline = RefutationPipeline(vs, sc, n)
    peak_value = vals[k]
    realizations = []
    for a in a_idx:
        for b in b_idx:
            c = partner[b]
            if orientation == 'left':
                five = [vs[positions[a]], vs[positions[a] + 1],
                        vs[positions[b]], vs[positions[b] + 1],
                        vs[positions[c] + 1]]
                expected = [vals[a], peak_value, vals[b], vals[c]]
            else:
                five = [vs[positions[c]], vs[positions[b]],
                        vs[positions[b] + 1], vs[positions[a]],
                        vs[positions[a] + 1]]
                expected = [vals[c], vals[b], peak_value, vals[a]]
            record, blue = pipeline.realize([vals[a], vals[b]], five,
                                            expected)
            if not blue:
                return pipeline.not_blue(five)
            realizations.append(record)
    payload = AbcPayload(
        A=sorted(vals[a] for a in a_idx), B=sorted(vals[b] for b in b_idx),
        C=sorted(vals[partner[b]] for b in b_idx),
        f={vals[b]: vals[partner[b]] for b in b_idx},
        peak=peak_value, orientation=orientation, realizations=realizations)
    return pipeline.certificate('AbcStructure', abc=payload)


def _reject(reason, *args) -> bool:
    logging.info('Certificate rejected: ' + reason, *args)
    return False


def _verify_monotone(cert, phi, sc) -> bool:
    payload = cert.monotone
    values = payload.values
    if len(values) != cert.n or len(set(values)) != len(values):
        return _reject('expected %s distinct values', cert.n)
    ordered = sorted(values)
    if payload.direction == 'decreasing':
        ordered.reverse()
    if values != ordered:
        return _reject('values %s are not %s', values, payload.direction)
    by_key = {tuple(item.key): item for item in payload.realizations}
    for combo in combinations(values, 4):
        item = by_key.get(combo)
        if item is None:
            return _reject('no realization for %s', combo)
        if list(raw_deltas(item.vertices)) != list(combo):
            return _reject('vertices %s do not realize %s', item.vertices,
                           combo)
        if sc.color(item.vertices) != Color.BLUE:
            return _reject('realization %s is red', item.vertices)
    for quad in combinations(sorted(values), 4):
        if is_bad_4tuple(phi, *quad):
            return _reject('values contain the bad 4-tuple %s', quad)
    return True


def _verify_abc(cert, phi, sc) -> bool:
    payload = cert.abc
    a_set, b_set, c_set, f = (payload.a_set, payload.b_set, payload.c_set,
                              payload.f)
    n = cert.n
    if not len(a_set) == len(b_set) == len(c_set) == n:
        return _reject('A, B and C must all have %s elements', n)
    if len(set(a_set) | set(b_set) | set(c_set)) != 3 * n:
        return _reject('A, B and C are not pairwise disjoint')
    if sorted(f) != sorted(b_set) or sorted(f.values()) != sorted(c_set):
        return _reject('f is not a bijection from B onto C')
    if payload.orientation == 'left':
        shape = RuleMatch.ZIGZAG_RULE3
    else:
        shape = RuleMatch.ZIGZAG_RULE2
    by_key = {tuple(item.key): item for item in payload.realizations}
    for a in a_set:
        for b in b_set:
            item = by_key.get((a, b))
            if item is None:
                return _reject('no realization for (%s, %s)', a, b)
            if payload.orientation == 'left':
                expected = [a, payload.peak, b, f[b]]
            else:
                expected = [f[b], b, payload.peak, a]
            deltas = list(raw_deltas(item.vertices))
            if deltas != expected:
                return _reject('vertices %s have deltas %s, expected %s',
                               item.vertices, deltas, expected)
            if classify_pattern(deltas) != shape:
                return _reject('deltas %s do not have shape %s', deltas,
                               shape.value)
            if sc.color(item.vertices) != Color.BLUE:
                return _reject('realization %s is red', item.vertices)
    for a in a_set:
        for b in b_set:
            if not (phi.is_red(a, b) or not phi.is_red(a, f[b])):
                return _reject('phi(%s, %s) blue and phi(%s, %s) red', a, b,
                               a, f[b])
    return True


def verify_certificate(cert: ViolationCertificate, phi: PairColoring,
                       sc: StepColoring, vs: Sequence[int]) -> bool:
    """Replay every claim of a certificate against phi and the coloring.

    Raises CertificateError when the certificate uses vertices outside
    ``vs``; every other failure returns False.
    """
    members = set(vs)
    dangling = sorted(set(cert.referenced_vertices()) - members)
    if dangling:
        raise CertificateError(
            f'Certificate references vertices outside the clique: '
            f'{dangling[:5]}')
    try:
        if cert.kind == 'NotABlueClique':
            if sc.color(cert.red_tuple) == Color.RED:
                return True
            return _reject('tuple %s is blue', cert.red_tuple)
        if cert.kind == 'MonotoneNSet':
            return _verify_monotone(cert, phi, sc)
        return _verify_abc(cert, phi, sc)
    except (StepupError, IndexError) as exc:
        return _reject('%s', exc)
