"""Tests for base pair colorings, their two avoidance properties and bounds.
"""

import math
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np
import pytest

from stepup_ramsey.core import base_coloring
from stepup_ramsey.core.base_coloring import (
    BAD_4TUPLE_PROBABILITY, PairColoring, count_bad_4tuples,
    expected_counts, expected_counts_exact, find_abc_structure,
    find_bad4_free_nset, generate_phi, greedy_partial_steiner, is_bad_4tuple,
    random_pair_coloring)
from stepup_ramsey.core.errors import (
    OrderError, ResourceError, SearchExhausted, SizeError)
from stepup_ramsey.core.models import Color

BAD_PAIRS = [(0, 1), (1, 2), (1, 3)]


def naive_bad4_free(phi, n):
    for combo in combinations(range(phi.ground_size), n):
        if not any(is_bad_4tuple(phi, *quad)
                   for quad in combinations(combo, 4)):
            return list(combo)
    return None


def naive_abc_exists(phi, n):
    points = range(phi.ground_size)
    for a_set in combinations(points, n):
        rest = [x for x in points if x not in a_set]
        for b_set in combinations(rest, n):
            others = [x for x in rest if x not in b_set]
            for c_set in combinations(others, n):
                for image in permutations(c_set):
                    if all(phi.is_red(a, b) or not phi.is_red(a, c)
                           for a in a_set
                           for b, c in zip(b_set, image)):
                        return True
    return False


def check_abc_witness(phi, witness):
    for a in witness.a_set:
        for b in witness.b_set:
            assert phi.is_red(a, b) or not phi.is_red(a, witness.f[b])


class TestPairColoring:

    def test_single_pair(self):
        phi = random_pair_coloring(2, seed=1)
        assert phi.ground_size == 2
        assert phi.upper_bits().shape == (1,)

    def test_seeded_is_reproducible(self):
        assert random_pair_coloring(20, seed=4) == random_pair_coloring(
            20, seed=4)
        assert random_pair_coloring(20, seed=4).seed == 4

    @pytest.mark.parametrize('size', [2, 3, 17, 64])
    def test_symmetric_without_diagonal(self, size):
        phi = random_pair_coloring(size, seed=size)
        assert np.array_equal(phi.red, phi.red.T)
        assert not phi.red.diagonal().any()

    def test_red_fraction(self):
        phi = random_pair_coloring(64, seed=2024)
        pairs = math.comb(64, 2)
        reds = int(phi.upper_bits().sum())
        assert abs(reds - pairs / 2) <= 5 * math.sqrt(pairs) / 2

    def test_too_small(self):
        with pytest.raises(SizeError):
            random_pair_coloring(1, seed=0)
        with pytest.raises(SizeError):
            PairColoring.from_upper_bits(3, [1, 0])

    def test_not_symmetric(self):
        with pytest.raises(ValueError):
            PairColoring(np.array([[False, True], [False, False]]))

    def test_colors(self):
        phi = PairColoring.from_red_pairs(4, [(0, 2)])
        assert phi.color(0, 2) == Color.RED
        assert phi.color(2, 0) == Color.RED
        assert phi.color(1, 3) == Color.BLUE
        with pytest.raises(ValueError):
            phi.color(1, 1)

    def test_constant(self):
        assert PairColoring.constant(5, Color.RED).upper_bits().all()
        assert not PairColoring.constant(5, Color.BLUE).upper_bits().any()


class TestBad4Tuples:

    def test_exact_pattern(self):
        assert is_bad_4tuple(PairColoring.from_red_pairs(4, BAD_PAIRS),
                             0, 1, 2, 3)
        assert not is_bad_4tuple(PairColoring.constant(4, Color.RED),
                                 0, 1, 2, 3)
        assert not is_bad_4tuple(PairColoring.constant(4, Color.BLUE),
                                 0, 1, 2, 3)

    def test_order_matters(self):
        phi = PairColoring.from_red_pairs(5, [(1, 2), (2, 3), (2, 4)])
        assert is_bad_4tuple(phi, 1, 2, 3, 4)
        with pytest.raises(OrderError):
            is_bad_4tuple(phi, 2, 1, 3, 4)
        with pytest.raises(OrderError):
            is_bad_4tuple(phi, 1, 2, 3, 5)

    def test_count_matches_recount(self):
        phi = random_pair_coloring(12, seed=8)
        expected = 0
        for a, b, c, d in combinations(range(12), 4):
            reds = [phi.color(a, b), phi.color(b, c), phi.color(b, d)]
            blues = [phi.color(a, c), phi.color(a, d), phi.color(c, d)]
            if all(x == Color.RED for x in reds) and all(
                    x == Color.BLUE for x in blues):
                expected += 1
        assert count_bad_4tuples(phi) == expected

    def test_probability(self):
        assert BAD_4TUPLE_PROBABILITY == Fraction(1, 64)


class TestBad4FreeSearch:

    def test_all_red_has_no_bad_tuple(self):
        phi = PairColoring.constant(8, Color.RED)
        assert find_bad4_free_nset(phi, 4) == [0, 1, 2, 3]

    def test_small_n_is_always_free(self):
        phi = random_pair_coloring(9, seed=3)
        assert find_bad4_free_nset(phi, 3) == [0, 1, 2]

    def test_whole_set_bad(self):
        phi = PairColoring.from_red_pairs(4, BAD_PAIRS)
        assert find_bad4_free_nset(phi, 4) is None

    @pytest.mark.parametrize('seed', range(10))
    def test_matches_naive(self, seed):
        phi = random_pair_coloring(16, seed=seed)
        assert find_bad4_free_nset(phi, 5) == naive_bad4_free(phi, 5)

    @pytest.mark.parametrize('workers', [1, 4, 8])
    @pytest.mark.parametrize('seed', [99, 100])
    def test_workers_agree(self, seed, workers):
        phi = random_pair_coloring(14, seed=seed)
        assert find_bad4_free_nset(phi, 6, workers=workers) == \
            find_bad4_free_nset(phi, 6, workers=1)

    def test_budget(self):
        phi = random_pair_coloring(40, seed=0)
        with pytest.raises(ResourceError):
            find_bad4_free_nset(phi, 20, budget=1000)

    def test_bad_n(self):
        with pytest.raises(SizeError):
            find_bad4_free_nset(random_pair_coloring(5, seed=0), 6)


class TestAbcSearch:

    def test_all_red_violates(self):
        phi = PairColoring.constant(6, Color.RED)
        witness = find_abc_structure(phi, 2)
        assert witness is not None
        check_abc_witness(phi, witness)

    def test_n_one(self):
        phi = PairColoring.constant(3, Color.BLUE)
        witness = find_abc_structure(phi, 1)
        assert witness is not None
        assert len(witness.a_set) == 1

    def test_vacuous_when_too_few_points(self):
        phi = PairColoring.constant(8, Color.RED)
        assert find_abc_structure(phi, 3) is None

    def test_matches_naive(self):
        rng = np.random.default_rng(1234)
        for _ in range(100):
            phi = random_pair_coloring(9, rng=rng)
            witness = find_abc_structure(phi, 2)
            assert (witness is not None) == naive_abc_exists(phi, 2)
            if witness is not None:
                check_abc_witness(phi, witness)

    def test_budget(self):
        with pytest.raises(ResourceError):
            find_abc_structure(random_pair_coloring(30, seed=0), 6,
                               budget=10)


class TestGeneratePhi:

    @pytest.mark.parametrize('n', [4, 5])
    def test_accepts_tiny_instances(self, n):
        phi, log = generate_phi(n, n, seed=7)
        assert log.accepted
        assert log.attempts == log.rejected_bad4_free + log.rejected_abc + 1
        assert find_bad4_free_nset(phi, n) is None
        assert find_abc_structure(phi, n) is None

    def test_seed_is_reproducible(self):
        assert generate_phi(4, 4, seed=5)[0] == generate_phi(4, 4, seed=5)[0]

    def test_small_n_always_rejected(self):
        with pytest.raises(SearchExhausted) as err:
            generate_phi(2, 50, seed=1, max_attempts=20)
        log = err.value.log
        assert not log.accepted
        assert log.attempts == 20
        assert log.rejected_bad4_free == 20
        assert 'inconclusive' in log.note

    @pytest.mark.parametrize('n,m', [(4, 4), (5, 5)])
    def test_success_rate_over_seeds(self, n, m):
        """Small admissible instances are accepted for almost every seed."""
        accepted = 0
        for seed in range(10):
            try:
                phi, log = generate_phi(n, m, seed=seed)
            except SearchExhausted:
                continue
            assert log.accepted
            assert find_bad4_free_nset(phi, n) is None
            accepted += 1
        assert accepted >= 9

    def test_eight_points_never_all_bad(self):
        """Eight points always hold a good 4-set, so n=4 is hopeless."""
        with pytest.raises(SearchExhausted):
            generate_phi(4, 8, seed=0, max_attempts=50)

    def test_zero_attempts(self):
        with pytest.raises(SearchExhausted):
            generate_phi(4, 4, seed=0, max_attempts=0)


class TestSteiner:

    @pytest.mark.parametrize('n,count', [(4, 1), (5, 1), (7, 2)])
    def test_small_counts(self, n, count):
        assert greedy_partial_steiner(n).block_count == count

    def test_first_block(self):
        assert greedy_partial_steiner(9).blocks[0] == (0, 1, 2, 3)

    @pytest.mark.parametrize('n', list(range(4, 41)) + [100])
    def test_pairs_used_once(self, n):
        system = greedy_partial_steiner(n)
        seen = set()
        for block in system.blocks:
            assert len(set(block)) == 4
            assert all(0 <= x < n for x in block)
            for pair in combinations(sorted(block), 2):
                assert pair not in seen
                seen.add(pair)

    def test_hundred_points(self):
        assert greedy_partial_steiner(100).block_count >= 500

    def test_too_small(self):
        with pytest.raises(SizeError):
            greedy_partial_steiner(3)


class TestExpectations:

    def test_n_one(self):
        bounds = expected_counts(1, 10)
        assert bounds.steiner_blocks == 0
        assert bounds.abc_expectation == pytest.approx(750.0)
        assert bounds.good_set_bound == pytest.approx(10.0)
        abc, good = expected_counts_exact(1, 10)
        assert abc == Fraction(750)
        assert good == Fraction(10)

    @pytest.mark.parametrize('n,size', [(4, 6), (6, 8), (8, 20)])
    def test_log_space_matches_exact(self, n, size):
        bounds = expected_counts(n, size)
        abc, good = expected_counts_exact(n, size)
        assert bounds.abc_expectation == pytest.approx(float(abc), rel=1e-9)
        assert bounds.good_set_bound == pytest.approx(float(good), rel=1e-9)

    def test_good_bound_uses_steiner_blocks(self):
        bounds = expected_counts(7, 7)
        assert bounds.steiner_blocks == 2
        assert bounds.good_set_bound == pytest.approx((63 / 64) ** 2)

    def test_huge_values_stay_finite_in_log_space(self):
        bounds = expected_counts(40, 10**6)
        assert math.isfinite(bounds.log_abc_expectation)
        assert bounds.abc_expectation == math.inf or bounds.abc_expectation > 0


def test_fresh_seed_range():
    seed = base_coloring.fresh_seed()
    assert 0 <= seed < 2**63
