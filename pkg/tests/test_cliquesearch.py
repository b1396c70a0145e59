"""Tests for the integer-level 6-subset scan and blue clique search.
"""

from itertools import combinations

import numpy as np
import pytest

from stepup_ramsey.core.base_coloring import (
    PairColoring, generate_phi, random_pair_coloring)
from stepup_ramsey.core.cliquesearch import (
    BlueCliqueSearch, max_blue_clique, max_red_in_six, max_red_in_six_variant,
    scan_six_subsets)
from stepup_ramsey.core.errors import OrderError, PreconditionError, SizeError
from stepup_ramsey.core.models import Color, SearchBudget
from stepup_ramsey.core.proofcheck import check_six_point_claim, realize_case
from stepup_ramsey.core.stepup import QuadColoring, StepColoring

STAIRCASE_SIX = [0, 1, 3, 7, 15, 31]
SPARSE_PSI_REDS = {(0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 3, 4)}


def largest_blue_set(sc, vertices):
    """Size of the largest subset of ``vertices`` with no red 5-subset.

    Marks every red 5-subset as a bit mask, then spreads "has a red
    subset" upwards over the subset lattice one coordinate at a time.
    """
    vertices = list(vertices)
    width = len(vertices)
    clean = np.ones(1 << width, dtype=bool)
    for combo in combinations(range(width), 5):
        if sc.color([vertices[pos] for pos in combo]) == Color.RED:
            clean[sum(1 << pos for pos in combo)] = False
    for bit in range(width):
        pairs = clean.reshape(-1, 2, 1 << bit)
        pairs[:, 1, :] &= pairs[:, 0, :]
    masks = np.arange(1 << width)
    sizes = sum((masks >> bit) & 1 for bit in range(width))
    return int(sizes[clean].max())


class TestMaxRedInSix:
    """Scans over concrete vertex sets."""

    def test_full_four_bit_set(self, accepted_phi):
        sc = StepColoring(accepted_phi, 4)
        result = max_red_in_six(sc, range(16))
        assert result.max <= 3
        assert result.exact
        assert result.subsets_scanned == 8008
        assert sum(result.histogram.values()) == 8008
        assert not result.exceeds_threshold

    def test_symbolic_witness_has_three(self):
        witness = check_six_point_claim().witness
        assignment = {tuple(int(x) for x in label.split(',')): color
                      for label, color in witness.phi_assignment.items()}
        vertices, sc = realize_case(witness.pattern, assignment)
        result = max_red_in_six(sc, vertices)
        assert result.max == 3
        assert result.witness == vertices

    def test_control_rules_give_zero(self, always_blue):
        sc = StepColoring(random_pair_coloring(4, seed=1), 4,
                          always_blue.name)
        result = max_red_in_six(sc, range(16))
        assert result.max == 0
        assert result.histogram == {0: 8008}
        assert result.witness == [0, 1, 2, 3, 4, 5]

    def test_monotone_deltas_with_blue_phi(self):
        sc = StepColoring(PairColoring.constant(6, Color.BLUE), 6)
        result = max_red_in_six(sc, [0, 1, 3, 7, 15, 31, 63])
        assert result.max == 0

    @pytest.mark.parametrize('workers', [1, 4, 8])
    def test_workers_agree(self, workers):
        sc = StepColoring(random_pair_coloring(5, seed=17), 5)
        single = max_red_in_six(sc, range(24), SearchBudget(workers=1))
        spread = max_red_in_six(sc, range(24), SearchBudget(workers=workers))
        assert spread.model_dump(exclude={'seconds'}) == single.model_dump(
            exclude={'seconds'})

    def test_truncated(self, accepted_phi):
        sc = StepColoring(accepted_phi, 4)
        result = max_red_in_six(sc, range(16), SearchBudget(max_subsets=100))
        assert not result.exact
        assert result.subsets_scanned == 100

    def test_larger_sets_never_lower(self):
        sc = StepColoring(random_pair_coloring(4, seed=31), 4)
        small = max_red_in_six(sc, range(12)).max
        assert small <= max_red_in_six(sc, range(16)).max

    def test_bad_vertex_sets(self, accepted_phi):
        sc = StepColoring(accepted_phi, 4)
        with pytest.raises(SizeError):
            max_red_in_six(sc, [0, 1, 2, 3, 4])
        with pytest.raises(OrderError):
            max_red_in_six(sc, [0, 1, 2, 3, 4, 4, 5])
        with pytest.raises(OrderError):
            max_red_in_six(sc, [0, 1, 2, 3, 4, 16])

    def test_wrong_arity(self, accepted_phi):
        variant = StepColoring(QuadColoring.constant(4, Color.BLUE), 4,
                               'Variant65')
        with pytest.raises(PreconditionError):
            max_red_in_six(variant, range(16))
        with pytest.raises(PreconditionError):
            max_red_in_six_variant(StepColoring(accepted_phi, 4), range(16))


class TestVariantScan:

    def test_hypothesis_keeps_four(self):
        psi = QuadColoring.from_function(
            5, lambda quad: quad in SPARSE_PSI_REDS)
        assert psi.max_red_in_five() == 3
        sc = StepColoring(psi, 5, 'Variant65')
        result = max_red_in_six_variant(sc, range(20))
        assert result.threshold == 4
        assert result.max <= 4
        assert not result.exceeds_threshold

    def test_all_red_psi_exceeds(self):
        sc = StepColoring(QuadColoring.constant(5, Color.RED), 5, 'Variant65')
        result = max_red_in_six_variant(sc, STAIRCASE_SIX)
        assert result.max == 6
        assert result.exceeds_threshold

    def test_all_blue_psi_on_monotone_deltas(self):
        sc = StepColoring(QuadColoring.constant(5, Color.BLUE), 5,
                          'Variant65')
        assert max_red_in_six_variant(sc, STAIRCASE_SIX).max == 0

    def test_generic_scan_threshold(self):
        sc = StepColoring(QuadColoring.constant(5, Color.RED), 5, 'Variant65')
        assert scan_six_subsets(sc, STAIRCASE_SIX, threshold=6).max == 6
        assert not scan_six_subsets(sc, STAIRCASE_SIX,
                                    threshold=6).exceeds_threshold


class TestBlueClique:

    @staticmethod
    def all_blue(sc, clique):
        return all(sc.color(list(five)) == Color.BLUE
                   for five in combinations(sorted(clique), 5))

    def test_control_rules_take_everything(self, always_blue):
        sc = StepColoring(random_pair_coloring(4, seed=2), 4,
                          always_blue.name)
        result = max_blue_clique(sc, range(16))
        assert result.clique == list(range(16))
        assert result.exact

    def test_clique_is_blue_and_beats_greedy(self, accepted_phi):
        sc = StepColoring(accepted_phi, 4)
        search = BlueCliqueSearch(sc, range(16))
        greedy = search.greedy()
        result = search.run()
        assert result.exact
        assert result.size >= len(greedy)
        assert self.all_blue(sc, result.clique)

    def test_monotone_in_vertex_set(self, accepted_phi):
        sc = StepColoring(accepted_phi, 4)
        assert max_blue_clique(sc, range(12)).size <= max_blue_clique(
            sc, range(16)).size

    def test_node_budget(self, accepted_phi):
        sc = StepColoring(accepted_phi, 4)
        result = max_blue_clique(sc, range(16), SearchBudget(max_subsets=1))
        assert not result.exact
        assert self.all_blue(sc, result.clique)

    def test_too_few_vertices(self, accepted_phi):
        with pytest.raises(SizeError):
            max_blue_clique(StepColoring(accepted_phi, 4), [0, 1, 2, 3])

    @pytest.mark.parametrize('seed', range(4))
    def test_exact_on_random_phi(self, seed):
        sc = StepColoring(random_pair_coloring(4, seed=seed), 4)
        result = max_blue_clique(sc, range(16))
        assert result.exact
        assert result.size == largest_blue_set(sc, range(16))
        assert self.all_blue(sc, result.clique)

    @pytest.mark.parametrize('seed', range(3))
    def test_exact_on_random_psi(self, seed):
        sc = StepColoring(QuadColoring.random(5, seed=seed), 4, 'Variant65')
        result = max_blue_clique(sc, range(16))
        assert result.exact
        assert result.size == largest_blue_set(sc, range(16))
        assert self.all_blue(sc, result.clique)

    def test_exact_on_accepted_phi_five_bits(self):
        phi, _ = generate_phi(5, 5, seed=7)
        sc = StepColoring(phi, 5)
        vertices = list(range(0, 32, 2)) + [1, 7, 13, 31]
        result = max_blue_clique(sc, vertices)
        assert result.exact
        assert result.size == largest_blue_set(sc, sorted(vertices))
        assert self.all_blue(sc, result.clique)

    def test_exact_on_sparse_psi_five_bits(self):
        psi = QuadColoring.from_function(
            5, lambda quad: quad in SPARSE_PSI_REDS)
        sc = StepColoring(psi, 5, 'Variant65')
        result = max_blue_clique(sc, range(20))
        assert result.exact
        assert result.size == largest_blue_set(sc, range(20))
        assert self.all_blue(sc, result.clique)

    def test_oracle_on_known_sets(self, always_blue):
        sc = StepColoring(random_pair_coloring(4, seed=2), 4,
                          always_blue.name)
        assert largest_blue_set(sc, range(12)) == 12
        all_red = StepColoring(QuadColoring.constant(5, Color.RED), 5,
                               'Variant65')
        assert largest_blue_set(all_red, STAIRCASE_SIX) == 4
