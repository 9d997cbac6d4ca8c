"""
Unit tests for finite posets.

Core claims:
    - from_relations closes generating pairs reflexively and transitively
    - cycles and out-of-range pairs are rejected
    - ideals, filters and convex hulls agree with their definitions
    - ideal counting agrees with listing
    - linear extensions, longest chains and the spine on small posets
    - Mobius function values on chains and Boolean lattices
    - products, duals and isomorphism tests
"""

import pytest

from torclosed import bitset
from torclosed.errors import CycleError, NotComparable, PreconditionViolated, TorclosedError
from torclosed.poset import Poset


class TestConstruction:
    def test_transitive_closure(self, diamond):
        assert diamond.leq[0, 3]
        assert not diamond.leq[1, 2] and not diamond.leq[2, 1]

    def test_covers(self, diamond):
        assert sorted(diamond.cover_pairs) == [(0, 1), (0, 2), (1, 3), (2, 3)]
        assert diamond.upper_covers[0] == [1, 2]
        assert diamond.lower_covers[3] == [1, 2]

    def test_cycle_rejected(self):
        with pytest.raises(CycleError) as e:
            Poset.from_relations(3, [(0, 1), (1, 2), (2, 0)])
        assert set(e.value.cycle) == {0, 1, 2}

    def test_out_of_range(self):
        with pytest.raises(PreconditionViolated) as e:
            Poset.from_relations(2, [(0, 2)])
        assert isinstance(e.value, TorclosedError)

    def test_not_reflexive(self):
        with pytest.raises(PreconditionViolated):
            Poset([[False, True], [False, True]])

    def test_leq_is_read_only(self, diamond):
        with pytest.raises(ValueError):
            diamond.leq[1, 2] = True

    def test_minimum_and_maximum(self, diamond):
        assert diamond.minimum() == 0
        assert diamond.maximum() == 3
        assert Poset.antichain(2).minimum() is None


class TestSubsets:
    def test_principal_ideals(self, diamond):
        assert bitset.to_list(diamond.down[3]) == [0, 1, 2, 3]
        assert bitset.to_list(diamond.up[1]) == [1, 3]

    def test_ideal_and_filter(self, diamond):
        assert diamond.is_ideal(0b0011)
        assert not diamond.is_ideal(0b0010)
        assert diamond.is_filter(0b1100)

    def test_convex_violation(self):
        chain = Poset.chain(3)
        assert chain.convex_violation(0b101) == (0, 1, 2)
        assert chain.is_convex(0b011)

    def test_minimal_and_maximal(self, diamond):
        assert diamond.minimal_elements(0b0110) == [1, 2]
        assert diamond.maximal_elements(0b0111) == [1, 2]

    def test_all_ideals(self, diamond):
        ideals = list(diamond.all_ideals())
        assert len(ideals) == len(set(ideals)) == 6
        assert all(diamond.is_ideal(i) for i in ideals)

    def test_all_filters_complement_ideals(self, diamond):
        assert all(diamond.is_filter(f) for f in diamond.all_filters())

    @pytest.mark.parametrize('n', [0, 1, 4, 7])
    def test_count_ideals_chain(self, n):
        assert Poset.chain(n).count_ideals() == n + 1

    @pytest.mark.parametrize('n', [1, 3, 6])
    def test_count_ideals_antichain(self, n):
        assert Poset.antichain(n).count_ideals() == 2 ** n

    def test_count_ideals_agrees_with_listing(self, diamond):
        P = diamond.product(Poset.chain(3))
        assert P.count_ideals() == len(list(P.all_ideals()))

    def test_count_ideals_within(self, diamond):
        assert diamond.count_ideals(within=diamond.down[1]) == 3


class TestChains:
    def test_linear_extensions(self, diamond):
        assert sorted(diamond.linear_extensions()) == [(0, 1, 2, 3), (0, 2, 1, 3)]
        assert diamond.count_linear_extensions() == 2

    def test_linear_extension_is_compatible(self, diamond):
        order = diamond.linear_extension()
        position = {x: i for i, x in enumerate(order)}
        assert all(position[a] < position[b] for a, b in diamond.cover_pairs)

    def test_length_and_longest_chains(self, diamond):
        assert diamond.length == 2
        assert sorted(diamond.longest_chains()) == [(0, 1, 3), (0, 2, 3)]
        assert diamond.spine() == diamond.everything

    def test_spine_skips_short_side(self):
        P = Poset.from_relations(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
        assert bitset.to_list(P.spine()) == [0, 1, 2, 4]

    def test_is_chain(self, diamond):
        assert diamond.is_chain([0, 1, 3])
        assert not diamond.is_chain([0, 1, 2])


class TestMobius:
    def test_chain(self):
        P = Poset.chain(4)
        assert [P.mobius(0, y) for y in range(4)] == [1, -1, 0, 0]

    def test_boolean(self, diamond):
        assert diamond.mobius(0, 3) == 1
        assert diamond.mobius(0, 1) == -1

    def test_incomparable(self, diamond):
        with pytest.raises(NotComparable):
            diamond.mobius(1, 2)


class TestConstructions:
    def test_product_of_chains_is_diamond(self, diamond):
        square = Poset.chain(2).product(Poset.chain(2))
        assert square.is_isomorphic(diamond)
        assert square.names[3] == '(1,1)'

    def test_dual(self):
        dual = Poset.chain(3).dual()
        assert dual.minimum() == 2

    def test_subposet(self, diamond):
        sub = diamond.subposet([1, 2])
        assert sub.count_ideals() == 4

    def test_not_isomorphic(self, diamond):
        assert diamond.find_isomorphism(Poset.chain(4)) is None

    def test_isomorphism_preserves_order(self, diamond):
        relabelled = diamond.relabel([3, 2, 1, 0]).dual()
        mapping = diamond.find_isomorphism(relabelled)
        assert mapping is not None
        for a in range(4):
            for b in range(4):
                assert diamond.leq[a, b] == relabelled.leq[mapping[a], mapping[b]]
