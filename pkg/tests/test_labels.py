"""
Unit tests for chain-induced edge labellings.

Core claims:
    - chains must run from bottom to top through strictly increasing elements
    - gamma_2 = gamma_3 <= gamma_1 = gamma_4 along any maximal chain
    - gamma_2 = gamma_4 exactly when the chain is left modular
    - the labelling of a left modular chain is an EL-labelling
    - Mobius values come out of counting decreasing maximal chains
    - the identities hold on every maximal chain of every lattice with at most eight elements
"""

import random

import pytest
from conftest import maximal_chains, random_maximal_chain

from torclosed.congruence import random_doubling_script, replay
from torclosed.errors import NotComparable, PreconditionViolated
from torclosed.labels import ChainContext, EdgeLabelling, decreasing_chain_counts, gamma, gamma_all, \
    is_el_labelling, mobius_via_chains, verify_labelling_identities
from torclosed.lattice import Lattice


class TestChainContext:
    def test_must_start_at_bottom(self, n5):
        with pytest.raises(PreconditionViolated):
            ChainContext(n5, [1, 2, 4])

    def test_must_increase(self, n5):
        with pytest.raises(PreconditionViolated):
            ChainContext(n5, [0, 3, 2, 4])

    def test_delta_and_beta(self, n5):
        ctx = ChainContext(n5, [0, 1, 2, 4])
        assert ctx.delta == {1: 1, 2: 2, 3: 3}
        assert ctx.beta == {1: 2, 2: 3, 3: 1}


class TestGammas:
    def test_unknown_index(self, n5):
        with pytest.raises(ValueError):
            gamma(ChainContext(n5, [0, 1, 2, 4]), 5)

    def test_left_modular_chain_on_n5(self, n5):
        report = verify_labelling_identities(ChainContext(n5, [0, 1, 2, 4]))
        assert report.consistent
        assert report.equal_24 and report.chain_left_modular

    def test_short_chain_on_n5(self, n5):
        report = verify_labelling_identities(ChainContext(n5, [0, 3, 4]))
        assert report.consistent
        assert report.equal_23 and report.equal_14 and report.two_below_one
        assert not report.equal_24
        assert not report.chain_left_modular

    def test_labels_on_n5(self, n5):
        g = gamma(ChainContext(n5, [0, 1, 2, 4]), 1)
        assert g[(0, 1)] == 1
        assert g[(1, 2)] == 2
        assert g[(0, 3)] == 3
        assert g[(3, 4)] == 1

    def test_all_four_agree_on_boolean(self, b3):
        ctx = ChainContext(b3, [0, 1, 3, 7])
        g = gamma_all(ctx)
        assert all(not g[1].differences(g[k]) for k in (2, 3, 4))

    def test_hexagon_chain_is_not_left_modular(self):
        L = Lattice.from_relations(6, [(0, 1), (1, 3), (3, 5), (0, 2), (2, 4), (4, 5)])
        report = verify_labelling_identities(ChainContext(L, [0, 1, 3, 5]))
        assert report.consistent
        assert not report.equal_24


class TestEL:
    def test_left_modular_chain_gives_el(self, n5):
        assert is_el_labelling(n5, gamma(ChainContext(n5, [0, 1, 2, 4]), 1))

    def test_m3(self, m3):
        lab = gamma(ChainContext(m3, [0, 1, 4]), 1)
        assert lab[(1, 4)] == 2
        assert lab[(2, 4)] == 1
        assert is_el_labelling(m3, lab)

    def test_constant_labelling_is_not_el(self, b2):
        lab = EdgeLabelling({edge: 1 for edge in b2.cover_pairs})
        verdict = is_el_labelling(b2, lab)
        assert not verdict
        assert verdict.witness == (0, 3)


class TestMobius:
    def test_m3(self, m3):
        lab = gamma(ChainContext(m3, [0, 1, 4]), 1)
        assert decreasing_chain_counts(m3, lab, 0, 4) == (2, 0)
        assert mobius_via_chains(m3, lab, 0, 4) == m3.base.mobius(0, 4) == 2

    def test_every_interval_of_n5(self, n5):
        lab = gamma(ChainContext(n5, [0, 1, 2, 4]), 1)
        for x in range(n5.n):
            for y in range(n5.n):
                if n5.leq[x, y]:
                    assert mobius_via_chains(n5, lab, x, y) == n5.base.mobius(x, y)

    def test_incomparable(self, n5):
        lab = gamma(ChainContext(n5, [0, 1, 2, 4]), 1)
        with pytest.raises(NotComparable):
            decreasing_chain_counts(n5, lab, 2, 3)


@pytest.mark.slow
class TestLabellingSweeps:
    def test_every_maximal_chain_of_small_lattices(self, lattices_up_to_eight):
        checked = 0
        for L in lattices_up_to_eight:
            for chain in maximal_chains(L):
                report = verify_labelling_identities(ChainContext(L, chain))
                assert report.consistent, (L.cover_pairs, chain, report.violations)
                checked += 1
        assert checked > 900

    def test_random_doubling_lattices(self):
        rng = random.Random(11)
        for _ in range(500):
            L = replay(random_doubling_script(rng, steps=6, max_size=40))
            chain = random_maximal_chain(rng, L)
            report = verify_labelling_identities(ChainContext(L, chain))
            assert report.consistent, (L.cover_pairs, chain, report.violations)
