"""
Unit tests for the higher Auslander lattices L_n^d and their Nakayama quotients.

Core claims:
    - os_n^d and its order ideal counts, including the transposition identity
    - L_n^1 is the Tamari lattice, L_3^d follows d + 3 + 5 * 2^d
    - irreducible, length and spine counts agree with the closed forms
    - the closure model and the direct component-wise model give the same sets
    - the n = 4 closed form reproduces the Tamari count and flags incomparable endpoints
    - Kupisch series, their sequences K, and the Nakayama restriction/quotient models
"""

import pytest

from torclosed.errors import InvalidKupisch, NotationUnresolved
from torclosed.higher import a005157, auslander_counts, auslander_lattice, auslander_models_agree, \
    check_kupisch_series, count_os_ideals, direct_auslander_sets, extension_condition, ground_tuples, growth_data, \
    jirr_formula, kupisch_to_k, l3d_formula, l4d_formula, l4d_terms, mirr_formula, nakayama_lattice, \
    nakayama_restriction, os_identities, os_isomorphism, os_poset, tuple_name, valid_kupisch_series


class TestOsPoset:
    def test_elements(self):
        os = os_poset(3, 2)
        assert len(os) == 6
        assert os.elements[:3] == [(0, 0), (0, 1), (0, 2)]
        assert os.diagonal(2) == os.index[(2, 2)]

    def test_order(self):
        os = os_poset(3, 2)
        P = os.poset
        assert P.leq[os.index[(0, 1)], os.index[(1, 2)]]
        assert not P.leq[os.index[(0, 2)], os.index[(1, 1)]]

    def test_ideals(self):
        assert count_os_ideals(3, 2) == 8

    @pytest.mark.parametrize('d, expected', [(1, 5), (2, 16), (3, 66), (4, 352)])
    def test_ideals_of_os4(self, d, expected):
        assert count_os_ideals(4, d) == expected
        assert a005157(d + 1) == expected

    def test_identities(self):
        failing = [i.name for i in os_identities(bound_d=3, max_sum=6) if not i.holds]
        assert not failing

    @pytest.mark.slow
    def test_identities_on_the_full_range(self):
        failing = [i.name for i in os_identities(bound_d=6, max_sum=9) if not i.holds]
        assert not failing

    @pytest.mark.parametrize('n, d', [(3, 2), (2, 3), (4, 1)])
    def test_isomorphism(self, n, d):
        mapping = os_isomorphism(n, d)
        assert mapping is not None
        left, right = os_poset(n, d), os_poset(d + 1, n - 1)
        for a in left.elements:
            for b in left.elements:
                assert left.poset.leq[left.index[a], left.index[b]] == \
                    right.poset.leq[right.index[mapping[a]], right.index[mapping[b]]]

    def test_mask(self):
        os = os_poset(3, 2)
        assert bin(os.mask(lambda t: t[0] == t[1])).count('1') == 3

    def test_tuple_name(self):
        assert tuple_name((0, 1, 3)) == '013'
        assert tuple_name((0, 10)) == '0,10'


class TestAuslanderLattices:
    @pytest.mark.parametrize('n, expected', [(1, 2), (2, 5), (3, 14)])
    def test_d_one_is_tamari(self, n, expected):
        assert len(auslander_lattice(n, 1)) == expected

    @pytest.mark.parametrize('d', [1, 2, *(pytest.param(d, marks=pytest.mark.slow) for d in range(3, 7))])
    def test_n_three(self, d):
        assert len(auslander_lattice(3, d)) == l3d_formula(d)

    def test_l3d_values(self):
        assert [l3d_formula(d) for d in range(1, 7)] == [14, 25, 46, 87, 168, 329]

    def test_ground_tuples(self):
        ptl = auslander_lattice(2, 1)
        assert ground_tuples(ptl, 1) == [(1, 1), (0, 1), (0, 0)]

    def test_formulas(self):
        assert jirr_formula(3, 2) == 10
        assert mirr_formula(3, 1) == 6
        assert mirr_formula(3, 2) == 11

    @pytest.mark.parametrize('n, d', [(2, 2), (3, 1), (3, 2)])
    def test_counts(self, n, d):
        counts = auslander_counts(n, d, auslander_lattice(n, d))
        assert counts.disagreements() == []

    @pytest.mark.slow
    @pytest.mark.parametrize('n, d', [(2, 1), (2, 3), (2, 4), (3, 3), (4, 1)])
    def test_counts_on_a_wider_range(self, n, d):
        assert auslander_counts(n, d, auslander_lattice(n, d)).disagreements() == []

    def test_counts_without_lattice(self):
        counts = auslander_counts(3, 2)
        assert counts.size is None
        assert counts.disagreements() == []
        assert not counts.sd_formula

    @pytest.mark.parametrize('n, d', [(2, 2), (3, 1), (3, 2)])
    def test_models_agree(self, n, d):
        assert auslander_models_agree(n, d)

    def test_direct_model_size(self):
        assert len(direct_auslander_sets(3, 2)) == 25

    def test_extension_condition(self):
        verdict = extension_condition(frozenset({(0, 0), (1, 1)}), 1)
        assert not verdict
        assert verdict.witness == ((0, 0), (1, 1))
        assert extension_condition(frozenset({(0, 0), (1, 1), (0, 1)}), 1)


class TestFourComponents:
    def test_d_one(self):
        assert l4d_formula(1) == 42

    @pytest.mark.slow
    def test_d_two_matches_enumeration(self):
        assert l4d_formula(2) == 140 == len(auslander_lattice(4, 2))

    def test_strict_flags_incomparable_endpoints(self):
        with pytest.raises(NotationUnresolved) as e:
            l4d_terms(1, strict=True)
        assert e.value.name == 'K1'
        assert e.value.endpoints == ('22', '13')


class TestGrowth:
    def test_rows(self):
        rows = list(growth_data(3, 2))
        assert [(r.d, r.size, r.ideals) for r in rows] == [(1, 14, 8), (2, 25, 16)]
        assert rows[0].ratio == 1.75
        assert rows[1].line().startswith('n=3 d=2: |L|=25')


class TestKupisch:
    def test_valid_series(self):
        assert list(valid_kupisch_series(3)) == [(1, 2, 2), (1, 2, 3)]
        assert len(list(valid_kupisch_series(4))) == 5

    @pytest.mark.parametrize('l', [(), (2, 2), (1, 1), (1, 3), (1, 2, 4)])
    def test_invalid_series(self, l):
        with pytest.raises(InvalidKupisch):
            check_kupisch_series(l)

    def test_to_k(self):
        assert kupisch_to_k((1, 2, 3)) == (0, 0, 0)
        assert kupisch_to_k((1, 2, 2)) == (0, 0, 1)


class TestNakayama:
    def test_hereditary_series_is_everything(self):
        nak = nakayama_lattice((1, 2, 3), 1)
        assert nak.restriction.n == nak.quotient.n == 14

    @pytest.mark.parametrize('l, d', [((1, 2, 2), 1), ((1, 2, 2), 2), ((1, 2, 2, 3), 1)])
    def test_models_are_isomorphic(self, l, d):
        nak = nakayama_lattice(l, d)
        assert nak.restriction.n == nak.quotient.n
        assert nak.restriction.n < len(auslander_lattice(len(l), d))
        assert nak.quotient.is_jsd()

    def test_restriction_traces(self):
        traces, restricted = nakayama_restriction((1, 2, 2), 1)
        assert len(traces) == restricted.n
        assert traces[0] == 0
