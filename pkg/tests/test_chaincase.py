"""
Unit tests for the word model of Tam(C_N, phi).

Core claims:
    - phi must be a strictly increasing chain inside 0..N-1
    - the identity chain gives the Tamari lattices, counted by Catalan numbers
    - words are an order isomorphic model of the torclosed sets
    - the slope picture and the word conditions accept the same words
    - Tamari lattices are semidistributive, extremal, left modular and congruence uniform
"""

import pytest

from torclosed.chaincase import PalloWord, build_chain_tamari, chain_components, check_phi, check_slope_agreement, \
    check_word_model, is_torclosed_word, pallo_tamari, set_of, slope_check, slope_phi, word_of, words
from torclosed.congruence import certify_congruence_normal
from torclosed.errors import PreconditionViolated
from torclosed.ptamari import build_lattice


class TestPhi:
    @pytest.mark.parametrize('N, phi', [(3, ()), (3, (0, 3)), (3, (1, 1)), (3, (2, 1)), (3, (-1, 0))])
    def test_rejected(self, N, phi):
        with pytest.raises(PreconditionViolated):
            check_phi(N, phi)

    def test_accepted(self):
        check_phi(4, (1, 3))


class TestWords:
    def test_str(self):
        assert str(PalloWord((0, 1, 2), (0, 1, 2))) == '012'
        assert str(PalloWord((0, 10), (0, 12))) == '0 10'

    def test_length_mismatch(self):
        with pytest.raises(PreconditionViolated):
            PalloWord((0, 1), (0,))

    def test_negative_entry(self):
        with pytest.raises(PreconditionViolated):
            PalloWord((-1,), (0,))

    def test_order(self):
        assert PalloWord((0, 1, 1), (0, 1, 2)) <= PalloWord((0, 2, 1), (0, 1, 2))
        assert not PalloWord((1, 0, 0), (0, 1, 2)) <= PalloWord((0, 2, 3), (0, 1, 2))

    def test_identity_chain(self):
        found = list(words(3, (0, 1, 2)))
        assert len(found) == 14
        assert found[0].u == (0, 0, 0)
        assert found[-1].u == (1, 2, 3)
        assert all(is_torclosed_word(w) for w in found)

    def test_extension_is_forced(self):
        assert not is_torclosed_word(PalloWord((1, 1, 0), (0, 1, 2)))
        assert is_torclosed_word(PalloWord((1, 2, 0), (0, 1, 2)))

    @pytest.mark.parametrize('n, expected', [(1, 2), (2, 5), (3, 14), (4, 42)])
    def test_catalan(self, n, expected):
        assert pallo_tamari(n).n == expected

    def test_pallo_needs_positive_n(self):
        with pytest.raises(PreconditionViolated):
            pallo_tamari(0)

    def test_chain_not_starting_at_zero(self):
        chain_case = build_chain_tamari(3, (1, 2))
        assert chain_case.words[0].u == (0, 0)
        assert chain_case.lattice.n == len(chain_case.words)


class TestWordModel:
    @pytest.mark.parametrize('N, phi', [(3, (0, 1, 2)), (4, (0, 2, 3)), (4, (0, 3)), (5, (0, 1, 4))])
    def test_isomorphism(self, N, phi):
        assert check_word_model(N, phi)

    def test_round_trip(self):
        cm = chain_components(4, (0, 2, 3))
        for F in build_lattice(cm).elements:
            assert set_of(cm, word_of(cm, F)) == F


class TestSlopes:
    def test_slope_chain(self):
        assert slope_phi(3, 2) == (1, 3, 5)

    @pytest.mark.parametrize('n, p', [(3, 1), (3, 2), (2, 3)])
    def test_agreement(self, n, p):
        assert check_slope_agreement(n, p)

    def test_too_tall(self):
        assert not slope_check(PalloWord((3, 0), slope_phi(2, 2)), 2)

    def test_wrong_chain(self):
        with pytest.raises(PreconditionViolated):
            slope_check(PalloWord((0, 0), (0, 1)), 2)

    def test_slope_must_be_positive(self):
        with pytest.raises(PreconditionViolated):
            slope_check(PalloWord((0,), (0,)), 0)


class TestTamari:
    @pytest.mark.parametrize('n', [1, 2, 3, pytest.param(4, marks=pytest.mark.slow)])
    def test_properties(self, n):
        L = pallo_tamari(n)
        assert L.is_sd()
        assert L.extremality().extremal
        assert L.is_left_modular()
        found = certify_congruence_normal(L)
        assert found is not None and found.uniform

    @pytest.mark.parametrize('n', [1, 2, 3, 4, pytest.param(5, marks=pytest.mark.slow)])
    def test_both_constructions_agree(self, n):
        assert check_word_model(n, tuple(range(n)))

    @pytest.mark.slow
    @pytest.mark.parametrize('n, expected', [(5, 132), (6, 429)])
    def test_larger_catalan(self, n, expected):
        assert pallo_tamari(n).n == expected
