"""
Unit tests for settings and command line value formats.

Core claims:
    - settings come from TORCLOSED_* variables, flags left unset keep them
    - a malformed variable stops the program with exit code 1
    - list, tuple and word formats parse or raise ParseError
"""

import pytest

from torclosed.config import DEFAULTS, Settings
from torclosed.errors import ParseError
from torclosed.parsing import parse_int_list, parse_name_list, parse_os_tuple, parse_word


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ('SEED', 'BUDGET', 'CERTIFY_BOUND', 'VERIFY_LIMIT'):
            monkeypatch.delenv(f'TORCLOSED_{name}', raising=False)
        assert Settings.from_env() == DEFAULTS

    def test_from_env(self, monkeypatch):
        monkeypatch.setenv('TORCLOSED_SEED', ' 7 ')
        monkeypatch.setenv('TORCLOSED_BUDGET', '2.5')
        settings = Settings.from_env()
        assert settings.seed == 7
        assert settings.budget == 2.5

    def test_override_skips_unset_flags(self):
        settings = DEFAULTS.override(seed=3, budget=None)
        assert settings.seed == 3
        assert settings.budget == DEFAULTS.budget

    def test_bad_value_exits(self, monkeypatch, capsys):
        monkeypatch.setenv('TORCLOSED_CERTIFY_BOUND', 'many')
        with pytest.raises(SystemExit) as e:
            Settings.from_env()
        assert e.value.code == 1
        assert 'TORCLOSED_CERTIFY_BOUND' in capsys.readouterr().err


class TestParsing:
    def test_int_list(self):
        assert parse_int_list(' 0,1,3 ') == [0, 1, 3]
        assert parse_int_list('') == []

    def test_name_list(self):
        assert parse_name_list('jsd, ,sd') == ['jsd', 'sd']

    def test_os_tuple(self):
        assert parse_os_tuple('0133') == (0, 1, 3, 3)
        assert parse_os_tuple('0,10,12') == (0, 10, 12)

    def test_word(self):
        assert parse_word('0102') == (0, 1, 0, 2)
        assert parse_word('0 1 10 2') == (0, 1, 10, 2)

    @pytest.mark.parametrize('parse, text', [(parse_int_list, '0,x'), (parse_os_tuple, '01a'),
                                             (parse_word, '0 x')])
    def test_rejected(self, parse, text):
        with pytest.raises(ParseError):
            parse(text)
