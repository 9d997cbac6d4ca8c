"""
Unit tests for JSON poset documents and doubling scripts.

Core claims:
    - documents load into posets and chains by element name
    - malformed documents raise InvalidDocument naming the problem
    - scripts load, validate and dump
"""

import json
from os.path import join

import pytest

from torclosed.congruence import DoublingScript
from torclosed.data import PosetDocument, dump_script, load_script
from torclosed.errors import InvalidDocument
from torclosed.poset import Poset


class TestPosetDocument:
    def test_load(self, data_dir, diamond):
        doc = PosetDocument.load(join(data_dir, 'diamond_tamari.json'))
        assert doc.poset().is_isomorphic(diamond)
        assert doc.phi() == [0, 1, 3]
        assert doc.poset().names == ('0', '1', '2', '3')

    def test_without_chain(self, data_dir):
        doc = PosetDocument.load(join(data_dir, 'bowtie.json'))
        assert doc.poset().minimum() is None
        with pytest.raises(InvalidDocument):
            doc.phi()

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidDocument):
            PosetDocument.load(str(tmp_path / 'missing.json'))

    @pytest.mark.parametrize('text', [
        'not json',
        '[1, 2]',
        '{"elements": [1, 2]}',
        '{"elements": ["a", "a"]}',
        '{"elements": ["a"], "relations": [["a", "b"]]}',
        '{"elements": ["a", "b"], "relations": [["a"]]}',
        '{"elements": ["a"], "chain": ["b"]}',
    ])
    def test_invalid(self, text):
        with pytest.raises(InvalidDocument):
            PosetDocument.loads(text)

    def test_cyclic_relations(self):
        doc = PosetDocument.loads('{"elements": ["a", "b"], "relations": [["a", "b"], ["b", "a"]]}')
        with pytest.raises(InvalidDocument) as e:
            doc.poset()
        assert 'cyclic' in str(e.value)

    def test_from_poset(self, diamond):
        doc = PosetDocument.from_poset(diamond, [0, 1, 3])
        again = PosetDocument.from_dict(json.loads(json.dumps(doc.to_dict())))
        assert again.poset().is_isomorphic(diamond)
        assert again.phi() == [0, 1, 3]

    def test_chain_is_optional_in_output(self):
        doc = PosetDocument.from_poset(Poset.chain(2))
        assert 'chain' not in doc.to_dict()


class TestScripts:
    def test_load(self, data_dir):
        script = load_script(join(data_dir, 'doubling_script.json'))
        assert len(script) == 5
        assert script.to_dict() == {'steps': [[0], [0, 1], [0, 1, 2], [3, 4], [5, 6, 7]]}

    def test_dump(self, tmp_path):
        path = str(tmp_path / 'script.json')
        dump_script(DoublingScript.from_subsets([[0], [1]]), path)
        assert load_script(path).to_dict() == {'steps': [[0], [1]]}

    @pytest.mark.parametrize('text', ['{"steps": [[-1]]}', '{"steps": [0]}', '{"moves": []}', '[]', '{'])
    def test_invalid(self, tmp_path, text):
        path = tmp_path / 'script.json'
        path.write_text(text)
        with pytest.raises(InvalidDocument):
            load_script(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidDocument):
            load_script(str(tmp_path / 'missing.json'))
