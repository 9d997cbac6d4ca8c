"""
Unit tests for the DOT and JSON exporters.

Core claims:
    - DOT output is a bottom-to-top Hasse diagram, edge labels when a labelling is given
    - the JSON summary reports size, irreducibles and properties, plus the D relation for Tam(P, phi)
"""

import json

from torclosed.exporters.dot_exporter import DotExporter
from torclosed.exporters.json_exporter import JsonExporter, summary
from torclosed.ptamari import omega_labelling


class TestDot:
    def test_hasse_diagram(self, n5):
        graph = DotExporter(n5).graph()
        assert sorted(graph.edges) == sorted(n5.cover_pairs)
        assert 'label' not in graph.edges[0, 1]

    def test_labels(self, diamond_tamari):
        omega = omega_labelling(diamond_tamari)
        graph = DotExporter(diamond_tamari.lattice, omega).graph()
        b, c = diamond_tamari.lattice.cover_pairs[0]
        assert graph.edges[b, c]['label'] == str(omega[(b, c)])

    def test_export(self, n5):
        text = DotExporter(n5).export()
        assert 'rankdir' in text and 'BT' in text

    def test_write_to_file(self, n5, tmp_path, capsys):
        path = str(tmp_path / 'n5.dot')
        DotExporter(n5).write(path)
        assert 'Written to' in capsys.readouterr().out
        with open(path) as f:
            assert 'BT' in f.read()


class TestJson:
    def test_summary_of_diamond_tamari(self, diamond_tamari):
        out = summary(diamond_tamari.lattice, diamond_tamari)
        assert (out['size'], out['covers'], out['jirr'], out['mirr'], out['length']) == (18, 28, 7, 8, 7)
        assert out['jsd'] and not out['sd']
        assert out['left_modular'] and out['join_extremal']
        assert sorted(out['atoms']) == ['1', '5', '7']
        assert len(out['d_edges']) == 12

    def test_plain_lattice_has_no_d_edges(self, m3):
        out = summary(m3)
        assert 'd_edges' not in out
        assert not out['jsd']

    def test_export_is_json(self, n5, capsys):
        JsonExporter(n5).write()
        assert json.loads(capsys.readouterr().out)['size'] == 5
