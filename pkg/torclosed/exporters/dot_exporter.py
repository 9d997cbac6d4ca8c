import networkx as nx

from torclosed.exporters import Exporter


class DotExporter(Exporter):
    """Hasse diagram drawn bottom to top; edges carry the labelling when one is given."""

    def graph(self) -> nx.DiGraph:
        L = self.lattice
        graph = nx.DiGraph()
        for x, name in enumerate(L.names):
            graph.add_node(x, label=f'"{name}"')
        for b, c in L.cover_pairs:
            attrs = {} if self.labelling is None else dict(label=str(self.labelling[(b, c)]))
            graph.add_edge(b, c, **attrs)
        return graph

    def export(self) -> str:
        dot = nx.nx_pydot.to_pydot(self.graph())
        dot.set_rankdir('BT')
        return dot.to_string()
