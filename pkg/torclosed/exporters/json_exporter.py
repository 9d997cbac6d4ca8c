import json
from typing import Optional

from torclosed.exporters import Exporter
from torclosed.ptamari import PTamariLattice, d_edges_as_labels, d_relation_formula


def summary(lattice, ptl: Optional[PTamariLattice] = None) -> dict:
    data = lattice.irreducible_data
    ext = lattice.extremality()
    out = dict(
        size=lattice.n,
        covers=len(lattice.cover_pairs),
        atoms=[lattice.names[x] for x in lattice.atoms],
        coatoms=[lattice.names[x] for x in lattice.coatoms],
        jirr=len(data.jirr),
        mirr=len(data.mirr),
        length=ext.length,
        jsd=bool(lattice.is_jsd()),
        sd=bool(lattice.is_sd()),
        left_modular=bool(lattice.is_left_modular()),
        join_extremal=ext.join_extremal,
    )
    if ptl is not None:
        out['d_edges'] = [list(e) for e in d_edges_as_labels(ptl, d_relation_formula(ptl))]
    return out


class JsonExporter(Exporter):

    def __init__(self, lattice, labelling=None, ptl: Optional[PTamariLattice] = None):
        super(JsonExporter, self).__init__(lattice, labelling)
        self.ptl = ptl

    def export(self) -> str:
        return json.dumps(summary(self.lattice, self.ptl), indent=2)
