from abc import ABC, abstractmethod
from typing import Optional

from torclosed.labels import EdgeLabelling
from torclosed.lattice import Lattice


class Exporter(ABC):

    def __init__(self, lattice: Lattice, labelling: Optional[EdgeLabelling] = None):
        self.lattice = lattice
        self.labelling = labelling

    @abstractmethod
    def export(self) -> str:
        pass

    def write(self, path: Optional[str] = None):
        text = self.export()
        if path:
            with open(path, 'w') as f:
                f.write(text)
            print(f"Written to {path}")
        else:
            print(text)
