import json
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from torclosed.congruence import DoublingScript
from torclosed.errors import CycleError, InvalidDocument
from torclosed.poset import Poset


@dataclass
class PosetDocument:
    """
    {"elements": ["0", "a", ...], "relations": [["0", "a"], ...], "chain": ["0", "a", ...]}
    Relations are generating pairs (lower, upper); the chain is optional.
    """
    elements: List[str]
    relations: List[Tuple[str, str]] = field(default_factory=list)
    chain: Optional[List[str]] = None

    @classmethod
    def from_dict(cls, raw) -> 'PosetDocument':
        if not isinstance(raw, dict):
            raise InvalidDocument('document must be a JSON object')
        elements = raw.get('elements')
        if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
            raise InvalidDocument('"elements" must be a list of strings')
        if len(set(elements)) != len(elements):
            raise InvalidDocument('element names must be unique')
        known = set(elements)
        relations = []
        for pair in raw.get('relations', []):
            if not (isinstance(pair, list) and len(pair) == 2):
                raise InvalidDocument(f'relation {pair} must be a pair of names')
            for name in pair:
                if name not in known:
                    raise InvalidDocument(f'relation {pair} names unknown element "{name}"')
            relations.append((pair[0], pair[1]))
        chain = raw.get('chain')
        if chain is not None:
            if not isinstance(chain, list) or any(name not in known for name in chain):
                raise InvalidDocument('"chain" must list known element names')
        return cls(elements=elements, relations=relations, chain=chain)

    @classmethod
    def loads(cls, text: str) -> 'PosetDocument':
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidDocument(f'not valid JSON: {e}')
        return cls.from_dict(raw)

    @classmethod
    def load(cls, path: str) -> 'PosetDocument':
        try:
            with open(path) as f:
                return cls.loads(f.read())
        except OSError as e:
            raise InvalidDocument(f'cannot read {path}: {e.strerror}')

    def to_dict(self):
        out = dict(elements=self.elements, relations=[list(p) for p in self.relations])
        if self.chain is not None:
            out['chain'] = self.chain
        return out

    def poset(self) -> Poset:
        position = {name: i for i, name in enumerate(self.elements)}
        pairs = [(position[a], position[b]) for a, b in self.relations]
        try:
            return Poset.from_relations(len(self.elements), pairs, names=self.elements)
        except CycleError as e:
            raise InvalidDocument(f'relations are cyclic through {[self.elements[i] for i in e.cycle]}')

    def phi(self) -> List[int]:
        if not self.chain:
            raise InvalidDocument('document has no chain')
        position = {name: i for i, name in enumerate(self.elements)}
        return [position[name] for name in self.chain]

    @classmethod
    def from_poset(cls, P: Poset, chain: Optional[List[int]] = None) -> 'PosetDocument':
        names = list(P.names)
        return cls(
            elements=names,
            relations=[(names[a], names[b]) for a, b in P.cover_pairs],
            chain=None if chain is None else [names[i] for i in chain],
        )


def load_script(path: str) -> DoublingScript:
    """{"steps": [[0], [0, 1], ...]}: the doubled subset of each step, in replay indices."""
    try:
        with open(path) as f:
            raw = json.load(f)
    except OSError as e:
        raise InvalidDocument(f'cannot read {path}: {e.strerror}')
    except json.JSONDecodeError as e:
        raise InvalidDocument(f'not valid JSON: {e}')
    steps = raw.get('steps') if isinstance(raw, dict) else None
    if not isinstance(steps, list) or not all(
            isinstance(s, list) and all(isinstance(x, int) and x >= 0 for x in s) for s in steps):
        raise InvalidDocument('"steps" must be a list of lists of element indices')
    return DoublingScript.from_subsets(steps)


def dump_script(script: DoublingScript, path: str):
    with open(path, 'w') as f:
        json.dump(script.to_dict(), f, indent=2)
