import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from torclosed import bitset
from torclosed.errors import NotALattice, PropertyViolation
from torclosed.poset import Poset

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Any = None

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class IrreducibleData:
    jirr: List[int]
    lower_cover: Dict[int, int]
    mirr: List[int]
    upper_cover: Dict[int, int]


@dataclass(frozen=True)
class Extremality:
    length: int
    jirr: int
    mirr: int

    @property
    def join_extremal(self):
        return self.length == self.jirr

    @property
    def meet_extremal(self):
        return self.length == self.mirr

    @property
    def extremal(self):
        return self.join_extremal and self.meet_extremal


def _bound_table(rel: np.ndarray, reason: str) -> np.ndarray:
    """
    table[a, b] is the element whose row of `rel` equals rel[a] & rel[b].
    With rel = leq that is the least upper bound, with rel = leq.T the greatest
    lower bound.
    """
    n = len(rel)
    index = {row.tobytes(): i for i, row in enumerate(np.packbits(rel, axis=1))}
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        rows = np.packbits(rel[a] & rel, axis=1)
        for b, row in enumerate(rows):
            found = index.get(row.tobytes())
            if found is None:
                raise NotALattice((a, b), reason)
            table[a, b] = found
    table.flags.writeable = False
    return table


class Lattice:
    """
    A finite lattice with precomputed join and meet tables.
    Construction fails with NotALattice naming the first pair without a bound.
    """

    def __init__(self, base: Poset):
        if base.n == 0:
            raise NotALattice((None, None), 'bottom in the empty poset')
        self.base = base
        self.n = base.n
        self.leq = base.leq
        self.join = _bound_table(base.leq, 'least upper bound')
        self.meet = _bound_table(np.ascontiguousarray(base.leq.T), 'greatest lower bound')
        self.bottom = base.minimum()
        self.top = base.maximum()
        log.debug(f"lattice with {self.n} elements and {len(base.cover_pairs)} covers")

    @classmethod
    def from_relations(cls, n, pairs, names=None) -> 'Lattice':
        return cls(Poset.from_relations(n, pairs, names=names))

    def __len__(self):
        return self.n

    def __repr__(self):
        return f'Lattice(n={self.n}, covers={len(self.cover_pairs)})'

    @property
    def names(self):
        return self.base.names

    @property
    def cover_pairs(self):
        return self.base.cover_pairs

    @property
    def upper_covers(self):
        return self.base.upper_covers

    @property
    def lower_covers(self):
        return self.base.lower_covers

    @property
    def atoms(self) -> List[int]:
        return list(self.upper_covers[self.bottom])

    @property
    def coatoms(self) -> List[int]:
        return list(self.lower_covers[self.top])

    def interval(self, x: int, y: int) -> int:
        return self.base.up[x] & self.base.down[y]

    def join_all(self, elements: Iterable[int]) -> int:
        out = self.bottom
        for x in elements:
            out = int(self.join[out, x])
        return out

    def meet_all(self, elements: Iterable[int]) -> int:
        out = self.top
        for x in elements:
            out = int(self.meet[out, x])
        return out

    def is_sublattice(self, mask: int) -> bool:
        idx = bitset.to_list(mask)
        sub = np.ix_(idx, idx)
        inside = np.zeros(self.n, dtype=bool)
        inside[idx] = True
        return bool(inside[self.join[sub]].all() and inside[self.meet[sub]].all())

    def dual(self) -> 'Lattice':
        return Lattice(self.base.dual())

    # irreducibles

    @cached_property
    def irreducible_data(self) -> IrreducibleData:
        lower = {x: c[0] for x, c in enumerate(self.lower_covers) if len(c) == 1}
        upper = {x: c[0] for x, c in enumerate(self.upper_covers) if len(c) == 1}
        jirr = sorted(lower)
        for x in range(self.n):
            below = [j for j in jirr if self.leq[j, x]]
            if self.join_all(below) != x:
                raise PropertyViolation('element is the join of the join-irreducibles below it', x)
        return IrreducibleData(jirr=jirr, lower_cover=lower, mirr=sorted(upper), upper_cover=upper)

    def irreducibles(self) -> IrreducibleData:
        return self.irreducible_data

    # semidistributivity

    @cached_property
    def jsd_labels(self) -> Optional[Dict[tuple, int]]:
        """cover -> min(I(c) minus I(b)), or None when some cover has no minimum"""
        labels = {}
        jirr = set(self.irreducible_data.jirr)
        for b, c in self.cover_pairs:
            diff = np.flatnonzero(self.leq[:, c] & ~self.leq[:, b])
            sub = self.leq[np.ix_(diff, diff)]
            mins = diff[sub.all(axis=1)]
            if not len(mins):
                return None
            m = int(mins[0])
            if m not in jirr:
                raise PropertyViolation('cover minimum is join-irreducible', (b, c, m))
            labels[(b, c)] = m
        return labels

    def is_jsd(self) -> Verdict:
        for b, c in self.cover_pairs:
            diff = np.flatnonzero(self.leq[:, c] & ~self.leq[:, b])
            if not self.leq[np.ix_(diff, diff)].all(axis=1).any():
                return Verdict(False, (b, c))
        if self.jsd_labels is None:
            raise PropertyViolation('cover criterion is stable', None)
        return Verdict(True)

    def is_msd(self) -> Verdict:
        for b, c in self.cover_pairs:
            diff = np.flatnonzero(self.leq[b, :] & ~self.leq[c, :])
            if not self.leq[np.ix_(diff, diff)].all(axis=0).any():
                return Verdict(False, (b, c))
        return Verdict(True)

    def is_sd(self) -> Verdict:
        jsd = self.is_jsd()
        if not jsd:
            return Verdict(False, ('join', jsd.witness))
        msd = self.is_msd()
        if not msd:
            return Verdict(False, ('meet', msd.witness))
        return Verdict(True)

    def is_jsd_by_definition(self) -> Verdict:
        """x v y = x v z implies x v (y ^ z) = x v y, checked over all triples"""
        for x in range(self.n):
            jx = self.join[x]
            same = jx[:, None] == jx[None, :]
            bad = np.argwhere(same & (jx[self.meet] != jx[:, None]))
            if len(bad):
                y, z = bad[0]
                return Verdict(False, (x, int(y), int(z)))
        return Verdict(True)

    # left modularity

    def is_left_modular_element(self, a: int) -> Verdict:
        """(b v a) ^ c = b v (a ^ c) for all b < c"""
        lhs = self.meet[self.join[:, a], :]
        rhs = self.join[:, self.meet[a, :]]
        bad = np.argwhere(self.base.lt & (lhs != rhs))
        if len(bad):
            b, c = bad[0]
            return Verdict(False, (int(b), int(c)))
        return Verdict(True)

    @cached_property
    def left_modular_elements(self) -> List[int]:
        return [a for a in range(self.n) if self.is_left_modular_element(a)]

    def left_modular_chain(self) -> Optional[List[int]]:
        """A maximal chain of left modular elements, found by search in the cover graph."""
        allowed = set(self.left_modular_elements)
        parent = {self.bottom: None}
        queue = deque([self.bottom])
        while queue:
            x = queue.popleft()
            if x == self.top:
                chain = []
                while x is not None:
                    chain.append(x)
                    x = parent[x]
                return chain[::-1]
            for y in self.upper_covers[x]:
                if y in allowed and y not in parent:
                    parent[y] = x
                    queue.append(y)
        return None

    def is_left_modular(self) -> Verdict:
        chain = self.left_modular_chain()
        return Verdict(chain is not None, chain)

    # extremality

    def extremality(self) -> Extremality:
        data = self.irreducible_data
        return Extremality(length=self.base.length, jirr=len(data.jirr), mirr=len(data.mirr))

    def check_cor_extremal_sd(self) -> Verdict:
        """Semidistributive extremal lattices carry a maximal left modular chain."""
        if not (self.is_sd() and self.extremality().extremal):
            return Verdict(True, 'vacuous')
        chain = self.left_modular_chain()
        return Verdict(chain is not None, chain)


def _grow(lattice: Lattice):
    """Lattices obtained by adding one join-irreducible element above some k."""
    n = lattice.n
    base = lattice.base
    for k in range(n):
        strictly_above = base.up[k] & ~(1 << k)
        if not strictly_above:
            continue
        above = bitset.to_list(strictly_above)
        sub = base.subposet(above)
        for local in sub.all_filters():
            if not local:
                continue
            leq = np.zeros((n + 1, n + 1), dtype=bool)
            leq[:n, :n] = base.leq
            leq[:n, n] = base.leq[:, k]
            leq[n, n] = True
            for i in bitset.members(local):
                leq[n, above[i]] = True
            try:
                yield Lattice(Poset(leq, check=False))
            except NotALattice:
                continue


def as_lattice(P: Poset) -> Lattice:
    return Lattice(P)


def all_lattices(max_size: int) -> List[Lattice]:
    """Every lattice with at most `max_size` elements, one per isomorphism class."""
    if max_size < 1:
        return []
    found = [Lattice(Poset.chain(1))]
    if max_size < 2:
        return found
    layer = [Lattice(Poset.chain(2))]
    found += layer
    for size in range(3, max_size + 1):
        buckets = defaultdict(list)
        grown = []
        for lattice in layer:
            for candidate in _grow(lattice):
                bucket = buckets[candidate.base.fingerprint]
                if any(candidate.base.is_isomorphic(seen.base) for seen in bucket):
                    continue
                bucket.append(candidate)
                grown.append(candidate)
        log.debug(f"{len(grown)} lattices with {size} elements")
        found += grown
        layer = grown
    return found
