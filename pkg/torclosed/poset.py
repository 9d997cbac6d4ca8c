"""
Finite posets on dense element indices 0..n-1.

The order is stored as a read-only boolean matrix `leq` (leq[i, j] iff i <= j).
Subsets (ideals, filters, convex sets, chains as sets) are python int bitsets,
see `torclosed.bitset`.
"""
import logging
from functools import cached_property
from math import prod
from typing import Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from torclosed import bitset
from torclosed.errors import CycleError, NotComparable, PreconditionViolated

log = logging.getLogger(__name__)


def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean relation product a;b."""
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0


def row_masks(matrix: np.ndarray) -> List[int]:
    packed = np.packbits(matrix, axis=1, bitorder='little')
    return [int.from_bytes(row.tobytes(), 'little') for row in packed]


class Poset:

    def __init__(self, leq, names: Optional[Sequence[str]] = None, check=True):
        leq = np.array(leq, dtype=bool)
        n = leq.shape[0] if leq.ndim == 2 else 0
        if leq.shape != (n, n):
            raise PreconditionViolated(f'leq must be square, got shape {leq.shape}')
        if check:
            self._check(leq)
        leq.flags.writeable = False
        self.n = n
        self.leq = leq
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        if len(self.names) != n:
            raise PreconditionViolated(f'{len(self.names)} names given for {n} elements')
        self._mobius = {}

    @staticmethod
    def _check(leq):
        n = len(leq)
        if not leq.diagonal().all():
            raise PreconditionViolated('leq must be reflexive')
        twisted = np.argwhere(leq & leq.T & ~np.eye(n, dtype=bool))
        if len(twisted):
            i, j = twisted[0]
            raise CycleError((int(i), int(j)))
        if (compose(leq, leq) & ~leq).any():
            raise PreconditionViolated('leq must be transitive')

    @classmethod
    def from_relations(cls, n: int, pairs, names=None) -> 'Poset':
        """Reflexive-transitive closure of the generating pairs (i, j) meaning i <= j."""
        leq = np.eye(n, dtype=bool)
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise PreconditionViolated(f'relation ({i}, {j}) refers to an element outside 0..{n - 1}')
            leq[i, j] = True
        for k in range(n):
            leq |= np.outer(leq[:, k], leq[k, :])
        twisted = np.argwhere(leq & leq.T & ~np.eye(n, dtype=bool))
        if len(twisted):
            graph = nx.DiGraph([(i, j) for i, j in pairs if i != j])
            cycle = [u for u, _ in nx.find_cycle(graph)]
            raise CycleError(cycle)
        return cls(leq, names=names, check=False)

    @classmethod
    def chain(cls, n: int) -> 'Poset':
        return cls(np.triu(np.ones((n, n), dtype=bool)), check=False)

    @classmethod
    def antichain(cls, n: int) -> 'Poset':
        return cls(np.eye(n, dtype=bool), check=False)

    def __repr__(self):
        return f'Poset(n={self.n}, covers={len(self.cover_pairs)})'

    def __len__(self):
        return self.n

    # relations

    @cached_property
    def lt(self) -> np.ndarray:
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        lt.flags.writeable = False
        return lt

    @cached_property
    def covers(self) -> np.ndarray:
        """covers[i, j] iff j covers i"""
        child = self.lt & ~compose(self.lt, self.lt)
        child.flags.writeable = False
        return child

    @cached_property
    def cover_pairs(self) -> List[Tuple[int, int]]:
        return [(int(i), int(j)) for i, j in np.argwhere(self.covers)]

    @cached_property
    def upper_covers(self) -> List[List[int]]:
        return [np.flatnonzero(row).tolist() for row in self.covers]

    @cached_property
    def lower_covers(self) -> List[List[int]]:
        return [np.flatnonzero(col).tolist() for col in self.covers.T]

    @cached_property
    def down(self) -> List[int]:
        """down[x] is the principal ideal of x as a bitset"""
        return row_masks(np.ascontiguousarray(self.leq.T))

    @cached_property
    def up(self) -> List[int]:
        return row_masks(self.leq)

    @property
    def everything(self) -> int:
        return bitset.full(self.n)

    def minimum(self) -> Optional[int]:
        bottoms = np.flatnonzero(self.leq.all(axis=1))
        return int(bottoms[0]) if len(bottoms) else None

    def maximum(self) -> Optional[int]:
        tops = np.flatnonzero(self.leq.all(axis=0))
        return int(tops[0]) if len(tops) else None

    # subsets

    def ideal_generated(self, mask: int) -> int:
        out = 0
        for x in bitset.members(mask):
            out |= self.down[x]
        return out

    def filter_generated(self, mask: int) -> int:
        out = 0
        for x in bitset.members(mask):
            out |= self.up[x]
        return out

    def is_ideal(self, mask: int) -> bool:
        return self.ideal_generated(mask) == mask

    def is_filter(self, mask: int) -> bool:
        return self.filter_generated(mask) == mask

    def convex_hull(self, mask: int) -> int:
        return self.ideal_generated(mask) & self.filter_generated(mask)

    def convex_violation(self, mask: int) -> Optional[Tuple[int, int, int]]:
        """A triple a <= b <= c with a, c in mask and b outside, if any."""
        outside = self.convex_hull(mask) & ~mask
        if not outside:
            return None
        b = bitset.lowest(outside)
        a = bitset.lowest(self.down[b] & mask)
        c = bitset.lowest(self.up[b] & mask)
        return a, b, c

    def is_convex(self, mask: int) -> bool:
        return self.convex_violation(mask) is None

    def minimal_elements(self, mask: int) -> List[int]:
        return [x for x in bitset.members(mask) if self.down[x] & mask == 1 << x]

    def maximal_elements(self, mask: int) -> List[int]:
        return [x for x in bitset.members(mask) if self.up[x] & mask == 1 << x]

    def is_chain(self, elements: Sequence[int]) -> bool:
        return all(self.lt[a, b] for a, b in zip(elements, elements[1:]))

    # ideals

    def all_ideals(self) -> Iterator[int]:
        """
        Every order ideal exactly once. Elements are decided along a fixed linear
        extension; an element may join only once everything below it has, so no
        branch dead-ends.
        """
        order = self.linear_extension()
        strictly_below = [self.down[x] & ~(1 << x) for x in order]
        stack = [(0, 0)]
        while stack:
            pos, mask = stack.pop()
            if pos == self.n:
                yield mask
                continue
            if strictly_below[pos] & ~mask == 0:
                stack.append((pos + 1, mask | 1 << order[pos]))
            stack.append((pos + 1, mask))

    def all_filters(self) -> Iterator[int]:
        everything = self.everything
        for ideal in self.all_ideals():
            yield everything & ~ideal

    def count_ideals(self, within: Optional[int] = None) -> int:
        """
        |J| of the subposet on `within` (default everything), without listing.
        Splits on an element x: ideals avoiding x live in Q minus up(x), ideals
        containing x correspond to ideals of Q minus down(x).
        """
        memo = {}
        down, up = self.down, self.up

        def components(mask):
            parts = []
            while mask:
                seed = mask & -mask
                part, frontier = seed, seed
                while frontier:
                    x = bitset.lowest(frontier)
                    frontier &= frontier - 1
                    fresh = (down[x] | up[x]) & mask & ~part
                    part |= fresh
                    frontier |= fresh
                parts.append(part)
                mask &= ~part
            return parts

        def pivot(mask):
            return max(bitset.members(mask),
                       key=lambda x: min(bitset.count(up[x] & mask), bitset.count(down[x] & mask)))

        def count(mask):
            if mask == 0:
                return 1
            if mask in memo:
                return memo[mask]
            parts = components(mask)
            if len(parts) > 1:
                result = prod(count(p) for p in parts)
            else:
                x = pivot(mask)
                result = count(mask & ~up[x]) + count(mask & ~down[x])
            memo[mask] = result
            return result

        total = count(self.everything if within is None else within)
        log.debug(f"counted {total} ideals with {len(memo)} memoised subposets")
        return total

    # chains and extensions

    def linear_extension(self) -> List[int]:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.cover_pairs)
        return list(nx.lexicographical_topological_sort(graph))

    def linear_extensions(self) -> Iterator[Tuple[int, ...]]:
        strictly_below = [self.down[x] & ~(1 << x) for x in range(self.n)]
        everything = self.everything
        prefix = []

        def extend(placed):
            if placed == everything:
                yield tuple(prefix)
                return
            for x in range(self.n):
                if not placed >> x & 1 and strictly_below[x] & ~placed == 0:
                    prefix.append(x)
                    yield from extend(placed | 1 << x)
                    prefix.pop()

        yield from extend(0)

    def count_linear_extensions(self) -> int:
        strictly_below = [self.down[x] & ~(1 << x) for x in range(self.n)]
        everything = self.everything
        memo = {everything: 1}

        def count(placed):
            if placed in memo:
                return memo[placed]
            total = 0
            for x in bitset.members(everything & ~placed):
                if strictly_below[x] & ~placed == 0:
                    total += count(placed | 1 << x)
            memo[placed] = total
            return total

        return count(0)

    @cached_property
    def _heights(self) -> Tuple[List[int], List[int]]:
        order = self.linear_extension()
        height = [0] * self.n
        depth = [0] * self.n
        for x in order:
            for y in self.upper_covers[x]:
                height[y] = max(height[y], height[x] + 1)
        for x in reversed(order):
            for y in self.upper_covers[x]:
                depth[x] = max(depth[x], depth[y] + 1)
        return height, depth

    @property
    def length(self) -> int:
        height, _ = self._heights
        return max(height, default=0)

    def longest_chains(self) -> Iterator[Tuple[int, ...]]:
        height, depth = self._heights
        length = self.length
        on_spine = [height[x] + depth[x] == length for x in range(self.n)]

        def walk(chain):
            x = chain[-1]
            if height[x] == length:
                yield tuple(chain)
                return
            for y in self.upper_covers[x]:
                if on_spine[y] and height[y] == height[x] + 1:
                    chain.append(y)
                    yield from walk(chain)
                    chain.pop()

        for x in range(self.n):
            if on_spine[x] and height[x] == 0:
                yield from walk([x])

    def length_and_longest_chains(self) -> Tuple[int, Iterator[Tuple[int, ...]]]:
        return self.length, self.longest_chains()

    def spine(self) -> int:
        """Union of all longest chains."""
        height, depth = self._heights
        length = self.length
        return bitset.to_mask(x for x in range(self.n) if height[x] + depth[x] == length)

    # mobius

    def _mobius_row(self, x: int) -> np.ndarray:
        if x not in self._mobius:
            mu = np.zeros(self.n, dtype=np.int64)
            for z in self.linear_extension():
                if z == x:
                    mu[z] = 1
                elif self.lt[x, z]:
                    mu[z] = -mu[self.lt[:, z]].sum()
            mu.flags.writeable = False
            self._mobius[x] = mu
        return self._mobius[x]

    def mobius(self, x: int, y: int) -> int:
        if not self.leq[x, y]:
            raise NotComparable(x, y)
        return int(self._mobius_row(x)[y])

    # constructions

    def product(self, other: 'Poset') -> 'Poset':
        """Componentwise order, element (i, j) at index i * len(other) + j."""
        leq = np.kron(self.leq.astype(np.uint8), other.leq.astype(np.uint8)).astype(bool)
        names = [f'({a},{b})' for a in self.names for b in other.names]
        return Poset(leq, names=names, check=False)

    def subposet(self, elements: Sequence[int]) -> 'Poset':
        idx = np.asarray(list(elements), dtype=int)
        return Poset(self.leq[np.ix_(idx, idx)], names=[self.names[i] for i in idx], check=False)

    def dual(self) -> 'Poset':
        return Poset(self.leq.T, names=self.names, check=False)

    def relabel(self, order: Sequence[int]) -> 'Poset':
        """Copy whose element k is element order[k] of self."""
        return self.subposet(order)

    # graphs and isomorphism

    def hasse_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from((i, dict(label=name)) for i, name in enumerate(self.names))
        graph.add_edges_from(self.cover_pairs)
        return graph

    @cached_property
    def fingerprint(self) -> str:
        return nx.weisfeiler_lehman_graph_hash(self.hasse_graph())

    def find_isomorphism(self, other: 'Poset') -> Optional[dict]:
        if self.n != other.n or len(self.cover_pairs) != len(other.cover_pairs):
            return None
        if self.fingerprint != other.fingerprint:
            return None
        matcher = nx.algorithms.isomorphism.DiGraphMatcher(self.hasse_graph(), other.hasse_graph())
        if matcher.is_isomorphic():
            return dict(matcher.mapping)
        return None

    def is_isomorphic(self, other: 'Poset') -> bool:
        return self.find_isomorphism(other) is not None
