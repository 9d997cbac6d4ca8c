"""
The lattice Tam(P, phi) of torclosed subsets.

Ground elements (x, k) with x <= phi(k) are indexed in canonical order: the
components from the last to the first, inside a component by decreasing
r(x) = min{i | x <= phi(i)}, ties broken by a reversed linear extension of P.
Ground index g is printed as the label g + 1, and subsets of the ground set are
bitsets over the ground indices.
"""
import logging
import random
import time
from dataclasses import dataclass
from functools import cached_property
from math import comb, prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from torclosed import bitset
from torclosed.config import DEFAULTS
from torclosed.congruence import CongruenceSpec, DGraph, is_congruence, spec_from_labels
from torclosed.errors import InvalidKupisch, PreconditionViolated, PropertyViolation, SearchExhausted, \
    UnsupportedLength
from torclosed.labels import ChainContext, EdgeLabelling, gamma
from torclosed.lattice import Lattice, Verdict
from torclosed.poset import Poset

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhiChain:
    base: Poset
    phi: Tuple[int, ...]

    def __post_init__(self):
        if not self.phi:
            raise PreconditionViolated('the chain phi must not be empty')
        if self.phi[0] != self.base.minimum():
            raise PreconditionViolated(f'phi(0) = {self.phi[0]} is not the minimum of P')
        if not self.base.is_chain(self.phi):
            raise PreconditionViolated(f'phi = {list(self.phi)} is not strictly increasing')

    @property
    def n(self):
        return len(self.phi)


class Components:

    def __init__(self, pc: PhiChain):
        P, phi = pc.base, pc.phi
        self.pc = pc
        self.base = P
        self.phi = phi
        self.n = n = len(phi)
        position = {x: i for i, x in enumerate(P.linear_extension())}
        rank = [min((i for i in range(n) if P.leq[x, phi[i]]), default=n) for x in range(P.n)]
        ground = []
        for k in reversed(range(n)):
            members = [x for x in range(P.n) if P.leq[x, phi[k]]]
            members.sort(key=lambda x: (-rank[x], -position[x]))
            ground += [(x, k) for x in members]
        self.ground: List[Tuple[int, int]] = ground
        self.size = m = len(ground)
        self.index: Dict[Tuple[int, int], int] = {g: i for i, g in enumerate(ground)}
        self.component = [k for _, k in ground]
        self.masks = [bitset.to_mask(g for g in range(m) if self.component[g] == k) for k in range(n)]

        xs = np.array([x for x, _ in ground], dtype=int)
        ks = np.array(self.component, dtype=int)
        base_leq = P.leq[np.ix_(xs, xs)]
        self.within = base_leq & (ks[:, None] == ks[None, :])
        self.within.flags.writeable = False
        self.prod = Poset(base_leq & (ks[:, None] <= ks[None, :]), names=[str(g + 1) for g in range(m)],
                          check=False)
        self.component_poset = Poset(self.within, names=self.prod.names, check=False)
        self.up_within = self.component_poset.up

        self.a = {(i, j): self.index[(phi[j - i], j)] for j in range(n) for i in range(j + 1)}
        self.rules = [
            (self.index[(x, i)], self.index[(phi[i + 1], j)], self.index[(x, j)])
            for i in range(n) for j in range(i + 1, n)
            for x in range(P.n) if P.leq[x, phi[i]]
        ]
        log.debug(f"ground set with {m} elements in {n} components and {len(self.rules)} extension rules")

    def __len__(self):
        return self.size

    def label(self, g: int) -> int:
        return g + 1

    def labels_of(self, F: int) -> List[int]:
        return [g + 1 for g in bitset.members(F)]

    def from_labels(self, labels: Sequence[int]) -> int:
        return bitset.to_mask(label - 1 for label in labels)

    def name(self, F: int) -> str:
        return ','.join(map(str, self.labels_of(F))) or '∅'

    def up_close(self, F: int) -> int:
        out = F
        for g in bitset.members(F):
            out |= self.up_within[g]
        return out

    def closure(self, S: int) -> int:
        """Least torclosed superset of S."""
        F = S
        while True:
            F = self.up_close(F)
            grown = F
            for src, trigger, dst in self.rules:
                if grown >> trigger & 1 and grown >> src & 1:
                    grown |= 1 << dst
            if grown == F:
                return F
            F = grown


def build_components(pc: PhiChain) -> Components:
    return Components(pc)


def is_torclosed(cm: Components, S: int) -> Verdict:
    """Witness: ('filter', (g, h)) or ('extension', (src, trigger, dst)), as labels."""
    for g in bitset.members(S):
        missing = cm.up_within[g] & ~S
        if missing:
            return Verdict(False, ('filter', (g + 1, bitset.lowest(missing) + 1)))
    for src, trigger, dst in cm.rules:
        if S >> src & 1 and S >> trigger & 1 and not S >> dst & 1:
            return Verdict(False, ('extension', (src + 1, trigger + 1, dst + 1)))
    return Verdict(True)


def torclosed_closure(cm: Components, S: int) -> int:
    return cm.closure(S)


def enumerate_torclosed(cm: Components, budget: Optional[float] = None) -> Iterator[int]:
    """
    Every torclosed set once, in lectic order over the ground indices: the next
    set is the closure of the current one cut below some g plus g, accepted when
    the closure adds nothing below g.
    """
    deadline = None if budget is None else time.monotonic() + budget
    current = cm.closure(0)
    full = bitset.full(cm.size)
    count = 0
    while True:
        yield current
        count += 1
        if current == full:
            break
        if deadline is not None and count % 1024 == 0 and time.monotonic() > deadline:
            raise SearchExhausted(f"enumeration exceeded {budget} seconds after {count} torclosed sets")
        for g in reversed(range(cm.size)):
            if current >> g & 1:
                continue
            below = (1 << g) - 1
            candidate = cm.closure((current & below) | 1 << g)
            if candidate & below == current & below:
                current = candidate
                break
        else:
            break


def count_torclosed(cm: Components, budget: Optional[float] = None) -> int:
    return sum(1 for _ in enumerate_torclosed(cm, budget))


class PTamariLattice:
    """Torclosed sets ordered by inclusion, bottom first."""

    def __init__(self, cm: Components, elements: Sequence[int]):
        self.cm = cm
        self.elements = sorted(elements, key=lambda F: (bitset.count(F), F))
        self.index = {F: i for i, F in enumerate(self.elements)}
        members = np.zeros((len(self.elements), cm.size), dtype=np.float32)
        for i, F in enumerate(self.elements):
            members[i, bitset.to_list(F)] = 1
        self.members = members.astype(bool)
        leq = (members @ (1 - members).T) == 0
        names = [cm.name(F) for F in self.elements]
        self.lattice = Lattice(Poset(leq, names=names, check=False))

    def __len__(self):
        return len(self.elements)

    def labels_of(self, F: int) -> List[int]:
        return self.cm.labels_of(F)

    def element(self, labels: Sequence[int]) -> int:
        """Lattice index of the torclosed set with the given labels."""
        return self.index[self.cm.from_labels(labels)]

    def join_sets(self, F: int, G: int) -> int:
        return self.cm.closure(F | G)

    @cached_property
    def jirr_of_ground(self) -> List[int]:
        return [self.index[self.cm.up_within[g]] for g in range(self.cm.size)]

    def verify(self, limit: Optional[int] = None):
        """Meets are intersections, joins are closures of unions, atoms and coatoms as expected."""
        limit = DEFAULTS.verify_limit if limit is None else limit
        L, E = self.lattice, self.elements
        if len(E) <= limit:
            for a in range(L.n):
                for b in range(a, L.n):
                    if E[L.meet[a, b]] != E[a] & E[b]:
                        raise PropertyViolation('meet is intersection', (self.cm.name(E[a]), self.cm.name(E[b])))
                    if E[L.join[a, b]] != self.cm.closure(E[a] | E[b]):
                        raise PropertyViolation('join is closure of union', (self.cm.name(E[a]), self.cm.name(E[b])))
        atoms = sorted(E[x] for x in L.atoms)
        expected = sorted(1 << self.cm.a[(0, k)] for k in range(self.cm.n))
        if atoms != expected:
            raise PropertyViolation('atoms are the singletons of the component maxima', atoms)
        full = bitset.full(self.cm.size)
        coatoms = sorted(E[x] for x in L.coatoms)
        if coatoms != sorted(full & ~mask for mask in self.cm.masks):
            raise PropertyViolation('coatoms are complements of single components', coatoms)


def build_lattice(cm: Components, verify_limit: Optional[int] = None,
                  budget: Optional[float] = None) -> PTamariLattice:
    started = time.monotonic()
    ptl = PTamariLattice(cm, list(enumerate_torclosed(cm, budget)))
    ptl.verify(verify_limit)
    log.debug(f"Tam(P, phi) with {len(ptl)} elements built in {time.monotonic() - started:.2f}s")
    return ptl


def from_poset(P: Poset, phi: Sequence[int], **kwargs) -> PTamariLattice:
    return build_lattice(build_components(PhiChain(P, tuple(phi))), **kwargs)


# irreducibles

def irreducibles_by_formula(cm: Components) -> Tuple[List[int], List[int]]:
    """
    Join-irreducibles are the principal filters of the components. Meet-irreducibles
    come from pairs ((x, k), a) with a = (0, k) or a = a_{i,k} incomparable to x.
    """
    P, phi = cm.base, cm.phi
    full = bitset.full(cm.size)
    jirr = [cm.up_within[g] for g in range(cm.size)]
    mirr = set()
    for x, k in cm.ground:
        anchors = {phi[0]} | {phi[k - i] for i in range(k + 1)
                              if not P.leq[x, phi[k - i]] and not P.leq[phi[k - i], x]}
        for a in anchors:
            top = max(i for i in range(k + 1) if P.leq[phi[i], x] or P.leq[phi[i], a])
            F = 0
            for i in range(cm.n):
                if i < top or i > k:
                    F |= cm.masks[i]
                    continue
                for y in range(P.n):
                    if P.leq[y, phi[i]] and not P.leq[y, x] and not P.leq[y, a]:
                        F |= 1 << cm.index[(y, i)]
            if F == full:
                raise PropertyViolation('meet-irreducible is a proper subset', (x, k, a))
            mirr.add(F)
    return jirr, sorted(mirr)


def check_irreducibles(ptl: PTamariLattice) -> Verdict:
    jirr, mirr = irreducibles_by_formula(ptl.cm)
    data = ptl.lattice.irreducible_data
    built_j = sorted(ptl.elements[j] for j in data.jirr)
    built_m = sorted(ptl.elements[m] for m in data.mirr)
    if sorted(jirr) != built_j:
        return Verdict(False, ('join', sorted(set(jirr) ^ set(built_j))))
    if mirr != built_m:
        return Verdict(False, ('meet', sorted(set(mirr) ^ set(built_m))))
    return Verdict(True)


def sd_criterion(cm: Components) -> bool:
    """Semidistributive iff every element below phi(n-1) is comparable to every element of phi."""
    P, phi = cm.base, cm.phi
    return all(P.leq[x, p] or P.leq[p, x] for x in range(P.n) if P.leq[x, phi[-1]] for p in phi)


def cover_differences(ptl: PTamariLattice) -> Verdict:
    """Each cover difference lies in one component and has a maximum there."""
    cm, E = ptl.cm, ptl.elements
    for b, c in ptl.lattice.cover_pairs:
        diff = bitset.to_list(E[c] & ~E[b])
        if len({cm.component[g] for g in diff}) != 1:
            return Verdict(False, ('components', (cm.name(E[b]), cm.name(E[c]))))
        if not cm.within[np.ix_(diff, diff)].all(axis=0).any():
            return Verdict(False, ('maximum', (cm.name(E[b]), cm.name(E[c]))))
    return Verdict(True)


def closure_properties(cm: Components, rng: random.Random, trials: int = 100) -> Verdict:
    """Extensive, monotone and idempotent on random subsets."""
    for _ in range(trials):
        S = rng.getrandbits(cm.size)
        T = S | rng.getrandbits(cm.size)
        cS, cT = cm.closure(S), cm.closure(T)
        if not bitset.is_subset(S, cS):
            return Verdict(False, ('extensive', S))
        if not bitset.is_subset(cS, cT):
            return Verdict(False, ('monotone', (S, T)))
        if cm.closure(cS) != cS or not is_torclosed(cm, cS):
            return Verdict(False, ('idempotent', S))
    return Verdict(True)


# spine and sublattices

@dataclass
class SpineReport:
    length: int
    ground_size: int
    spine_is_prod_filters: bool
    longest_chains: int
    linear_extensions: int

    @property
    def join_extremal(self):
        return self.length == self.ground_size

    @property
    def consistent(self):
        return self.join_extremal and self.spine_is_prod_filters and self.longest_chains == self.linear_extensions


def count_longest_chains(ptl: PTamariLattice) -> int:
    """Maximal chains adding one ground element per cover."""
    L, E = ptl.lattice, ptl.elements
    ways = [0] * L.n
    ways[L.bottom] = 1
    for x in L.base.linear_extension():
        for y in L.upper_covers[x]:
            if bitset.count(E[y]) == bitset.count(E[x]) + 1:
                ways[y] += ways[x]
    return ways[L.top]


def spine_and_longest_chains(ptl: PTamariLattice) -> SpineReport:
    cm, L = ptl.cm, ptl.lattice
    spine = {ptl.elements[x] for x in bitset.members(L.base.spine())}
    filters = set(cm.prod.all_filters())
    return SpineReport(
        length=L.base.length,
        ground_size=cm.size,
        spine_is_prod_filters=spine == filters,
        longest_chains=count_longest_chains(ptl),
        linear_extensions=cm.prod.count_linear_extensions(),
    )


@dataclass
class TamariSublattice:
    members: List[int]
    lattice: Lattice


def tamari_sublattice(ptl: PTamariLattice) -> TamariSublattice:
    """Torclosed sets that are filters, inside each component, generated by some of the a_{i,j}."""
    cm = ptl.cm
    corners = sorted(set(cm.a.values()))
    found = set()
    for chosen in range(1 << len(corners)):
        F = cm.up_close(bitset.to_mask(corners[i] for i in bitset.members(chosen)))
        if F in ptl.index:
            found.add(ptl.index[F])
    members = sorted(found)
    log.debug(f"{len(members)} of {ptl.lattice.n} torclosed sets are generated by corners")
    if not ptl.lattice.is_sublattice(bitset.to_mask(members)):
        raise PropertyViolation('corner filters form a sublattice', members)
    return TamariSublattice(members=members, lattice=Lattice(ptl.lattice.base.subposet(members)))


# counting

def count_small_chain(pc: PhiChain) -> int:
    P, phi, n = pc.base, pc.phi, pc.n
    if n > 3:
        raise UnsupportedLength(n)
    if n == 1:
        return 2
    first = P.count_ideals(within=P.down[phi[1]])
    if n == 2:
        return 2 + first
    ground = build_components(pc).prod.count_ideals()
    rest = P.count_ideals(within=P.down[phi[2]] & ~P.down[phi[1]])
    return 1 + first + ground + rest


@dataclass(frozen=True)
class Bounds:
    catalan: int
    components: int
    product: int

    def check(self, size: int) -> Dict[str, bool]:
        return dict(catalan=size >= self.catalan, components=size >= self.components, product=size <= self.product)


def bounds(pc: PhiChain) -> Bounds:
    """Sizes count the order filters of each component, the sets a single component can carry."""
    n = pc.n
    sizes = [pc.base.count_ideals(within=pc.base.down[p]) for p in pc.phi]
    return Bounds(
        catalan=comb(2 * n + 2, n + 1) // (n + 2),
        components=sum(sizes) - (n - 1),
        product=prod(sizes),
    )


# labellings

def canonical_extension(cm: Components) -> List[Tuple[int, int]]:
    return list(cm.ground)


def _extension_positions(cm: Components, order: Sequence[int]):
    position = {g: p for p, g in enumerate(order)}
    if sorted(position) != list(range(cm.size)) or len(order) != cm.size:
        raise PreconditionViolated('order must list every ground element once')
    for g, h in cm.prod.cover_pairs:
        if position[g] < position[h]:
            return position, Verdict(False, ('product', (g + 1, h + 1)))
    return position, Verdict(True)


def component_order_conditions(cm: Components, order: Sequence[int]) -> Verdict:
    """
    `order` lists ground indices, greatest first. Checks compatibility with the
    product order, later components before earlier ones, and (x, k) before
    a_{i,k} whenever (x, k) is not below a_{i,k}. These conditions are enough
    for gamma_2 to equal omega, but not necessary: see satisfies_gamma_conditions.
    """
    position, verdict = _extension_positions(cm, order)
    if not verdict:
        return verdict
    for g in range(cm.size):
        for h in range(cm.size):
            if cm.component[g] > cm.component[h] and position[g] > position[h]:
                return Verdict(False, ('components', (g + 1, h + 1)))
    for (i, k), corner in cm.a.items():
        for g in bitset.members(cm.masks[k]):
            if not cm.within[g, corner] and position[g] > position[corner]:
                return Verdict(False, ('corner', (g + 1, corner + 1)))
    return Verdict(True)


def omega_labelling(ptl: PTamariLattice, order: Optional[Sequence[int]] = None) -> EdgeLabelling:
    """Label of b < c is the position (from 1) of the first element of c minus b in `order`."""
    E = ptl.elements
    if order is None:
        return EdgeLabelling({(b, c): bitset.lowest(E[c] & ~E[b]) + 1 for b, c in ptl.lattice.cover_pairs})
    position = {g: p for p, g in enumerate(order)}
    return EdgeLabelling({
        (b, c): min(position[g] for g in bitset.members(E[c] & ~E[b])) + 1
        for b, c in ptl.lattice.cover_pairs
    })


def psi_chain(ptl: PTamariLattice, order: Optional[Sequence[int]] = None) -> List[int]:
    """Lattice indices of the prefixes of `order` (default canonical)."""
    order = list(range(ptl.cm.size)) if order is None else list(order)
    chain, F = [ptl.index[0]], 0
    for g in order:
        F |= 1 << g
        if F not in ptl.index:
            raise PreconditionViolated(f'prefix {ptl.cm.name(F)} is not torclosed')
        chain.append(ptl.index[F])
    return chain


def satisfies_gamma_conditions(ptl: PTamariLattice, order: Optional[Sequence[int]] = None) -> Verdict:
    """
    Whether gamma_2 along psi equals omega for the linear extension `order`
    (greatest first, default canonical). This holds exactly when psi is a chain
    of left modular elements. Witness: ('product', (g, h)) as labels, or
    ('gamma', (b, c), gamma_2, omega) for the first cover where they differ.
    """
    cm = ptl.cm
    order = list(range(cm.size)) if order is None else list(order)
    _, verdict = _extension_positions(cm, order)
    if not verdict:
        return verdict
    omega = omega_labelling(ptl, order)
    second = gamma(ChainContext(ptl.lattice, psi_chain(ptl, order)), 2)
    differing = second.differences(omega)
    if differing:
        edge = differing[0]
        return Verdict(False, ('gamma', edge, second[edge], omega[edge]))
    return Verdict(True)


# D relation and congruences

def d_relation_formula(ptl: PTamariLattice) -> DGraph:
    """
    Closed-form D relation on join-irreducibles, written on ground elements:
    (x, i) D (y, i) iff y = phi(k) for some k <= i and y not <= x;
    (x, j) D (y, i) for i < j iff y <= x, phi(i+1) not <= x and no y' <= phi(i)
    has y < y' <= x.
    """
    cm = ptl.cm
    P, phi = cm.base, cm.phi
    on_phi = set(phi)
    node = ptl.jirr_of_ground
    graph = DGraph(nodes=sorted(node))
    for g, (x, j) in enumerate(cm.ground):
        for h, (y, i) in enumerate(cm.ground):
            if i == j:
                related = y in on_phi and phi.index(y) <= i and not P.leq[y, x]
            elif i < j:
                related = (P.leq[y, x] and not P.leq[phi[i + 1], x]
                           and not any(P.lt[y, z] and P.leq[z, x] and P.leq[z, phi[i]] for z in range(P.n)))
            else:
                related = False
            if related:
                graph.witnesses[(node[g], node[h])] = None
    return graph


def d_edges_as_labels(ptl: PTamariLattice, graph: DGraph) -> List[Tuple[int, int]]:
    label = {j: g + 1 for g, j in enumerate(ptl.jirr_of_ground)}
    return sorted((label[p], label[q]) for p, q in graph.edges)


def check_kupisch_sequence(K: Sequence[int], n: int):
    K = list(K)
    if len(K) != n:
        raise InvalidKupisch(K, f'expected {n} entries')
    for i, value in enumerate(K):
        if not 0 <= value <= i:
            raise InvalidKupisch(K, f'entry {i} must lie in 0..{i}')
    if any(a > b for a, b in zip(K, K[1:])):
        raise InvalidKupisch(K, 'entries must not decrease')


def kupisch_region(cm: Components, K: Sequence[int]) -> int:
    check_kupisch_sequence(K, cm.n)
    P, phi = cm.base, cm.phi
    return bitset.to_mask(g for g, (x, i) in enumerate(cm.ground) if P.leq[phi[K[i]], x])


def kupisch_congruence(ptl: PTamariLattice, K: Sequence[int]) -> CongruenceSpec:
    """Torclosed sets are equivalent when they agree on {(x, i) | x >= phi(K_i)}."""
    region = kupisch_region(ptl.cm, K)
    first = {}
    labels = [first.setdefault(F & region, i) for i, F in enumerate(ptl.elements)]
    theta = spec_from_labels(ptl.lattice, labels)
    verdict = is_congruence(ptl.lattice, theta.classes)
    if not verdict:
        raise PropertyViolation('Kupisch relation is a lattice congruence', verdict.witness)
    log.debug(f"Kupisch congruence for K={list(K)} has {len(theta.classes)} classes")
    return theta
