"""
Doubling of convex subsets, the join dependency relation D, lattice congruences
and quotients, and the search for a doubling script that rebuilds a lattice
from the one-element lattice.
"""
import logging
import random
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from torclosed import bitset
from torclosed.config import DEFAULTS
from torclosed.errors import NotALattice, NotConvex, PropertyViolation, SearchExhausted
from torclosed.lattice import Lattice, Verdict
from torclosed.poset import Poset

log = logging.getLogger(__name__)


# doubling

def doubled_elements(L: Lattice, C: int) -> List[Tuple[int, int]]:
    """Elements of L[C] in index order: I(C) x {0} first, then ((L minus I(C)) u C) x {1}."""
    ideal = L.base.ideal_generated(C)
    ones = (L.base.everything & ~ideal) | C
    return [(a, 0) for a in bitset.members(ideal)] + [(a, 1) for a in bitset.members(ones)]


def double(L: Lattice, C: int) -> Lattice:
    witness = L.base.convex_violation(C)
    if witness is not None:
        raise NotConvex(bitset.to_list(C), witness)
    elements = doubled_elements(L, C)
    idx = np.array([a for a, _ in elements])
    side = np.array([s for _, s in elements])
    leq = L.leq[np.ix_(idx, idx)] & (side[:, None] <= side[None, :])
    try:
        doubled = Lattice(Poset(leq, check=False))
    except NotALattice as e:
        raise PropertyViolation('doubling a convex subset gives a lattice', e.pair)
    if doubled.n != L.n + bitset.count(C):
        raise PropertyViolation('doubling adds |C| elements', bitset.to_list(C))
    return doubled


def heart(L: Lattice, C: int) -> int:
    """Elements of C below every maximal and above every minimal element of C."""
    witness = L.base.convex_violation(C)
    if witness is not None:
        raise NotConvex(bitset.to_list(C), witness)
    out = C
    for m in L.base.maximal_elements(C):
        out &= L.base.down[m]
    for m in L.base.minimal_elements(C):
        out &= L.base.up[m]
    return out


def is_lower_pseudo_interval(L: Lattice, C: int) -> bool:
    return C != 0 and len(L.base.minimal_elements(C)) == 1


def is_interval(L: Lattice, C: int) -> bool:
    return is_lower_pseudo_interval(L, C) and len(L.base.maximal_elements(C)) == 1


def check_chains_avoiding(L: Lattice, C: int) -> Verdict:
    """
    Every maximal chain disjoint from C meets an element that is neither below
    all maxima of C nor above all minima of C. Witness: a chain that does not.
    """
    if not C:
        raise PropertyViolation('subset is nonempty', None)
    below_max = bitset.full(L.n)
    for m in L.base.maximal_elements(C):
        below_max &= L.base.down[m]
    above_min = bitset.full(L.n)
    for m in L.base.minimal_elements(C):
        above_min &= L.base.up[m]
    allowed = (below_max | above_min) & ~C
    if not (allowed >> L.bottom & 1 and allowed >> L.top & 1):
        return Verdict(True)
    graph = L.base.hasse_graph().subgraph(bitset.to_list(allowed))
    if nx.has_path(graph, L.bottom, L.top):
        return Verdict(False, nx.shortest_path(graph, L.bottom, L.top))
    return Verdict(True)


# the D relation

@dataclass
class DGraph:
    nodes: List[int]
    witnesses: Dict[Tuple[int, int], int] = field(default_factory=dict)

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return sorted(self.witnesses)

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from((p, q, dict(witness=x)) for (p, q), x in self.witnesses.items())
        return graph

    def find_cycle(self) -> Optional[List[int]]:
        try:
            return [p for p, _ in nx.find_cycle(self.to_networkx())]
        except nx.NetworkXNoCycle:
            return None

    def transitive_closure(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset(nx.transitive_closure_dag(self.to_networkx()).edges())


def d_graph(L: Lattice) -> DGraph:
    """p D q iff p != q and p <= q v x, p not <= q_* v x for some x."""
    data = L.irreducible_data
    jirr = np.array(data.jirr, dtype=int)
    graph = DGraph(nodes=list(data.jirr))
    for q in data.jirr:
        q_star = data.lower_cover[q]
        hit = L.leq[np.ix_(jirr, L.join[q])] & ~L.leq[np.ix_(jirr, L.join[q_star])]
        for row, p in enumerate(jirr):
            xs = np.flatnonzero(hit[row])
            if p != q and len(xs):
                graph.witnesses[(int(p), q)] = int(xs[0])
    log.debug(f"D relation with {len(graph.witnesses)} edges on {len(jirr)} join-irreducibles")
    return graph


def has_d_cycle(L: Lattice) -> bool:
    return d_graph(L).find_cycle() is not None


def d_closed_sets(graph: DGraph) -> List[FrozenSet[int]]:
    """Subsets T with a D b, b in T implying a in T."""
    position = {j: i for i, j in enumerate(graph.nodes)}
    order = Poset.from_relations(len(graph.nodes), [(position[a], position[b]) for a, b in graph.edges])
    return [frozenset(graph.nodes[i] for i in bitset.members(ideal)) for ideal in order.all_ideals()]


# congruences

@dataclass(frozen=True)
class CongruenceSpec:
    contracted: FrozenSet[int]
    classes: Tuple[Tuple[int, ...], ...]

    def class_index(self, n: int) -> np.ndarray:
        index = np.empty(n, dtype=int)
        for i, members in enumerate(self.classes):
            index[list(members)] = i
        return index

    def pairs(self) -> List[Tuple[int, int]]:
        return [(members[0], x) for members in self.classes for x in members[1:]]


def spec_from_labels(L: Lattice, labels: Sequence[int]) -> CongruenceSpec:
    groups = defaultdict(list)
    for x, root in enumerate(labels):
        groups[root].append(x)
    classes = tuple(sorted(tuple(g) for g in groups.values()))
    data = L.irreducible_data
    contracted = frozenset(j for j in data.jirr if labels[j] == labels[data.lower_cover[j]])
    return CongruenceSpec(contracted=contracted, classes=classes)


def congruence_generated(L: Lattice, pairs) -> CongruenceSpec:
    parent = list(range(L.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pending = [(int(a), int(b)) for a, b in pairs]
    while pending:
        a, b = pending.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[max(ra, rb)] = min(ra, rb)
        pending.extend(zip(L.join[a].tolist(), L.join[b].tolist()))
        pending.extend(zip(L.meet[a].tolist(), L.meet[b].tolist()))
    return spec_from_labels(L, [find(x) for x in range(L.n)])


def principal_congruence(L: Lattice, j: int) -> CongruenceSpec:
    return congruence_generated(L, [(L.irreducible_data.lower_cover[j], j)])


def _join_with(L: Lattice, theta: CongruenceSpec, j: int) -> CongruenceSpec:
    return congruence_generated(L, theta.pairs() + [(L.irreducible_data.lower_cover[j], j)])


def generic_congruences(L: Lattice) -> List[CongruenceSpec]:
    """All congruences as joins of principal ones, independent of the D relation."""
    identity = congruence_generated(L, [])
    seen = {identity.contracted: identity}
    frontier = [identity]
    while frontier:
        grown = []
        for theta in frontier:
            for j in L.irreducible_data.jirr:
                if j in theta.contracted:
                    continue
                bigger = _join_with(L, theta, j)
                if bigger.contracted not in seen:
                    seen[bigger.contracted] = bigger
                    grown.append(bigger)
        frontier = grown
    return sorted(seen.values(), key=lambda s: (len(s.contracted), sorted(s.contracted)))


def is_congruence(L: Lattice, classes) -> Verdict:
    """Witness: (a, b, c) with a, b in one class and a v c, b v c (or the meets) apart."""
    index = np.full(L.n, -1)
    for i, members in enumerate(classes):
        for x in members:
            if index[x] != -1:
                return Verdict(False, ('overlap', x))
            index[x] = i
    if (index == -1).any():
        return Verdict(False, ('uncovered', int(np.flatnonzero(index == -1)[0])))
    for members in classes:
        first = members[0]
        for table in (L.join, L.meet):
            reference = index[table[first]]
            for b in members[1:]:
                bad = np.flatnonzero(index[table[b]] != reference)
                if len(bad):
                    return Verdict(False, (first, b, int(bad[0])))
    return Verdict(True)


def congruences(L: Lattice) -> Iterator[CongruenceSpec]:
    graph = d_graph(L)
    if graph.find_cycle() is not None:
        log.debug("D relation has a cycle, using the generic enumeration")
        yield from generic_congruences(L)
        return
    for closed in d_closed_sets(graph):
        data = L.irreducible_data
        theta = congruence_generated(L, [(data.lower_cover[j], j) for j in closed])
        if theta.contracted != closed:
            raise PropertyViolation('congruence contracts exactly its D-closed generators', sorted(closed))
        yield theta


def quotient(L: Lattice, theta: CongruenceSpec) -> Lattice:
    """Lattice of classes, ordered by their minima; class i holds theta.classes[i]."""
    index = theta.class_index(L.n)
    member = np.zeros((len(theta.classes), L.n), dtype=np.float32)
    member[index, np.arange(L.n)] = 1
    leq = (member @ L.leq.astype(np.float32) @ member.T) > 0
    Q = Lattice(Poset(leq))
    if not (Q.join[index[:, None], index[None, :]] == index[L.join]).all():
        raise PropertyViolation('quotient map preserves joins', theta.classes)
    if not (Q.meet[index[:, None], index[None, :]] == index[L.meet]).all():
        raise PropertyViolation('quotient map preserves meets', theta.classes)
    return Q


# doubling scripts

@dataclass(frozen=True)
class DoublingStep:
    size: int
    subset: Tuple[int, ...]


@dataclass
class DoublingScript:
    steps: List[DoublingStep] = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def to_dict(self):
        return dict(steps=[list(step.subset) for step in self.steps])

    @classmethod
    def from_subsets(cls, subsets: Sequence[Sequence[int]]) -> 'DoublingScript':
        script, size = cls(), 1
        for subset in subsets:
            script.steps.append(DoublingStep(size=size, subset=tuple(sorted(subset))))
            size += len(subset)
        return script


def replay(script: DoublingScript, trace=False):
    """Final lattice of the script, or every intermediate lattice when `trace`."""
    current = Lattice(Poset.chain(1))
    lattices = [current]
    for step in script.steps:
        if step.size != current.n:
            raise PropertyViolation('step is applied to a lattice of the recorded size', (step.size, current.n))
        current = double(current, bitset.to_mask(step.subset))
        lattices.append(current)
    return lattices if trace else current


def random_convex_subset(rng: random.Random, L: Lattice, max_size: Optional[int] = None) -> int:
    """Convex hull of up to three random elements, shrunk until it fits `max_size`."""
    picks = rng.sample(range(L.n), rng.randint(1, min(3, L.n)))
    while True:
        hull = L.base.convex_hull(bitset.to_mask(picks))
        if max_size is None or bitset.count(hull) <= max_size or len(picks) == 1:
            break
        picks.pop()
    if max_size is not None and bitset.count(hull) > max_size:
        return 1 << picks[0]
    return hull


def random_doubling_script(rng: random.Random, steps: int, max_size: int) -> DoublingScript:
    script = DoublingScript()
    current = Lattice(Poset.chain(1))
    for _ in range(steps):
        room = max_size - current.n
        if room < 1:
            break
        C = random_convex_subset(rng, current, room)
        script.steps.append(DoublingStep(size=current.n, subset=tuple(bitset.members(C))))
        current = double(current, C)
    return script


# undoubling

@dataclass
class NormalityCertificate:
    script: DoublingScript
    isomorphism: Dict[int, int]
    join_uniform: bool
    uniform: bool


def _small_congruences(L: Lattice) -> List[CongruenceSpec]:
    """Nontrivial congruences whose classes have at most two elements."""

    def small(theta):
        return all(len(members) <= 2 for members in theta.classes)

    principal = {}
    for j in L.irreducible_data.jirr:
        theta = principal_congruence(L, j)
        if small(theta):
            principal[j] = theta
    found = {theta.contracted: theta for theta in principal.values()}
    frontier = list(found.values())
    while frontier:
        grown = []
        for theta in frontier:
            for j in principal:
                if j in theta.contracted:
                    continue
                bigger = _join_with(L, theta, j)
                if small(bigger) and bigger.contracted not in found:
                    found[bigger.contracted] = bigger
                    grown.append(bigger)
        frontier = grown
    return list(found.values())


def _undouble(L: Lattice, theta: CongruenceSpec):
    """(Q, C) with L isomorphic to Q[C] through the contraction of theta, else None."""
    Q = quotient(L, theta)
    C = bitset.to_mask(i for i, members in enumerate(theta.classes) if len(members) == 2)
    if not Q.base.is_convex(C):
        return None
    ideal = Q.base.ideal_generated(C)
    elements = doubled_elements(Q, C)
    position = {e: i for i, e in enumerate(elements)}
    image = np.empty(L.n, dtype=int)
    for q, members in enumerate(theta.classes):
        if len(members) == 2:
            image[members[0]] = position[(q, 0)]
            image[members[1]] = position[(q, 1)]
        else:
            image[members[0]] = position[(q, 0 if ideal >> q & 1 else 1)]
    doubled = double(Q, C)
    if not (doubled.leq[np.ix_(image, image)] == L.leq).all():
        return None
    return Q, C


def certify_congruence_normal(L: Lattice, bound: Optional[int] = None,
                              budget: Optional[float] = None) -> Optional[NormalityCertificate]:
    """
    Search for a doubling script rebuilding L from the one-element lattice.
    Returns None when L is not congruence normal. The replayed lattice is
    isomorphic to L through `isomorphism` (element of L -> element of replay).
    """
    bound = DEFAULTS.certify_bound if bound is None else bound
    budget = DEFAULTS.budget if budget is None else budget
    if L.n > bound:
        raise SearchExhausted(f"lattice has {L.n} elements, certification bound is {bound}")
    deadline = time.monotonic() + budget
    failed = defaultdict(list)

    def known_failure(K):
        return any(K.base.is_isomorphic(other.base) for other in failed[K.base.fingerprint])

    def search(K: Lattice):
        if K.n == 1:
            return [], Lattice(Poset.chain(1)), np.zeros(1, dtype=int)
        if time.monotonic() > deadline:
            raise SearchExhausted(f"no doubling script found within {budget} seconds")
        if known_failure(K):
            return None
        candidates = []
        for theta in _small_congruences(K):
            undone = _undouble(K, theta)
            if undone is not None:
                Q, C = undone
                rank = (not is_lower_pseudo_interval(Q, C), not is_interval(Q, C), -bitset.count(C))
                candidates.append((rank, theta, Q, C))
        candidates.sort(key=lambda c: c[0])
        for _, theta, Q, C in candidates:
            found = search(Q)
            if found is None:
                continue
            steps, R, sigma = found
            C_R = bitset.to_mask(int(sigma[c]) for c in bitset.members(C))
            elements = doubled_elements(R, C_R)
            position = {e: i for i, e in enumerate(elements)}
            ideal = Q.base.ideal_generated(C)
            composed = np.empty(K.n, dtype=int)
            for q, members in enumerate(theta.classes):
                r = int(sigma[q])
                if len(members) == 2:
                    composed[members[0]] = position[(r, 0)]
                    composed[members[1]] = position[(r, 1)]
                else:
                    composed[members[0]] = position[(r, 0 if ideal >> q & 1 else 1)]
            steps = steps + [DoublingStep(size=R.n, subset=tuple(bitset.members(C_R)))]
            return steps, double(R, C_R), composed
        failed[K.base.fingerprint].append(K)
        return None

    found = search(L)
    if found is None:
        log.debug(f"no doubling script for a lattice with {L.n} elements")
        return None
    steps, R, sigma = found
    if not (R.leq[np.ix_(sigma, sigma)] == L.leq).all():
        raise PropertyViolation('replayed script is isomorphic to the input', None)
    script = DoublingScript(steps=steps)
    lattices = replay(script, trace=True)
    subsets = [bitset.to_mask(step.subset) for step in steps]
    join_uniform = all(is_lower_pseudo_interval(K, C) for K, C in zip(lattices, subsets))
    uniform = all(is_interval(K, C) for K, C in zip(lattices, subsets))
    log.debug(f"doubling script with {len(steps)} steps, join uniform {join_uniform}, uniform {uniform}")
    return NormalityCertificate(
        script=script,
        isomorphism={x: int(sigma[x]) for x in range(L.n)},
        join_uniform=join_uniform,
        uniform=uniform,
    )


# criteria along a script

def left_modular_chain_elements(L: Lattice) -> int:
    """Elements lying on some maximal chain made of left modular elements."""
    graph = L.base.hasse_graph().subgraph(L.left_modular_elements)
    if L.bottom not in graph or L.top not in graph:
        return 0
    forward = nx.descendants(graph, L.bottom) | {L.bottom}
    backward = nx.ancestors(graph, L.top) | {L.top}
    return bitset.to_mask(forward & backward)


@dataclass
class StepReport:
    size: int
    subset: Tuple[int, ...]
    lower_pseudo_interval: bool
    interval: bool
    meets_spine: bool
    heart_on_left_modular_chain: bool
    predicted_left_modular: List[int]
    actual_left_modular: List[int]
    chains_avoiding: Verdict


@dataclass
class DoublingReport:
    steps: List[StepReport]
    join_extremal: bool
    extremal: bool
    left_modular: bool
    violations: List[str] = field(default_factory=list)

    @property
    def consistent(self):
        return not self.violations


def check_doubling_criteria(script: DoublingScript) -> DoublingReport:
    lattices = replay(script, trace=True)
    reports = []
    violations = []
    for step, K, doubled in zip(script.steps, lattices, lattices[1:]):
        C = bitset.to_mask(step.subset)
        maxima = K.base.maximal_elements(C)
        minima = K.base.minimal_elements(C)
        lm = set(K.left_modular_elements)
        predicted = []
        for i, (b, s) in enumerate(doubled_elements(K, C)):
            if b not in lm:
                continue
            if s == 0 and all(K.leq[b, m] for m in maxima):
                predicted.append(i)
            elif s == 1 and all(K.leq[m, b] for m in minima):
                predicted.append(i)
        report = StepReport(
            size=K.n,
            subset=step.subset,
            lower_pseudo_interval=is_lower_pseudo_interval(K, C),
            interval=is_interval(K, C),
            meets_spine=bool(C & K.base.spine()),
            heart_on_left_modular_chain=bool(heart(K, C) & left_modular_chain_elements(K)),
            predicted_left_modular=predicted,
            actual_left_modular=list(doubled.left_modular_elements),
            chains_avoiding=check_chains_avoiding(K, C) if C else Verdict(True),
        )
        if report.predicted_left_modular != report.actual_left_modular:
            violations.append(f'left modular elements after step {len(reports)} differ from the prediction')
        if not report.chains_avoiding:
            violations.append(f'chain {report.chains_avoiding.witness} avoids C in step {len(reports)}')
        reports.append(report)

    final = lattices[-1]
    ext = final.extremality()
    left_modular = bool(final.is_left_modular())
    all_pseudo = all(r.lower_pseudo_interval for r in reports)
    all_interval = all(r.interval for r in reports)
    if all_pseudo and ext.join_extremal != all(r.meets_spine for r in reports):
        violations.append('join extremality disagrees with spine hits of the lower pseudo-intervals')
    if all_interval and ext.extremal != all(r.meets_spine for r in reports):
        violations.append('extremality disagrees with spine hits of the intervals')
    if left_modular != all(r.heart_on_left_modular_chain for r in reports):
        violations.append('left modularity disagrees with hearts meeting left modular chains')
    if all_interval and ext.extremal:
        lm = set(final.left_modular_elements)
        off = [x for x in bitset.members(final.base.spine()) if x not in lm]
        if off:
            violations.append(f'spine element {off[0]} of an extremal lattice is not left modular')
    if all_pseudo and left_modular and not ext.join_extremal:
        violations.append('left modular join-congruence uniform lattice is not join extremal')
    if all_interval and ext.extremal != left_modular:
        violations.append('extremality and left modularity differ on a congruence uniform lattice')
    for v in violations:
        log.debug(v)
    return DoublingReport(
        steps=reports,
        join_extremal=ext.join_extremal,
        extremal=ext.extremal,
        left_modular=left_modular,
        violations=violations,
    )
